#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "voltarget/errors.hpp"
#include "voltarget/tools/experiments.hpp"

namespace vtools = voltarget::tools;

int main(int argc, char** argv) {
  CLI::App app{"Volatility target index experiments: multipliers, densities and price convergence"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;

  const char* commands[] = {"multipliers", "density", "vol-convergence", "price-convergence", "vega", "lln-clt"};
  for (const char* name : commands) {
    auto* sub = app.add_subcommand(name, std::string("write the ") + name + " CSV table");
    sub->add_option("--config", config_path, "experiment config (INI)")->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "output directory; <command>.csv is written there (default: stdout)");
    sub->add_option("--seed", seed, "override [run] seed");
    sub->add_option("--threads", threads, "worker threads, 0 = all cores; never changes results");
  }
  CLI11_PARSE(app, argc, argv);

  try {
    const auto* sub = app.get_subcommands().front();
    const auto command = vtools::parse_command(sub->get_name());
    auto cfg = config_path.empty() ? vtools::parse_config("") : vtools::load_config(config_path);
    if (seed) cfg.seed = *seed;
    if (threads) cfg.threads = *threads;
    const std::string csv = vtools::run_command(command, cfg).to_csv();
    if (out_dir.empty()) {
      std::cout << csv;
    } else {
      std::filesystem::create_directories(out_dir);
      const auto path = std::filesystem::path(out_dir) / (vtools::command_name(command) + ".csv");
      std::ofstream out(path, std::ios::binary);
      out << csv;
      if (!out) throw std::runtime_error("failed to write " + path.string());
      std::cerr << "wrote " << path.string() << "\n";
    }
  } catch (const vtools::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
