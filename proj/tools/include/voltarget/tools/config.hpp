#pragma once

// Experiment configuration: INI sections [market], [index], [run], [option],
// [density], [quadrature], [driver]. Unknown sections or keys are errors.
// See docs in README.md for the grammar.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "voltarget/index_engine.hpp"
#include "voltarget/market.hpp"
#include "voltarget/multipliers.hpp"

namespace voltarget::tools {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct DensityOptions {
  int points = 201;
  std::optional<double> bandwidth;  // Silverman rule when empty
  int bins = 0;                     // histogram column when > 0
};

struct DriverOptions {
  std::vector<int> lln_steps{1000, 10'000, 100'000};
  int lln_paths = 16;
  int clt_steps = 10'000;
  int clt_paths = 10'000;
};

struct ExperimentConfig {
  MarketParams market = MarketParams::constant(0.05, 0.03, 0.5, 1.0);
  IndexConfig index;
  std::vector<double> lambdas;  // defaults to {index.lambda}
  std::vector<int> steps{1000};
  int paths = 1000;
  std::uint64_t seed = 1;
  int threads = 0;
  double strike = 1.0;
  double bump = 0.001;
  DensityOptions density;
  QuadratureSettings quadrature;
  DriverOptions driver;

  [[nodiscard]] double horizon() const noexcept { return market.horizon(); }
  void validate() const;
};

/// "0.05" or "t0:v0, t1:v1, ..." with t0 = 0.
[[nodiscard]] PiecewiseCurve parse_curve(std::string_view text, double horizon);

/// "a, b, c" or an inclusive range "start:stop:step".
[[nodiscard]] std::vector<double> parse_real_list(std::string_view text);
[[nodiscard]] std::vector<int> parse_int_list(std::string_view text);

[[nodiscard]] ExperimentConfig parse_config(const std::string& text);
[[nodiscard]] ExperimentConfig load_config(const std::filesystem::path& path);

}  // namespace voltarget::tools
