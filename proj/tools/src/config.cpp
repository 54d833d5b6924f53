#include "voltarget/tools/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "voltarget/errors.hpp"

namespace voltarget::tools {

namespace {

namespace pt = boost::property_tree;

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    parts.push_back(trim(s.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

double to_real(std::string_view s) {
  s = trim(s);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(value)) {
    throw ConfigError("not a finite number: '" + std::string(s) + "'");
  }
  return value;
}

long long to_integer(std::string_view s) {
  s = trim(s);
  long long value = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw ConfigError("not an integer: '" + std::string(s) + "'");
  }
  return value;
}

int to_int(std::string_view s) {
  const long long v = to_integer(s);
  if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
    throw ConfigError("integer out of range: '" + std::string(s) + "'");
  }
  return static_cast<int>(v);
}

const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"market", {"T", "r", "rho", "sigma", "r_disc", "a", "sigma_lo", "sigma_hi"}},
      {"index",
       {"lambda", "target_vol", "v0", "I0", "variant", "sma_window", "lambda1", "lambda2", "w_max",
        "leverage_lag"}},
      {"run", {"lambdas", "steps", "paths", "seed", "threads"}},
      {"option", {"strike", "bump"}},
      {"density", {"points", "bandwidth", "bins"}},
      {"quadrature", {"abs_tol", "rel_tol", "product_trunc_eps", "domain_split", "max_subdivisions"}},
      {"driver", {"lln_steps", "lln_paths", "clt_steps", "clt_paths"}},
  };
  return keys;
}

// Section view that remembers which keys were read.
class Section {
 public:
  Section(const pt::ptree* tree, std::string name) : tree_(tree), name_(std::move(name)) {}

  [[nodiscard]] std::optional<std::string> get(const std::string& key) const {
    if (!tree_) return std::nullopt;
    const auto child = tree_->get_child_optional(pt::ptree::path_type(key, '\0'));
    if (!child) return std::nullopt;
    return child->data();
  }
  [[nodiscard]] std::string where(const std::string& key) const { return "[" + name_ + "] " + key; }

  template <class Fn>
  auto parse(const std::string& key, Fn&& fn) const -> std::optional<decltype(fn(std::string_view{}))> {
    const auto raw = get(key);
    if (!raw) return std::nullopt;
    try {
      return fn(std::string_view(*raw));
    } catch (const ConfigError& e) {
      throw ConfigError(where(key) + ": " + e.what());
    } catch (const DomainError& e) {
      throw ConfigError(where(key) + ": " + e.what());
    }
  }

 private:
  const pt::ptree* tree_;
  std::string name_;
};

LambdaParam to_lambda(std::string_view s) {
  const double v = to_real(s);
  if (!(v > 0.0 && v < 1.0)) throw ConfigError("lambda out of range (0, 1): " + std::string(trim(s)));
  return LambdaParam(v);
}

}  // namespace

std::vector<double> parse_real_list(std::string_view text) {
  text = trim(text);
  if (text.empty()) throw ConfigError("empty list");
  const auto colon = split(text, ':');
  if (colon.size() == 3) {
    const double start = to_real(colon[0]);
    const double stop = to_real(colon[1]);
    const double step = to_real(colon[2]);
    if (!(step > 0.0) || stop < start) throw ConfigError("range needs start <= stop and step > 0");
    const auto count = static_cast<long long>(std::llround((stop - start) / step));
    if (std::abs(start + count * step - stop) > 1e-9 * std::max(1.0, std::abs(stop))) {
      throw ConfigError("range step does not divide the interval");
    }
    std::vector<double> out;
    for (long long i = 0; i <= count; ++i) {
      // Round to 12 digits so 0.71 + 3 * 0.01 prints as 0.74.
      const double x = start + static_cast<double>(i) * step;
      out.push_back(std::round(x * 1e12) / 1e12);
    }
    return out;
  }
  if (colon.size() != 1) throw ConfigError("expected a list or start:stop:step");
  std::vector<double> out;
  for (auto part : split(text, ',')) out.push_back(to_real(part));
  return out;
}

std::vector<int> parse_int_list(std::string_view text) {
  text = trim(text);
  if (text.empty()) throw ConfigError("empty list");
  std::vector<int> out;
  for (auto part : split(text, ',')) out.push_back(to_int(part));
  return out;
}

PiecewiseCurve parse_curve(std::string_view text, double horizon) {
  text = trim(text);
  if (text.empty()) throw ConfigError("empty curve");
  if (text.find(':') == std::string_view::npos) return PiecewiseCurve::constant(to_real(text), horizon);
  std::vector<double> times;
  std::vector<double> values;
  for (auto piece : split(text, ',')) {
    const auto tv = split(piece, ':');
    if (tv.size() != 2) throw ConfigError("curve pieces must look like time:value");
    times.push_back(to_real(tv[0]));
    values.push_back(to_real(tv[1]));
  }
  try {
    return PiecewiseCurve(std::move(times), std::move(values), horizon);
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
}

void ExperimentConfig::validate() const {
  try {
    market.validate();
    index.validate();
    quadrature.validate();
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  if (lambdas.empty()) throw ConfigError("[run] lambdas must not be empty");
  for (double l : lambdas) {
    if (!(l > 0.0 && l < 1.0)) throw ConfigError("[run] lambdas: value out of range (0, 1)");
  }
  if (steps.empty()) throw ConfigError("[run] steps must not be empty");
  for (int n : steps) {
    if (n < 1) throw ConfigError("[run] steps: every N must be >= 1");
  }
  if (paths < 1) throw ConfigError("[run] paths must be >= 1");
  if (threads < 0) throw ConfigError("[run] threads must be >= 0");
  if (!(strike > 0.0)) throw ConfigError("[option] strike must be positive");
  if (!(bump > 0.0)) throw ConfigError("[option] bump must be positive");
  if (density.points < 2) throw ConfigError("[density] points must be >= 2");
  if (density.bandwidth && !(*density.bandwidth > 0.0)) throw ConfigError("[density] bandwidth must be positive");
  if (density.bins < 0) throw ConfigError("[density] bins must be >= 0");
  if (driver.lln_steps.empty()) throw ConfigError("[driver] lln_steps must not be empty");
  for (int n : driver.lln_steps) {
    if (n < 1) throw ConfigError("[driver] lln_steps must be >= 1");
  }
  if (driver.lln_paths < 1 || driver.clt_steps < 1) throw ConfigError("[driver] sizes must be >= 1");
  if (driver.clt_paths < 4) throw ConfigError("[driver] clt_paths must be >= 4");
}

ExperimentConfig parse_config(const std::string& text) {
  pt::ptree tree;
  try {
    std::istringstream in(text);
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config syntax: ") + e.what());
  }

  for (const auto& [section, body] : tree) {
    const auto it = schema().find(section);
    if (it == schema().end()) throw ConfigError("unknown section [" + section + "]");
    if (!body.data().empty()) throw ConfigError("key outside a section: " + section);
    for (const auto& [key, value] : body) {
      if (!it->second.count(key)) throw ConfigError("unknown key " + key + " in [" + section + "]");
    }
  }
  auto section = [&](const std::string& name) {
    const auto child = tree.get_child_optional(name);
    return Section(child ? &*child : nullptr, name);
  };

  ExperimentConfig cfg;

  const Section m = section("market");
  const double T = m.parse("T", to_real).value_or(1.0);
  if (!(T > 0.0)) throw ConfigError("[market] T must be positive");
  auto curve = [&](const std::string& key, double fallback) {
    return m.parse(key, [&](std::string_view s) { return parse_curve(s, T); })
        .value_or(PiecewiseCurve::constant(fallback, T));
  };
  cfg.market.r = curve("r", 0.05);
  cfg.market.rho = curve("rho", 0.03);
  cfg.market.sigma = curve("sigma", 0.5);
  cfg.market.r_disc = m.get("r_disc") ? curve("r_disc", 0.0) : cfg.market.r;
  if (m.get("a")) cfg.market.a = curve("a", 0.0);
  cfg.market.sigma_lo = m.parse("sigma_lo", to_real).value_or(cfg.market.sigma.min_value());
  cfg.market.sigma_hi = m.parse("sigma_hi", to_real).value_or(cfg.market.sigma.max_value());

  const Section ix = section("index");
  if (auto l = ix.parse("lambda", to_lambda)) cfg.index.lambda = *l;
  cfg.index.target_vol = ix.parse("target_vol", to_real).value_or(cfg.index.target_vol);
  cfg.index.v0 = ix.parse("v0", to_real).value_or(cfg.index.v0);
  cfg.index.I0 = ix.parse("I0", to_real).value_or(cfg.index.I0);
  cfg.index.leverage_lag = ix.parse("leverage_lag", to_int).value_or(cfg.index.leverage_lag);
  const std::string variant = ix.get("variant").value_or("ewma");
  const std::string_view v = trim(variant);
  if (v == "ewma") {
    cfg.index.variant = EwmaVariant{};
  } else if (v == "sma") {
    cfg.index.variant = SmaVariant{ix.parse("sma_window", to_int).value_or(20)};
  } else if (v == "capped") {
    CappedVariant c{cfg.index.lambda, cfg.index.lambda, 1.5};
    if (auto l = ix.parse("lambda1", to_lambda)) c.lambda1 = *l;
    if (auto l = ix.parse("lambda2", to_lambda)) c.lambda2 = *l;
    c.w_max = ix.parse("w_max", to_real).value_or(c.w_max);
    cfg.index.variant = c;
  } else if (v == "fee") {
    cfg.index.variant = FeeAdjustedVariant{};
  } else {
    throw ConfigError("[index] variant must be one of ewma, sma, capped, fee");
  }

  const Section run = section("run");
  cfg.lambdas = run.parse("lambdas", parse_real_list).value_or(std::vector<double>{cfg.index.lambda.value()});
  cfg.steps = run.parse("steps", parse_int_list).value_or(cfg.steps);
  cfg.paths = run.parse("paths", to_int).value_or(cfg.paths);
  if (auto s = run.parse("seed", to_integer)) {
    if (*s < 0) throw ConfigError("[run] seed must be non-negative");
    cfg.seed = static_cast<std::uint64_t>(*s);
  }
  cfg.threads = run.parse("threads", to_int).value_or(cfg.threads);

  const Section opt = section("option");
  cfg.strike = opt.parse("strike", to_real).value_or(cfg.strike);
  cfg.bump = opt.parse("bump", to_real).value_or(cfg.bump);

  const Section den = section("density");
  cfg.density.points = den.parse("points", to_int).value_or(cfg.density.points);
  cfg.density.bandwidth = den.parse("bandwidth", to_real);
  cfg.density.bins = den.parse("bins", to_int).value_or(cfg.density.bins);

  const Section q = section("quadrature");
  cfg.quadrature.abs_tol = q.parse("abs_tol", to_real).value_or(cfg.quadrature.abs_tol);
  cfg.quadrature.rel_tol = q.parse("rel_tol", to_real).value_or(cfg.quadrature.rel_tol);
  cfg.quadrature.product_trunc_eps = q.parse("product_trunc_eps", to_real).value_or(cfg.quadrature.product_trunc_eps);
  cfg.quadrature.domain_split = q.parse("domain_split", to_real).value_or(cfg.quadrature.domain_split);
  cfg.quadrature.max_subdivisions = q.parse("max_subdivisions", to_int).value_or(cfg.quadrature.max_subdivisions);

  const Section drv = section("driver");
  cfg.driver.lln_steps = drv.parse("lln_steps", parse_int_list).value_or(cfg.driver.lln_steps);
  cfg.driver.lln_paths = drv.parse("lln_paths", to_int).value_or(cfg.driver.lln_paths);
  cfg.driver.clt_steps = drv.parse("clt_steps", to_int).value_or(cfg.driver.clt_steps);
  cfg.driver.clt_paths = drv.parse("clt_paths", to_int).value_or(cfg.driver.clt_paths);

  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

}  // namespace voltarget::tools
