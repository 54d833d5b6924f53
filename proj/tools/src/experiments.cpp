#include "voltarget/tools/experiments.hpp"

#include <cmath>
#include <numbers>

#include "voltarget/errors.hpp"
#include "voltarget/limit_pricer.hpp"
#include "voltarget/montecarlo.hpp"

namespace voltarget::tools {

namespace {

using I64 = std::int64_t;

struct LambdaContext {
  LambdaParam lambda;
  IndexConfig index;
  double U;
  double V;
  LogMoments limit;
  double discount;
};

LambdaContext context_for(const ExperimentConfig& cfg, double lambda_value) {
  const LambdaParam lambda(lambda_value);
  IndexConfig index = cfg.index;
  index.lambda = lambda;
  const double U = compute_U(lambda, cfg.quadrature).value;
  const double V = compute_V(lambda, cfg.quadrature).value;
  const double T = cfg.horizon();
  const auto params = limiting_params(cfg.market, lambda, index.target_vol, U, V, index.fee_adjusted());
  return {lambda, index, U, V, terminal_lognormal(params, index.I0, T),
          std::exp(-cfg.market.r_disc.integrate(0.0, T))};
}

GridSpec grid_for(const ExperimentConfig& cfg, int N) { return {cfg.horizon(), N}; }

MarketParams shift_sigma(const MarketParams& market, double delta) {
  MarketParams out = market;
  const auto bp = market.sigma.breakpoints();
  std::vector<double> values(market.sigma.values().begin(), market.sigma.values().end());
  for (double& v : values) v += delta;
  out.sigma = PiecewiseCurve({bp.begin(), bp.end()}, std::move(values), market.horizon());
  out.sigma_lo = market.sigma_lo + delta;
  out.sigma_hi = market.sigma_hi + delta;
  return out;
}

double normal_pdf(double x, double mean, double var) {
  const double z = (x - mean) / std::sqrt(var);
  return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi * var);
}

}  // namespace

Command parse_command(std::string_view name) {
  if (name == "multipliers") return Command::kMultipliers;
  if (name == "density") return Command::kDensity;
  if (name == "vol-convergence") return Command::kVolConvergence;
  if (name == "price-convergence") return Command::kPriceConvergence;
  if (name == "vega") return Command::kVega;
  if (name == "lln-clt") return Command::kLlnClt;
  throw ConfigError("unknown command '" + std::string(name) + "'");
}

std::string command_name(Command command) {
  switch (command) {
    case Command::kMultipliers: return "multipliers";
    case Command::kDensity: return "density";
    case Command::kVolConvergence: return "vol-convergence";
    case Command::kPriceConvergence: return "price-convergence";
    case Command::kVega: return "vega";
    case Command::kLlnClt: return "lln-clt";
  }
  return {};
}

CsvTable cmd_multipliers(const ExperimentConfig& cfg) {
  CsvTable t{"multipliers", {"lambda", "U", "U_lo", "U_hi", "V", "V_lo", "V_hi", "U_err", "V_err"}, {}};
  for (double l : cfg.lambdas) {
    const auto m = compute_multipliers(LambdaParam(l), cfg.quadrature);
    t.add_row({l, m.u_value, m.u_bounds.lo, m.u_bounds.hi, m.v_value, m.v_bounds.lo, m.v_bounds.hi,
               m.u_err_est, m.v_err_est});
  }
  return t;
}

CsvTable cmd_density(const ExperimentConfig& cfg) {
  CsvTable t{"density", {"lambda", "N", "x", "kde", "histogram", "limit_density"}, {}};
  for (double l : cfg.lambdas) {
    const auto ctx = context_for(cfg, l);
    const double sd = std::sqrt(ctx.limit.var_log);
    const auto grid = linspace(ctx.limit.mean_log - 5.0 * sd, ctx.limit.mean_log + 5.0 * sd, cfg.density.points);
    for (int N : cfg.steps) {
      const auto sim = run_batch(cfg.market, ctx.index, grid_for(cfg, N), cfg.paths, cfg.seed, cfg.threads);
      const auto samples = sim.disc_samples();
      std::vector<double> kde_values(grid.size(), std::nan(""));
      if (samples.size() >= 2) kde_values = kde(samples, grid, cfg.density.bandwidth);
      std::vector<double> hist_values(grid.size(), std::nan(""));
      if (cfg.density.bins > 0 && !samples.empty()) {
        const auto h = histogram(samples, cfg.density.bins, grid.front(), grid.back());
        const double width = (h.hi - h.lo) / cfg.density.bins;
        const double scale = 1.0 / (static_cast<double>(samples.size()) * width);
        for (std::size_t i = 0; i < grid.size(); ++i) {
          const auto b = std::min(static_cast<std::size_t>((grid[i] - h.lo) / width), h.counts.size() - 1);
          hist_values[i] = static_cast<double>(h.counts[b]) * scale;
        }
      }
      for (std::size_t i = 0; i < grid.size(); ++i) {
        t.add_row({l, I64{N}, grid[i], kde_values[i], hist_values[i],
                   normal_pdf(grid[i], ctx.limit.mean_log, ctx.limit.var_log)});
      }
    }
  }
  return t;
}

CsvTable cmd_vol_convergence(const ExperimentConfig& cfg) {
  CsvTable t{"vol-convergence", {"lambda", "N", "paths", "sample_std", "std_stderr", "target_std"}, {}};
  for (double l : cfg.lambdas) {
    const auto ctx = context_for(cfg, l);
    const double target = ctx.index.target_vol * std::sqrt(ctx.V * cfg.horizon());
    for (int N : cfg.steps) {
      const auto sim = run_batch(cfg.market, ctx.index, grid_for(cfg, N), cfg.paths, cfg.seed, cfg.threads);
      double std = 0.0;
      double se = 0.0;
      if (sim.paths() >= 2) {
        const auto s = summary(sim.log_cont);
        std = s.std;
        se = s.stderr_std;
      }
      t.add_row({l, I64{N}, I64{cfg.paths}, std, se, target});
    }
  }
  return t;
}

CsvTable cmd_price_convergence(const ExperimentConfig& cfg) {
  CsvTable t{"price-convergence", {"lambda", "N", "paths", "mc_price", "mc_stderr", "limit_price"}, {}};
  for (double l : cfg.lambdas) {
    const auto ctx = context_for(cfg, l);
    const double limit = bs_call(ctx.limit.mean_log, ctx.limit.var_log, cfg.strike, ctx.discount);
    for (int N : cfg.steps) {
      const auto sim = run_batch(cfg.market, ctx.index, grid_for(cfg, N), cfg.paths, cfg.seed, cfg.threads);
      const auto mc = mc_call_price(sim.log_cont, cfg.strike, ctx.discount);
      t.add_row({l, I64{N}, I64{cfg.paths}, mc.value, mc.std_error, limit});
    }
  }
  return t;
}

CsvTable cmd_vega(const ExperimentConfig& cfg) {
  CsvTable t{"vega", {"lambda", "N", "paths", "mc_vega", "mc_stderr", "converted_vega"}, {}};
  const MarketParams up = shift_sigma(cfg.market, cfg.bump);
  const MarketParams down = shift_sigma(cfg.market, -cfg.bump);
  try {
    down.validate();
  } catch (const DomainError&) {
    throw ConfigError("[option] bump must be smaller than the lowest volatility");
  }
  for (double l : cfg.lambdas) {
    const auto ctx = context_for(cfg, l);
    const double dmu = rho_drift(ctx.limit.mean_log, ctx.limit.var_log, cfg.strike, ctx.discount, cfg.horizon());
    double converted = std::nan("");
    try {
      converted = vega_conversion(cfg.market, ctx.index.target_vol, ctx.U, dmu);
    } catch (const HypothesisError&) {
      // time-dependent curves: no closed-form column
    }
    for (int N : cfg.steps) {
      const GridSpec grid = grid_for(cfg, N);
      const auto hi = run_batch(up, ctx.index, grid, cfg.paths, cfg.seed, cfg.threads);
      const auto lo = run_batch(down, ctx.index, grid, cfg.paths, cfg.seed, cfg.threads);
      const auto mc = mc_bump_sensitivity(hi.log_cont, lo.log_cont, cfg.strike, ctx.discount, cfg.bump);
      t.add_row({l, I64{N}, I64{cfg.paths}, mc.value, mc.std_error, converted});
    }
  }
  return t;
}

CsvTable cmd_lln_clt(const ExperimentConfig& cfg) {
  CsvTable t{"lln-clt", {"test", "lambda", "N", "paths", "statistic", "estimate", "stderr", "target"}, {}};
  if (!cfg.market.sigma.is_constant()) throw ConfigError("lln-clt needs a constant [market] sigma");
  DriverSpec spec;
  spec.v0 = cfg.index.v0;
  spec.sigma = cfg.market.sigma.values().front();
  spec.seed = cfg.seed;
  for (double l : cfg.lambdas) {
    spec.lambda = LambdaParam(l);
    spec.paths = cfg.driver.lln_paths;
    for (int N : cfg.driver.lln_steps) {
      spec.steps = N;
      const auto r = lln_verify(spec, cfg.threads, cfg.quadrature);
      t.add_row({"lln", l, I64{N}, I64{spec.paths}, "U", r.u_stats.mean, r.u_stats.stderr_mean, r.target_u.value});
      t.add_row({"lln", l, I64{N}, I64{spec.paths}, "V", r.v_stats.mean, r.v_stats.stderr_mean, r.target_v.value});
    }
    spec.paths = cfg.driver.clt_paths;
    spec.steps = cfg.driver.clt_steps;
    const auto c = clt_verify(spec, cfg.threads, cfg.quadrature);
    const I64 N{spec.steps};
    const I64 P{spec.paths};
    t.add_row({"clt", l, N, P, "variance", c.variance.variance, c.variance.stderr_variance, c.target_v.value});
    t.add_row({"clt", l, N, P, "skewness", c.shape.skewness, c.shape.skewness_stderr, 0.0});
    t.add_row({"clt", l, N, P, "excess_kurtosis", c.shape.excess_kurtosis, c.shape.kurtosis_stderr, 0.0});
  }
  return t;
}

CsvTable run_command(Command command, const ExperimentConfig& cfg) {
  cfg.validate();
  switch (command) {
    case Command::kMultipliers: return cmd_multipliers(cfg);
    case Command::kDensity: return cmd_density(cfg);
    case Command::kVolConvergence: return cmd_vol_convergence(cfg);
    case Command::kPriceConvergence: return cmd_price_convergence(cfg);
    case Command::kVega: return cmd_vega(cfg);
    case Command::kLlnClt: return cmd_lln_clt(cfg);
  }
  throw ConfigError("unhandled command");
}

}  // namespace voltarget::tools
