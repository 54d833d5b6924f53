#include "voltarget/limit_pricer.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "voltarget/errors.hpp"

namespace voltarget {

namespace {

void check_pricing_inputs(double var_log, double strike) {
  if (!(var_log >= 0.0)) throw DomainError("var_log must be non-negative");
  if (!(strike >= 0.0)) throw DomainError("strike must be non-negative");
}

}  // namespace

void OptionSpec::validate() const {
  if (!(strike > 0.0) || !(maturity > 0.0)) throw DomainError("option strike and maturity must be positive");
}

LimitDiffusionParams limiting_params(const MarketParams& market, LambdaParam /*lambda*/,
                                     double target_vol, double U, double V, bool fee_adjusted) {
  std::vector<const PiecewiseCurve*> curves = {&market.r, &market.rho, &market.sigma};
  const bool with_a = fee_adjusted && market.a.has_value();
  if (with_a) curves.push_back(&*market.a);
  auto points = common_refinement(curves);

  std::vector<double> drift;
  drift.reserve(points.size());
  for (double t : points) {
    double carry = market.rho.value_at(t) - market.r.value_at(t);
    if (with_a) carry += market.a->value_at(t);
    drift.push_back(market.r.value_at(t) + carry / market.sigma.value_at(t) * target_vol * U);
  }
  return {PiecewiseCurve(std::move(points), std::move(drift), market.horizon()),
          target_vol * std::sqrt(V), U, V};
}

LogMoments terminal_lognormal(const LimitDiffusionParams& params, double I0, double T) {
  if (!(I0 > 0.0)) throw DomainError("I0 must be positive");
  const double var = params.vol * params.vol * T;
  return {std::log(I0) + params.drift.integrate(0.0, T) - 0.5 * var, var};
}

double normal_cdf(double x) noexcept { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double bs_call(double mean_log, double var_log, double strike, double discount) {
  check_pricing_inputs(var_log, strike);
  const double forward = std::exp(mean_log + 0.5 * var_log);
  if (strike == 0.0) return discount * forward;
  if (var_log == 0.0) return discount * std::max(std::exp(mean_log) - strike, 0.0);
  const double sd = std::sqrt(var_log);
  const double d1 = (mean_log - std::log(strike) + var_log) / sd;
  const double d2 = d1 - sd;
  return discount * (forward * normal_cdf(d1) - strike * normal_cdf(d2));
}

double bs_put(double mean_log, double var_log, double strike, double discount) {
  check_pricing_inputs(var_log, strike);
  const double forward = std::exp(mean_log + 0.5 * var_log);
  if (strike == 0.0) return 0.0;
  if (var_log == 0.0) return discount * std::max(strike - std::exp(mean_log), 0.0);
  const double sd = std::sqrt(var_log);
  const double d1 = (mean_log - std::log(strike) + var_log) / sd;
  const double d2 = d1 - sd;
  return discount * (strike * normal_cdf(-d2) - forward * normal_cdf(-d1));
}

double rho_drift(double mean_log, double var_log, double strike, double discount, double T) {
  check_pricing_inputs(var_log, strike);
  if (!(var_log > 0.0)) throw DomainError("rho_drift requires var_log > 0");
  const double forward = std::exp(mean_log + 0.5 * var_log);
  if (strike == 0.0) return T * discount * forward;
  const double d1 = (mean_log - std::log(strike) + var_log) / std::sqrt(var_log);
  return T * discount * forward * normal_cdf(d1);
}

double vega_conversion(const MarketParams& market, double target_vol, double U, double drift_sensitivity) {
  if (!market.r.is_constant() || !market.rho.is_constant() || !market.sigma.is_constant()) {
    throw HypothesisError("the rho-vega conversion holds only for constant r, rho and sigma");
  }
  const double r = market.r.values().front();
  const double rho = market.rho.values().front();
  const double sigma = market.sigma.values().front();
  return (r - rho) / (sigma * sigma) * target_vol * U * drift_sensitivity;
}

}  // namespace voltarget
