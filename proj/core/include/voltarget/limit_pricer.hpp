#pragma once

#include "voltarget/market.hpp"
#include "voltarget/multipliers.hpp"

namespace voltarget {

/// Itô diffusion dX = mu(t) X dt + vol X dW the index converges to as dt -> 0.
struct LimitDiffusionParams {
  PiecewiseCurve drift;  // r + (rho - r [+ a]) sigma^{-1} target U
  double vol = 0.0;      // target sqrt(V)
  double U = 0.0;
  double V = 0.0;
};

struct OptionSpec {
  double strike = 1.0;
  double maturity = 1.0;

  void validate() const;
};

/// Drift curve on the common refinement of r, rho, sigma (and a when
/// fee_adjusted), volatility target * sqrt(V).
[[nodiscard]] LimitDiffusionParams limiting_params(const MarketParams& market, LambdaParam lambda,
                                                   double target_vol, double U, double V,
                                                   bool fee_adjusted = false);

struct LogMoments {
  double mean_log = 0.0;
  double var_log = 0.0;
};

/// Mean and variance of log X_T for X_0 = I0.
[[nodiscard]] LogMoments terminal_lognormal(const LimitDiffusionParams& params, double I0, double T);

/// Standard normal CDF.
[[nodiscard]] double normal_cdf(double x) noexcept;

/// discount * E[max(Y - K, 0)] for log Y ~ N(mean_log, var_log).
/// Throws DomainError on var_log < 0 or K < 0.
[[nodiscard]] double bs_call(double mean_log, double var_log, double strike, double discount);

/// Put counterpart, used to check call-put parity.
[[nodiscard]] double bs_put(double mean_log, double var_log, double strike, double discount);

/// Sensitivity of the call price to a parallel shift of the drift:
/// T * discount * exp(mean_log + var_log / 2) * Phi(d1). Requires var_log > 0.
[[nodiscard]] double rho_drift(double mean_log, double var_log, double strike, double discount,
                               double T);

/// (r - rho) sigma^{-2} target U * drift_sensitivity. Throws HypothesisError
/// unless r, rho and sigma are constant.
[[nodiscard]] double vega_conversion(const MarketParams& market, double target_vol, double U,
                                     double drift_sensitivity);

}  // namespace voltarget
