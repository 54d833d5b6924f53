#pragma once

// Drift and variance multipliers U(lambda), V(lambda) of the limiting
// diffusion of an EWMA volatility target index, the q-special functions their
// closed forms are built from, and the analytic bounds.

namespace voltarget {

/// EWMA decay parameter, strictly inside (0, 1).
class LambdaParam {
 public:
  explicit LambdaParam(double value);
  [[nodiscard]] double value() const noexcept { return value_; }

 private:
  double value_;
};

struct QuadratureSettings {
  double abs_tol = 1e-9;
  double rel_tol = 1e-10;
  double product_trunc_eps = 1e-12;  // omit factor k once lambda^k * x < eps
  double domain_split = 1.0;         // [0, split] direct, [split, inf) via t = 1/s
  int max_subdivisions = 2000;

  void validate() const;
};

struct Bounds {
  double lo = 0.0;
  double hi = 0.0;

  [[nodiscard]] bool contains(double x) const noexcept { return lo <= x && x <= hi; }
};

struct MultiplierEstimate {
  double value = 0.0;
  double err_est = 0.0;
};

struct MultiplierResult {
  double u_value = 0.0;
  double v_value = 0.0;
  double u_err_est = 0.0;
  double v_err_est = 0.0;
  Bounds u_bounds;
  Bounds v_bounds;
};

// ---------------------------------------------------------------------------
// q-special functions

/// Gaussian (q-)binomial coefficient. Throws DomainError if k is outside
/// [0, n] or q == 1.
[[nodiscard]] double q_binomial(int n, int k, double q);

/// q-gamma function (1-q)^{1-x} prod_{n>=0} (1-q^{n+1})/(1-q^{n+x}) for
/// 0 < q < 1, truncated once a factor is within trunc_eps of 1.
[[nodiscard]] double q_gamma(double x, double q, double trunc_eps = 1e-14);

// ---------------------------------------------------------------------------
// Exact partial-product integrals

/// int_0^inf prod_{k=0}^{n} (1 + t^2 lambda^k)^{-1} dt, n >= 1.
[[nodiscard]] double partial_integral_squared(int n, LambdaParam lambda);

/// int_0^inf prod_{k=0}^{n} (1 + t lambda^k)^{-1} dt, n >= 1.
[[nodiscard]] double partial_integral_linear(int n, LambdaParam lambda);

/// n -> inf limit of partial_integral_squared: (pi/2)(1-lambda)^{1/2} / Gamma_lambda(1/2).
[[nodiscard]] double full_integral_squared(LambdaParam lambda);

/// n -> inf limit of partial_integral_linear: log(1/lambda).
[[nodiscard]] double full_integral_linear(LambdaParam lambda);

// ---------------------------------------------------------------------------
// Multipliers

/// U(lambda) = sqrt(2 / (pi (1-lambda))) int_0^inf prod_k (1 + t^2 lambda^k)^{-1/2} dt.
///
/// The returned err_est covers the quadrature error and the effect of the
/// omitted product factors; it is at most max(abs_tol, rel_tol * U).
/// Throws ConvergenceError if the subdivision budget is exhausted.
[[nodiscard]] MultiplierEstimate compute_U(LambdaParam lambda, const QuadratureSettings& settings = {});

/// V(lambda) = 1 / (2 (1-lambda)) int_0^inf prod_k (1 + t lambda^k)^{-1/2} dt.
[[nodiscard]] MultiplierEstimate compute_V(LambdaParam lambda, const QuadratureSettings& settings = {});

/// Sharp bounds for lambda in (0.7, 1); the general-lambda q-gamma bounds
/// otherwise. Always lo <= hi.
[[nodiscard]] Bounds u_bounds(LambdaParam lambda);
[[nodiscard]] Bounds v_bounds(LambdaParam lambda);

/// Theta-sum bracket around Gamma_{lambda^2}(1/2).
[[nodiscard]] Bounds q_gamma_half_bounds(LambdaParam lambda);

/// U, V and both bound pairs in one call.
[[nodiscard]] MultiplierResult compute_multipliers(LambdaParam lambda,
                                                   const QuadratureSettings& settings = {});

struct SmaMultipliers {
  double u = 0.0;
  double v = 0.0;
};

/// Closed-form multipliers for a simple moving average over L >= 3 returns.
[[nodiscard]] SmaMultipliers sma_multipliers(int window);

}  // namespace voltarget
