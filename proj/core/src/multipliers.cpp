#include "voltarget/multipliers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "voltarget/errors.hpp"
#include "voltarget/quadrature.hpp"

namespace voltarget {

namespace {

constexpr double kPi = std::numbers::pi;

// 1 - q^j, accurate when q is close to 1.
double one_minus_pow(double q, double j) {
  if (q > 0.0) return -std::expm1(j * std::log(q));
  return 1.0 - std::pow(q, j);
}

// Sum of log(1 + x lambda^k) over k >= 0 while x lambda^k >= eps. Stops early
// and returns +inf once the product is far below the smallest double.
double log_product_sum(double x, double lambda, double eps) {
  constexpr double kUnderflowLog = 1500.0;
  double sum = 0.0;
  for (double term = x; term >= eps; term *= lambda) {
    sum += std::log1p(term);
    if (sum > kUnderflowLog) return std::numeric_limits<double>::infinity();
  }
  return sum;
}

enum class ProductForm { kSquared, kLinear };

// Shared driver for U and V. `prefactor` multiplies the integral, `magnitude`
// is an a-priori upper bound on the result used to size the truncation.
MultiplierEstimate infinite_product_multiplier(LambdaParam lambda_param, ProductForm form,
                                               double prefactor, double magnitude,
                                               const QuadratureSettings& settings) {
  settings.validate();
  const double lambda = lambda_param.value();

  // Omitted factors with x lambda^k < eps change the integrand by a relative
  // amount below eps / (2 (1 - lambda)); keep that under a tenth of abs_tol.
  const double eps = std::min(settings.product_trunc_eps,
                              0.2 * settings.abs_tol * (1.0 - lambda) / magnitude);
  const double trunc_rel = 0.5 * eps / (1.0 - lambda);

  auto integrand = [&](double t) {
    const double x = form == ProductForm::kSquared ? t * t : t;
    const double s = log_product_sum(x, lambda, eps);
    return std::isinf(s) ? 0.0 : std::exp(-0.5 * s);
  };

  const double integral_tol = settings.abs_tol / prefactor;
  quadrature::AdaptiveOptions opts;
  opts.abs_tol = 0.8 * integral_tol;
  opts.rel_tol = settings.rel_tol;
  opts.max_subdivisions = settings.max_subdivisions;

  const auto quad = quadrature::integrate_half_line(integrand, 0.0, settings.domain_split, opts);
  const double value = prefactor * quad.value;
  return {value, prefactor * quad.error + value * trunc_rel};
}

}  // namespace

LambdaParam::LambdaParam(double value) : value_(value) {
  if (!(value > 0.0 && value < 1.0)) {
    throw DomainError("lambda must lie strictly inside (0, 1), got " + std::to_string(value));
  }
}

void QuadratureSettings::validate() const {
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0) || !(product_trunc_eps > 0.0) ||
      !(domain_split > 0.0)) {
    throw DomainError("quadrature tolerances and domain_split must be positive");
  }
  if (max_subdivisions < 1) throw DomainError("max_subdivisions must be >= 1");
}

double q_binomial(int n, int k, double q) {
  if (k < 0 || n < 0 || k > n) {
    throw DomainError("q_binomial requires 0 <= k <= n");
  }
  if (q == 1.0) throw DomainError("q_binomial is undefined at q = 1");
  const int m = std::min(k, n - k);
  double result = 1.0;
  for (int j = 1; j <= m; ++j) {
    result *= one_minus_pow(q, n - m + j) / one_minus_pow(q, j);
  }
  return result;
}

double q_gamma(double x, double q, double trunc_eps) {
  if (!(x > 0.0)) throw DomainError("q_gamma requires x > 0");
  if (!(q > 0.0 && q < 1.0)) throw DomainError("q_gamma requires 0 < q < 1");
  if (!(trunc_eps > 0.0)) throw DomainError("q_gamma requires trunc_eps > 0");

  const double log_q = std::log(q);
  double log_prod = 0.0;
  for (long n = 0;; ++n) {
    const double q_n1 = std::exp((n + 1.0) * log_q);
    const double q_nx = std::exp((n + x) * log_q);
    const double deviation = std::abs(q_nx - q_n1) / (1.0 - q_nx);
    if (deviation < trunc_eps) break;
    log_prod += std::log1p(-q_n1) - std::log1p(-q_nx);
  }
  return std::exp((1.0 - x) * std::log1p(-q) + log_prod);
}

double partial_integral_squared(int n, LambdaParam lambda_param) {
  if (n < 1) throw DomainError("partial_integral_squared requires n >= 1");
  const double lambda = lambda_param.value();
  double prod = 1.0;
  for (int k = 0; k < n; ++k) {
    prod *= one_minus_pow(lambda, k + 0.5) / one_minus_pow(lambda, k + 1.0);
  }
  return 0.5 * kPi * prod;
}

double partial_integral_linear(int n, LambdaParam lambda_param) {
  if (n < 1) throw DomainError("partial_integral_linear requires n >= 1");
  const double lambda = lambda_param.value();
  return -std::log(lambda) / one_minus_pow(lambda, n);
}

double full_integral_squared(LambdaParam lambda) {
  const double l = lambda.value();
  return 0.5 * kPi * std::sqrt(1.0 - l) / q_gamma(0.5, l);
}

double full_integral_linear(LambdaParam lambda) { return -std::log(lambda.value()); }

MultiplierEstimate compute_U(LambdaParam lambda, const QuadratureSettings& settings) {
  const double l = lambda.value();
  const double prefactor = std::sqrt(2.0 / (kPi * (1.0 - l)));
  return infinite_product_multiplier(lambda, ProductForm::kSquared, prefactor,
                                     1.01 * u_bounds(lambda).hi, settings);
}

MultiplierEstimate compute_V(LambdaParam lambda, const QuadratureSettings& settings) {
  const double l = lambda.value();
  const double prefactor = 0.5 / (1.0 - l);
  return infinite_product_multiplier(lambda, ProductForm::kLinear, prefactor,
                                     1.01 * v_bounds(lambda).hi, settings);
}

Bounds u_bounds(LambdaParam lambda) {
  const double l = lambda.value();
  const double log_inv = -std::log(l);
  if (l > 0.7) {
    const double ratio = log_inv / (1.0 / l - 1.0);
    const double theta = 1.0 - 2.0 * std::exp(-2.0 * kPi * kPi / log_inv);
    return {std::sqrt(std::pow(l, -1.2) * ratio), std::sqrt(std::pow(l, -1.25) * ratio) / theta};
  }
  // General-lambda bracket from pairing factors k = 2j, 2j+1.
  const double lo = std::sqrt(0.5 * kPi) * std::sqrt(1.0 + l) / q_gamma(0.5, l * l);
  return {lo, lo / std::sqrt(l)};
}

Bounds v_bounds(LambdaParam lambda) {
  const double l = lambda.value();
  const double ratio = -std::log(l) / (1.0 / l - 1.0);
  if (l > 0.7) return {std::pow(l, -1.45) * ratio, std::pow(l, -1.5) * ratio};
  return {ratio / l, ratio / (l * l)};
}

Bounds q_gamma_half_bounds(LambdaParam lambda) {
  const double l = lambda.value();
  const double log_inv = -std::log(l);
  const double upper = std::pow(l, -0.125) * std::sqrt(kPi * (1.0 - l * l) / (2.0 * log_inv));
  const double theta = 1.0 - 2.0 * std::exp(-2.0 * kPi * kPi / log_inv);
  return {upper * std::max(theta, 0.0), upper};
}

MultiplierResult compute_multipliers(LambdaParam lambda, const QuadratureSettings& settings) {
  const auto u = compute_U(lambda, settings);
  const auto v = compute_V(lambda, settings);
  return {u.value, v.value, u.err_est, v.err_est, u_bounds(lambda), v_bounds(lambda)};
}

SmaMultipliers sma_multipliers(int window) {
  if (window < 3) throw DomainError("sma_multipliers requires a window L >= 3");
  const double L = window;
  const double u = std::sqrt(0.5 * L) * std::exp(std::lgamma(0.5 * (L - 1.0)) - std::lgamma(0.5 * L));
  return {u, L / (L - 2.0)};
}

}  // namespace voltarget
