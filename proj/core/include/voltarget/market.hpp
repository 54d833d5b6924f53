#pragma once

#include <optional>
#include <span>
#include <vector>

namespace voltarget {

/// Step function on [0, horizon): values[i] holds on [breakpoints[i], breakpoints[i+1]).
class PiecewiseCurve {
 public:
  PiecewiseCurve(std::vector<double> breakpoints, std::vector<double> values, double horizon);

  static PiecewiseCurve constant(double value, double horizon);

  [[nodiscard]] double horizon() const noexcept { return horizon_; }
  [[nodiscard]] std::span<const double> breakpoints() const noexcept { return breakpoints_; }
  [[nodiscard]] std::span<const double> values() const noexcept { return values_; }

  [[nodiscard]] bool is_constant() const noexcept;
  [[nodiscard]] double value_at(double t) const;
  [[nodiscard]] double min_value() const;
  [[nodiscard]] double max_value() const;

  /// Exact integral over [t0, t1] ⊆ [0, horizon].
  [[nodiscard]] double integrate(double t0, double t1) const;
  /// Exact integral of the squared curve over [t0, t1].
  [[nodiscard]] double integrate_squared(double t0, double t1) const;
  /// Time averages over [t0, t1], t0 < t1. Exact for an interval inside one piece.
  [[nodiscard]] double average(double t0, double t1) const;
  [[nodiscard]] double average_squared(double t0, double t1) const;

 private:
  template <class Fn>
  double integrate_impl(double t0, double t1, bool normalize, Fn&& transform) const;

  std::vector<double> breakpoints_;
  std::vector<double> values_;
  double horizon_;
};

[[nodiscard]] double integrate_curve(const PiecewiseCurve& curve, double t0, double t1);

/// Sorted union of the breakpoints of all given curves (same horizon).
[[nodiscard]] std::vector<double> common_refinement(std::span<const PiecewiseCurve* const> curves);

struct MarketParams {
  PiecewiseCurve r;      // risk-free rate used by the cash leg
  PiecewiseCurve rho;    // total carry of the risky asset
  PiecewiseCurve sigma;  // volatility
  PiecewiseCurve r_disc; // discount rate for pricing
  std::optional<PiecewiseCurve> a;  // adjustment (fee or dividend protection) rate
  double sigma_lo = 0.0;
  double sigma_hi = 0.0;

  /// Constant-coefficient market; sigma_lo = sigma_hi = sigma, r_disc = r.
  static MarketParams constant(double r, double rho, double sigma, double horizon);

  [[nodiscard]] double horizon() const noexcept { return sigma.horizon(); }
  [[nodiscard]] bool is_constant() const noexcept;

  /// Throws DomainError unless 0 < sigma_lo <= sigma(t) <= sigma_hi and all
  /// curves share one horizon.
  void validate() const;
};

struct GridSpec {
  double T = 1.0;
  int N = 1;

  [[nodiscard]] double dt() const noexcept { return T / N; }
  /// t_n = n T / N, computed directly to avoid accumulated drift.
  [[nodiscard]] double time(int n) const noexcept { return (n == N) ? T : n * T / N; }
  void validate() const;
};

/// Time averages of the coefficients over [t_{n-1}, t_n].
struct SegmentStats {
  double r = 0.0;
  double rho = 0.0;
  double sigma2 = 0.0;  // average of sigma^2
  double a = 0.0;       // zero when the market carries no adjustment curve
};

[[nodiscard]] SegmentStats segment_stats(const MarketParams& params, const GridSpec& grid, int n);

/// segment_stats for n = 1..N.
[[nodiscard]] std::vector<SegmentStats> segment_schedule(const MarketParams& params, const GridSpec& grid);

}  // namespace voltarget
