#include "voltarget/market.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "voltarget/errors.hpp"

namespace voltarget {

PiecewiseCurve::PiecewiseCurve(std::vector<double> breakpoints, std::vector<double> values,
                               double horizon)
    : breakpoints_(std::move(breakpoints)), values_(std::move(values)), horizon_(horizon) {
  if (!(horizon_ > 0.0)) throw DomainError("curve horizon must be positive");
  if (breakpoints_.empty() || breakpoints_.size() != values_.size()) {
    throw DomainError("curve needs one value per breakpoint and at least one piece");
  }
  if (breakpoints_.front() != 0.0) throw DomainError("first curve breakpoint must be 0");
  if (!(breakpoints_.back() < horizon_)) throw DomainError("last curve breakpoint must precede the horizon");
  for (std::size_t i = 1; i < breakpoints_.size(); ++i) {
    if (!(breakpoints_[i] > breakpoints_[i - 1])) {
      throw DomainError("curve breakpoints must be strictly ascending");
    }
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw DomainError("curve values must be finite");
  }
}

PiecewiseCurve PiecewiseCurve::constant(double value, double horizon) {
  return PiecewiseCurve({0.0}, {value}, horizon);
}

bool PiecewiseCurve::is_constant() const noexcept {
  return std::all_of(values_.begin(), values_.end(), [&](double v) { return v == values_.front(); });
}

double PiecewiseCurve::value_at(double t) const {
  if (!(t >= 0.0 && t <= horizon_)) throw DomainError("curve evaluated outside [0, horizon]");
  const auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), t);
  return values_[static_cast<std::size_t>(it - breakpoints_.begin()) - 1];
}

double PiecewiseCurve::min_value() const { return *std::min_element(values_.begin(), values_.end()); }
double PiecewiseCurve::max_value() const { return *std::max_element(values_.begin(), values_.end()); }

template <class Fn>
double PiecewiseCurve::integrate_impl(double t0, double t1, bool normalize, Fn&& transform) const {
  if (!(t0 >= 0.0 && t1 <= horizon_ && t0 <= t1)) {
    throw DomainError("integration interval [" + std::to_string(t0) + ", " + std::to_string(t1) +
                      "] must lie inside [0, horizon]");
  }
  if (t0 == t1) return 0.0;
  // First piece containing t0.
  auto i = static_cast<std::size_t>(
      std::upper_bound(breakpoints_.begin(), breakpoints_.end(), t0) - breakpoints_.begin() - 1);
  double total = 0.0;
  double lo = t0;
  for (; i < values_.size() && lo < t1; ++i) {
    const double piece_end = (i + 1 < breakpoints_.size()) ? breakpoints_[i + 1] : horizon_;
    const double hi = std::min(piece_end, t1);
    const double weight = normalize ? (hi - lo) / (t1 - t0) : (hi - lo);
    total += transform(values_[i]) * weight;
    lo = hi;
  }
  return total;
}

double PiecewiseCurve::integrate(double t0, double t1) const {
  return integrate_impl(t0, t1, false, [](double v) { return v; });
}

double PiecewiseCurve::integrate_squared(double t0, double t1) const {
  return integrate_impl(t0, t1, false, [](double v) { return v * v; });
}

double PiecewiseCurve::average(double t0, double t1) const {
  if (!(t1 > t0)) throw DomainError("average needs a non-empty interval");
  return integrate_impl(t0, t1, true, [](double v) { return v; });
}

double PiecewiseCurve::average_squared(double t0, double t1) const {
  if (!(t1 > t0)) throw DomainError("average needs a non-empty interval");
  return integrate_impl(t0, t1, true, [](double v) { return v * v; });
}

double integrate_curve(const PiecewiseCurve& curve, double t0, double t1) {
  return curve.integrate(t0, t1);
}

std::vector<double> common_refinement(std::span<const PiecewiseCurve* const> curves) {
  std::vector<double> points;
  for (const auto* c : curves) {
    points.insert(points.end(), c->breakpoints().begin(), c->breakpoints().end());
  }
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  return points;
}

MarketParams MarketParams::constant(double r, double rho, double sigma, double horizon) {
  return MarketParams{PiecewiseCurve::constant(r, horizon),
                      PiecewiseCurve::constant(rho, horizon),
                      PiecewiseCurve::constant(sigma, horizon),
                      PiecewiseCurve::constant(r, horizon),
                      std::nullopt,
                      sigma,
                      sigma};
}

bool MarketParams::is_constant() const noexcept {
  return r.is_constant() && rho.is_constant() && sigma.is_constant() &&
         (!a || a->is_constant());
}

void MarketParams::validate() const {
  const double T = horizon();
  if (r.horizon() != T || rho.horizon() != T || r_disc.horizon() != T ||
      (a && a->horizon() != T)) {
    throw DomainError("all market curves must share the same horizon");
  }
  if (!(sigma_lo > 0.0) || !(sigma_lo <= sigma.min_value()) ||
      !(sigma.max_value() <= sigma_hi) || !std::isfinite(sigma_hi)) {
    throw DomainError("volatility must satisfy 0 < sigma_lo <= sigma(t) <= sigma_hi < inf");
  }
}

void GridSpec::validate() const {
  if (!(T > 0.0)) throw DomainError("grid horizon T must be positive");
  if (N < 1) throw DomainError("grid needs at least one step");
}

SegmentStats segment_stats(const MarketParams& params, const GridSpec& grid, int n) {
  if (n < 1 || n > grid.N) throw DomainError("segment index out of range");
  const double t0 = grid.time(n - 1);
  const double t1 = grid.time(n);
  SegmentStats s;
  s.r = params.r.average(t0, t1);
  s.rho = params.rho.average(t0, t1);
  s.sigma2 = params.sigma.average_squared(t0, t1);
  s.a = params.a ? params.a->average(t0, t1) : 0.0;
  return s;
}

std::vector<SegmentStats> segment_schedule(const MarketParams& params, const GridSpec& grid) {
  grid.validate();
  if (grid.T > params.horizon()) throw DomainError("grid extends beyond the market horizon");
  std::vector<SegmentStats> schedule;
  schedule.reserve(static_cast<std::size_t>(grid.N));
  for (int n = 1; n <= grid.N; ++n) schedule.push_back(segment_stats(params, grid, n));
  return schedule;
}

}  // namespace voltarget
