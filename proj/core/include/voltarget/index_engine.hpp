#pragma once

// Single-path evolution of the risky asset, the realised-variance estimator,
// the leverage and the coupled index processes:
//   discrete index   I~ : gross-return definition, can go non-positive
//   continuous index I  : log-space, rebalanced at the grid times
//   simplified       X  : as I but levered off the diffusion-only variance u

#include <cstddef>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "voltarget/market.hpp"
#include "voltarget/multipliers.hpp"

namespace voltarget {

struct EwmaVariant {};

/// Simple moving average of the last `window` annualised squared returns.
struct SmaVariant {
  int window = 20;
};

/// Leverage min(w_max, target/sqrt(v1), target/sqrt(v2)) with two EWMAs.
struct CappedVariant {
  LambdaParam lambda1{0.9};
  LambdaParam lambda2{0.9};
  double w_max = 1.5;
};

/// EWMA index whose risky leg also accrues the adjustment rate a(t).
struct FeeAdjustedVariant {};

using IndexVariant = std::variant<EwmaVariant, SmaVariant, CappedVariant, FeeAdjustedVariant>;

struct IndexConfig {
  LambdaParam lambda{0.9};
  double target_vol = 0.2;
  double v0 = 0.02;
  double I0 = 1.0;
  IndexVariant variant = EwmaVariant{};
  int leverage_lag = 1;  // leverage at step n uses the variance of step n - lag

  [[nodiscard]] bool fee_adjusted() const noexcept {
    return std::holds_alternative<FeeAdjustedVariant>(variant);
  }
  void validate() const;
};

// ---------------------------------------------------------------------------
// Step operations

/// Exact GBM log-return over one segment: (rho - sigma^2/2) dt + sigma sqrt(dt) z.
[[nodiscard]] double stock_log_return(const SegmentStats& seg, double dt, double z) noexcept;

/// v_n = lambda v_{n-1} + (1 - lambda) / dt * R^2 for the period simple return R.
[[nodiscard]] double ewma_variance_step(double v_prev, double simple_return, LambdaParam lambda,
                                        double dt) noexcept;

/// target / sqrt(v).
[[nodiscard]] double leverage_from_variance(double target_vol, double variance) noexcept;

/// min(w_max, target / sqrt(v1), target / sqrt(v2)).
[[nodiscard]] double capped_leverage(double target_vol, double v1, double v2, double w_max) noexcept;

/// New log I~ after one period, or nullopt when the gross return
/// 1 + (1 - w) r dt + w R [+ w a dt] is not positive.
[[nodiscard]] std::optional<double> discrete_index_step(double log_index, double w,
                                                        const SegmentStats& seg, double dt,
                                                        double simple_return,
                                                        bool fee_adjusted = false) noexcept;

/// New log I after one period:
/// r dt + w (rho - r) dt - w^2 sigma^2 dt / 2 + w sigma sqrt(dt) z [+ w a dt].
[[nodiscard]] double continuous_index_step(double log_index, double w, const SegmentStats& seg,
                                           double dt, double z, bool fee_adjusted = false) noexcept;

struct SimplifiedState {
  double log_x = 0.0;
  double u = 0.0;
};

/// EWMA form of the simplified process: X levered with target/sqrt(u), then
/// u updated with the diffusion part of the return only,
/// u_n = lambda u_{n-1} + (1 - lambda) / dt * (sigma sqrt(dt) z)^2.
[[nodiscard]] SimplifiedState simplified_process_step(SimplifiedState state, LambdaParam lambda,
                                                      double target_vol, const SegmentStats& seg,
                                                      double dt, double z) noexcept;

// ---------------------------------------------------------------------------
// Path state

/// Realised-variance estimator for one configured variant, seeded at v0 and
/// fed one period return at a time.
class VarianceTracker {
 public:
  explicit VarianceTracker(const IndexConfig& config);

  void update(double period_return, double dt);
  [[nodiscard]] double leverage() const noexcept;
  /// Current variance (the first EWMA for the capped variant).
  [[nodiscard]] double variance() const noexcept;
  [[nodiscard]] double second_variance() const noexcept { return v2_; }

 private:
  enum class Kind { kEwma, kSma, kCapped };

  Kind kind_;
  double target_vol_;
  double v0_;
  LambdaParam lambda1_;
  LambdaParam lambda2_;
  double w_max_ = 0.0;
  double v1_;
  double v2_;
  std::vector<double> window_;  // SMA ring of annualised squared returns
  std::size_t filled_ = 0;
  std::size_t head_ = 0;
};

/// VarianceTracker plus the leverage history needed for a lag >= 1.
class LaggedLeverage {
 public:
  explicit LaggedLeverage(const IndexConfig& config);

  /// Leverage applied over the coming period.
  [[nodiscard]] double current() const noexcept { return history_[head_]; }
  void update(double period_return, double dt);
  [[nodiscard]] const VarianceTracker& tracker() const noexcept { return tracker_; }

 private:
  VarianceTracker tracker_;
  std::vector<double> history_;
  std::size_t head_ = 0;
};

struct PathResult {
  double log_disc = 0.0;  // NaN when flagged
  double log_cont = 0.0;
  double log_x = 0.0;
  double log_s = 0.0;     // log(S_T / S_0)
  bool flagged = false;   // discrete index went non-positive
  std::vector<double> leverage_trace;  // w used over each period, if requested
};

struct PathOptions {
  bool record_leverage = false;
};

/// Evolves one path over the precomputed segment schedule, driving S, v, u,
/// I~, I and X from the same draws.
[[nodiscard]] PathResult run_path(std::span<const SegmentStats> schedule, const IndexConfig& config,
                                  double dt, std::span<const double> z_stream,
                                  const PathOptions& options = {});

[[nodiscard]] PathResult run_path(const MarketParams& market, const IndexConfig& config,
                                  const GridSpec& grid, std::span<const double> z_stream,
                                  const PathOptions& options = {});

}  // namespace voltarget
