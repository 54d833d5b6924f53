#include "voltarget/index_engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "voltarget/errors.hpp"

namespace voltarget {

void IndexConfig::validate() const {
  if (!(target_vol > 0.0) || !(v0 > 0.0) || !(I0 > 0.0)) {
    throw DomainError("target_vol, v0 and I0 must be strictly positive");
  }
  if (leverage_lag < 1) throw DomainError("leverage_lag must be >= 1");
  if (const auto* sma = std::get_if<SmaVariant>(&variant); sma && sma->window < 3) {
    throw DomainError("SMA window must be >= 3");
  }
  if (const auto* capped = std::get_if<CappedVariant>(&variant); capped && !(capped->w_max > 0.0)) {
    throw DomainError("capped leverage requires w_max > 0");
  }
}

double stock_log_return(const SegmentStats& seg, double dt, double z) noexcept {
  return (seg.rho - 0.5 * seg.sigma2) * dt + std::sqrt(seg.sigma2 * dt) * z;
}

double ewma_variance_step(double v_prev, double simple_return, LambdaParam lambda, double dt) noexcept {
  const double l = lambda.value();
  return l * v_prev + (1.0 - l) / dt * (simple_return * simple_return);
}

double leverage_from_variance(double target_vol, double variance) noexcept {
  return target_vol / std::sqrt(variance);
}

double capped_leverage(double target_vol, double v1, double v2, double w_max) noexcept {
  return std::min({w_max, leverage_from_variance(target_vol, v1), leverage_from_variance(target_vol, v2)});
}

std::optional<double> discrete_index_step(double log_index, double w, const SegmentStats& seg,
                                          double dt, double simple_return, bool fee_adjusted) noexcept {
  double gross = 1.0 + (1.0 - w) * seg.r * dt + w * simple_return;
  if (fee_adjusted) gross += w * seg.a * dt;
  if (!(gross > 0.0)) return std::nullopt;
  return log_index + std::log(gross);
}

double continuous_index_step(double log_index, double w, const SegmentStats& seg, double dt, double z,
                             bool fee_adjusted) noexcept {
  double carry = seg.rho - seg.r;
  if (fee_adjusted) carry += seg.a;
  return log_index + seg.r * dt + w * carry * dt - 0.5 * w * w * seg.sigma2 * dt +
         w * std::sqrt(seg.sigma2 * dt) * z;
}

SimplifiedState simplified_process_step(SimplifiedState state, LambdaParam lambda, double target_vol,
                                        const SegmentStats& seg, double dt, double z) noexcept {
  const double w = leverage_from_variance(target_vol, state.u);
  const double diffusion = std::sqrt(seg.sigma2 * dt) * z;
  return {continuous_index_step(state.log_x, w, seg, dt, z),
          ewma_variance_step(state.u, diffusion, lambda, dt)};
}

// ---------------------------------------------------------------------------

VarianceTracker::VarianceTracker(const IndexConfig& config)
    : kind_(Kind::kEwma),
      target_vol_(config.target_vol),
      v0_(config.v0),
      lambda1_(config.lambda),
      lambda2_(config.lambda),
      v1_(config.v0),
      v2_(config.v0) {
  if (const auto* sma = std::get_if<SmaVariant>(&config.variant)) {
    kind_ = Kind::kSma;
    window_.assign(static_cast<std::size_t>(sma->window), 0.0);
  } else if (const auto* capped = std::get_if<CappedVariant>(&config.variant)) {
    kind_ = Kind::kCapped;
    lambda1_ = capped->lambda1;
    lambda2_ = capped->lambda2;
    w_max_ = capped->w_max;
  }
}

void VarianceTracker::update(double period_return, double dt) {
  switch (kind_) {
    case Kind::kEwma:
      v1_ = ewma_variance_step(v1_, period_return, lambda1_, dt);
      break;
    case Kind::kCapped:
      v1_ = ewma_variance_step(v1_, period_return, lambda1_, dt);
      v2_ = ewma_variance_step(v2_, period_return, lambda2_, dt);
      break;
    case Kind::kSma: {
      // Until the window is full the missing returns are replaced by v0.
      const std::size_t L = window_.size();
      window_[head_] = period_return * period_return / dt;
      head_ = (head_ + 1) % L;
      filled_ = std::min(filled_ + 1, L);
      const double observed = std::accumulate(window_.begin(), window_.end(), 0.0);
      const double Ld = static_cast<double>(L);
      v1_ = (1.0 - static_cast<double>(filled_) / Ld) * v0_ + observed / Ld;
      break;
    }
  }
}

double VarianceTracker::leverage() const noexcept {
  if (kind_ == Kind::kCapped) return capped_leverage(target_vol_, v1_, v2_, w_max_);
  return leverage_from_variance(target_vol_, v1_);
}

double VarianceTracker::variance() const noexcept { return v1_; }

LaggedLeverage::LaggedLeverage(const IndexConfig& config)
    : tracker_(config), history_(static_cast<std::size_t>(config.leverage_lag), tracker_.leverage()) {}

void LaggedLeverage::update(double period_return, double dt) {
  tracker_.update(period_return, dt);
  history_[head_] = tracker_.leverage();
  head_ = (head_ + 1) % history_.size();
}

// ---------------------------------------------------------------------------

PathResult run_path(std::span<const SegmentStats> schedule, const IndexConfig& config, double dt,
                    std::span<const double> z_stream, const PathOptions& options) {
  if (z_stream.size() != schedule.size()) {
    throw DomainError("z_stream length must equal the number of steps");
  }
  const bool fee = config.fee_adjusted();

  LaggedLeverage lev_v(config);  // from realised returns
  LaggedLeverage lev_u(config);  // from diffusion-only returns

  PathResult out;
  const double log_i0 = std::log(config.I0);
  out.log_disc = log_i0;
  out.log_cont = log_i0;
  out.log_x = log_i0;
  if (options.record_leverage) out.leverage_trace.reserve(schedule.size());

  for (std::size_t n = 0; n < schedule.size(); ++n) {
    const SegmentStats& seg = schedule[n];
    const double z = z_stream[n];
    const double w = lev_v.current();
    const double wx = lev_u.current();
    if (options.record_leverage) out.leverage_trace.push_back(w);

    const double log_return = stock_log_return(seg, dt, z);
    const double simple_return = std::expm1(log_return);
    out.log_s += log_return;

    if (!out.flagged) {
      if (const auto next = discrete_index_step(out.log_disc, w, seg, dt, simple_return, fee)) {
        out.log_disc = *next;
      } else {
        out.flagged = true;
        out.log_disc = std::numeric_limits<double>::quiet_NaN();
      }
    }
    out.log_cont = continuous_index_step(out.log_cont, w, seg, dt, z, fee);
    out.log_x = continuous_index_step(out.log_x, wx, seg, dt, z, fee);

    lev_v.update(simple_return, dt);
    lev_u.update(std::sqrt(seg.sigma2 * dt) * z, dt);
  }
  return out;
}

PathResult run_path(const MarketParams& market, const IndexConfig& config, const GridSpec& grid,
                    std::span<const double> z_stream, const PathOptions& options) {
  market.validate();
  config.validate();
  const auto schedule = segment_schedule(market, grid);
  return run_path(schedule, config, grid.dt(), z_stream, options);
}

}  // namespace voltarget
