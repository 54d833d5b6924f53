#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "oracles.hpp"
#include "voltarget/errors.hpp"
#include "voltarget/index_engine.hpp"
#include "voltarget/rng.hpp"

using namespace voltarget;
namespace vt = voltarget::testing;

namespace {

SegmentStats seg(double r, double rho, double sigma, double a = 0.0) { return {r, rho, sigma * sigma, a}; }

std::vector<double> normals(std::uint64_t seed, std::uint64_t path, std::size_t n) {
  std::vector<double> z(n);
  RngStream{seed, path}.fill_normal(z);
  return z;
}

}  // namespace

TEST(StockLogReturn, Examples) {
  EXPECT_EQ(stock_log_return(seg(0.0, 0.125, 0.5), 0.01, 0.0), 0.0);
  EXPECT_NEAR(stock_log_return(seg(0.05, 0.03, 0.5), 0.01, 1.0), 0.04905, 1e-15);
}

TEST(StockLogReturn, LognormalVarianceMatchesSampleMoment) {
  const auto s = seg(0.05, 0.03, 0.5);
  const double dt = 0.01;
  const auto z = normals(7, 0, 1'000'000);
  double sum = 0.0;
  double sum2 = 0.0;
  for (double zi : z) {
    const double g = std::exp(stock_log_return(s, dt, zi));
    sum += g;
    sum2 += g * g;
  }
  const double n = static_cast<double>(z.size());
  const double var = (sum2 - sum * sum / n) / (n - 1.0);
  const double exact = std::exp(2.0 * 0.03 * dt) * std::expm1(0.25 * dt);
  // Relative standard error of a sample variance is about sqrt(2 / n).
  EXPECT_NEAR(var / exact, 1.0, 4.0 * std::sqrt(2.0 / n));
}

TEST(EwmaVarianceStep, Examples) {
  const LambdaParam l(0.9);
  EXPECT_DOUBLE_EQ(ewma_variance_step(0.04, 0.0, l, 0.01), 0.9 * 0.04);
  EXPECT_NEAR(ewma_variance_step(0.04, 0.01, l, 1.0 / 252.0), 0.038520, 1e-15);
}

TEST(EwmaVarianceStep, UnrolledRecursionMatchesClosedSum) {
  vt::SplitMix64 gen(99);
  double worst = 0.0;
  for (int path = 0; path < 100; ++path) {
    const double lambda = gen.uniform(0.5, 0.99);
    const double dt = gen.uniform(1e-3, 0.1);
    const double v0 = gen.uniform(0.01, 0.2);
    const int n = path < 50 ? 20 : 50;
    std::vector<double> R(static_cast<std::size_t>(n));
    for (auto& x : R) x = gen.uniform(-0.1, 0.1);
    double v = v0;
    for (double x : R) v = ewma_variance_step(v, x, LambdaParam(lambda), dt);
    double closed = std::pow(lambda, n) * v0;
    for (int k = 1; k <= n; ++k) {
      closed += (1.0 - lambda) / dt * std::pow(lambda, n - k) * R[static_cast<std::size_t>(k - 1)] *
                R[static_cast<std::size_t>(k - 1)];
    }
    worst = std::max(worst, std::abs(v - closed));
  }
  EXPECT_LT(worst, 1e-12);
}

TEST(Leverage, Examples) {
  EXPECT_DOUBLE_EQ(leverage_from_variance(0.2, 0.04), 1.0);
  EXPECT_NEAR(leverage_from_variance(0.2, 0.02), 1.41421356, 1e-8);
  EXPECT_DOUBLE_EQ(capped_leverage(0.2, 0.02, 0.02, 1.0), 1.0);
  EXPECT_DOUBLE_EQ(capped_leverage(0.2, 0.04, 0.01, 5.0), 1.0);
}

TEST(DiscreteIndexStep, Examples) {
  const auto s = seg(0.05, 0.03, 0.5);
  const double R = 0.0123;
  EXPECT_NEAR(*discrete_index_step(0.0, 1.0, s, 0.01, R), std::log1p(R), 1e-16);
  EXPECT_NEAR(*discrete_index_step(0.0, 0.0, s, 0.01, R), std::log(1.0 + 0.05 * 0.01), 1e-16);
  // 1 + (-0.4142)(0.0005) + 1.4142 * 0.02
  EXPECT_NEAR(std::exp(*discrete_index_step(0.0, 1.4142, s, 0.01, 0.02)), 1.0280769, 1e-12);
  EXPECT_NEAR(*discrete_index_step(0.3, 0.0, s, 0.01, R), 0.3 + std::log(1.0005), 1e-15);
}

TEST(DiscreteIndexStep, NonPositiveGrossReturnIsRejected) {
  const auto s = seg(0.05, 0.03, 0.5);
  EXPECT_FALSE(discrete_index_step(0.0, 2.0, s, 0.01, -0.6).has_value());
  EXPECT_FALSE(discrete_index_step(0.0, 2.0, s, 0.01, -0.5).has_value());  // gross 1 - 0.0005 - 1 < 0
  EXPECT_TRUE(discrete_index_step(0.0, 2.0, s, 0.01, -0.49).has_value());
}

TEST(DiscreteIndexStep, FeeAdjustmentAddsCarry) {
  const auto s = seg(0.05, 0.03, 0.5, 0.02);
  const double plain = *discrete_index_step(0.0, 1.5, s, 0.01, 0.01);
  const double fee = *discrete_index_step(0.0, 1.5, s, 0.01, 0.01, true);
  EXPECT_NEAR(std::exp(fee) - std::exp(plain), 1.5 * 0.02 * 0.01, 1e-15);
}

TEST(ContinuousIndexStep, Examples) {
  const auto s = seg(0.05, 0.03, 0.5);
  EXPECT_NEAR(continuous_index_step(0.0, 0.0, s, 0.01, 1.7), 0.05 * 0.01, 1e-17);
  const auto same = seg(0.05, 0.05, 0.5);
  EXPECT_NEAR(continuous_index_step(0.0, 1.0, same, 0.01, -0.4), stock_log_return(same, 0.01, -0.4), 1e-16);
  // Initial leverage 0.2 / sqrt(0.02) = sqrt(2), dt = 0.01, Z = 1:
  // 0.0005 + sqrt(2)(-0.02)(0.01) - 0.5 * 2 * 0.25 * 0.01 + sqrt(2) * 0.05
  const double w = leverage_from_variance(0.2, 0.02);
  EXPECT_NEAR(continuous_index_step(0.0, w, s, 0.01, 1.0), 0.068427835406180133, 1e-15);
  EXPECT_NEAR(continuous_index_step(0.0, 1.5, seg(0.05, 0.03, 0.5, 0.02), 0.01, 0.0, true) -
                  continuous_index_step(0.0, 1.5, s, 0.01, 0.0),
              1.5 * 0.02 * 0.01, 1e-16);
}

TEST(SimplifiedProcess, ZeroDrawShrinksU) {
  const auto s = seg(0.05, 0.03, 0.5);
  const SimplifiedState st{0.1, 0.03};
  const auto next = simplified_process_step(st, LambdaParam(0.9), 0.2, s, 0.01, 0.0);
  EXPECT_DOUBLE_EQ(next.u, 0.9 * 0.03);
  const double w = 0.2 / std::sqrt(0.03);
  EXPECT_NEAR(next.log_x - 0.1, 0.05 * 0.01 + w * (-0.02) * 0.01 - 0.5 * w * w * 0.25 * 0.01, 1e-16);
}

TEST(SimplifiedProcess, NormalisedUMatchesUnrolledSum) {
  const double sigma = 0.5;
  const double v0 = 0.02;
  const auto s = seg(0.05, 0.03, sigma);
  for (double lambda : {0.8, 0.9, 0.97}) {
    for (double dt : {0.01, 1.0 / 2000.0}) {
      const auto z = normals(3, static_cast<std::uint64_t>(lambda * 100), 60);
      SimplifiedState st{0.0, v0};
      for (double zi : z) st = simplified_process_step(st, LambdaParam(lambda), 0.2, s, dt, zi);
      double closed = std::pow(lambda, 60) * v0 / (sigma * sigma);
      for (int k = 1; k <= 60; ++k) {
        const double zk = z[static_cast<std::size_t>(k - 1)];
        closed += (1.0 - lambda) * std::pow(lambda, 60 - k) * zk * zk;
      }
      EXPECT_NEAR(st.u / (sigma * sigma), closed, 1e-12);
    }
  }
}

TEST(SimplifiedProcess, UEqualsVWhenFedDiffusionReturns) {
  IndexConfig cfg;
  VarianceTracker tracker(cfg);
  const auto s = seg(0.05, 0.03, 0.5);
  const double dt = 0.004;
  SimplifiedState st{0.0, cfg.v0};
  for (double zi : normals(11, 0, 500)) {
    tracker.update(std::sqrt(s.sigma2 * dt) * zi, dt);
    st = simplified_process_step(st, cfg.lambda, cfg.target_vol, s, dt, zi);
    ASSERT_EQ(tracker.variance(), st.u);
  }
}

TEST(VarianceTracker, SmaWarmUpBlendsSeed) {
  IndexConfig cfg;
  cfg.variant = SmaVariant{4};
  VarianceTracker t(cfg);
  const double dt = 0.01;
  t.update(0.01, dt);
  EXPECT_NEAR(t.variance(), 0.75 * 0.02 + 0.25 * 0.0001 / dt, 1e-16);
  t.update(-0.02, dt);
  EXPECT_NEAR(t.variance(), 0.5 * 0.02 + 0.25 * (0.0001 + 0.0004) / dt, 1e-16);
  t.update(0.0, dt);
  t.update(0.03, dt);
  EXPECT_NEAR(t.variance(), 0.25 * (0.0001 + 0.0004 + 0.0009) / dt, 1e-15);
  t.update(0.0, dt);  // drops the first return
  EXPECT_NEAR(t.variance(), 0.25 * (0.0004 + 0.0009) / dt, 1e-15);
}

TEST(VarianceTracker, CappedUsesBothEstimators) {
  IndexConfig cfg;
  cfg.variant = CappedVariant{LambdaParam(0.5), LambdaParam(0.95), 10.0};
  VarianceTracker t(cfg);
  t.update(0.05, 0.01);
  const double v1 = 0.5 * 0.02 + 0.5 * 0.0025 / 0.01;
  const double v2 = 0.95 * 0.02 + 0.05 * 0.0025 / 0.01;
  EXPECT_NEAR(t.variance(), v1, 1e-16);
  EXPECT_NEAR(t.second_variance(), v2, 1e-16);
  EXPECT_DOUBLE_EQ(t.leverage(), std::min(0.2 / std::sqrt(v1), 0.2 / std::sqrt(v2)));
}

TEST(IndexConfig, Validation) {
  IndexConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  cfg.target_vol = 0.0;
  EXPECT_THROW(cfg.validate(), DomainError);
  cfg = {};
  cfg.leverage_lag = 0;
  EXPECT_THROW(cfg.validate(), DomainError);
  cfg = {};
  cfg.variant = SmaVariant{2};
  EXPECT_THROW(cfg.validate(), DomainError);
  cfg = {};
  cfg.variant = CappedVariant{LambdaParam(0.9), LambdaParam(0.8), 0.0};
  EXPECT_THROW(cfg.validate(), DomainError);
}

TEST(RunPath, SingleStepIsCompositionOfSteps) {
  const auto market = MarketParams::constant(0.05, 0.03, 0.5, 1.0);
  IndexConfig cfg;
  const GridSpec grid{1.0, 1};
  const std::vector<double> z{0.37};
  const auto p = run_path(market, cfg, grid, z);
  const auto s = seg(0.05, 0.03, 0.5);
  const double w = 0.2 / std::sqrt(0.02);
  const double lr = stock_log_return(s, 1.0, 0.37);
  EXPECT_DOUBLE_EQ(p.log_s, lr);
  EXPECT_DOUBLE_EQ(p.log_cont, continuous_index_step(0.0, w, s, 1.0, 0.37));
  EXPECT_DOUBLE_EQ(p.log_x, p.log_cont);
  EXPECT_DOUBLE_EQ(p.log_disc, *discrete_index_step(0.0, w, s, 1.0, std::expm1(lr)));
  EXPECT_FALSE(p.flagged);
}

TEST(RunPath, InitialIndexLevelShiftsLogs) {
  const auto market = MarketParams::constant(0.05, 0.03, 0.5, 1.0);
  IndexConfig cfg;
  const GridSpec grid{1.0, 50};
  const auto z = normals(5, 0, 50);
  const auto a = run_path(market, cfg, grid, z);
  cfg.I0 = 2.0;
  const auto b = run_path(market, cfg, grid, z);
  EXPECT_NEAR(b.log_cont - a.log_cont, std::log(2.0), 1e-14);
  EXPECT_NEAR(b.log_disc - a.log_disc, std::log(2.0), 1e-14);
}

TEST(RunPath, RejectsWrongDrawCount) {
  const auto market = MarketParams::constant(0.05, 0.03, 0.5, 1.0);
  const std::vector<double> z(3, 0.0);
  EXPECT_THROW((void)run_path(market, IndexConfig{}, GridSpec{1.0, 4}, z), DomainError);
}

TEST(RunPath, LongMemoryAtTargetTracksStock) {
  // lambda -> 1 with target = sigma and v0 = sigma^2 keeps w near one, so the
  // index replicates the stock.
  const auto market = MarketParams::constant(0.05, 0.03, 0.5, 1.0);
  IndexConfig cfg;
  cfg.lambda = LambdaParam(0.999);
  cfg.target_vol = 0.5;
  cfg.v0 = 0.25;
  const GridSpec grid{1.0, 250};
  double sum_abs = 0.0;
  const int paths = 10'000;
  for (int p = 0; p < paths; ++p) {
    const auto z = normals(21, static_cast<std::uint64_t>(p), 250);
    const auto r = run_path(market, cfg, grid, z);
    sum_abs += std::abs(r.log_cont - r.log_s);
  }
  EXPECT_LT(sum_abs / paths, 1e-2);
}

TEST(RunPath, VanishingVolatilityGivesDeterministicGrowth) {
  auto market = MarketParams::constant(0.05, 0.03, 1e-9, 1.0);
  IndexConfig cfg;
  const GridSpec grid{1.0, 100};
  const auto a = run_path(market, cfg, grid, normals(1, 0, 100));
  const auto b = run_path(market, cfg, grid, normals(1, 1, 100));
  EXPECT_NEAR(a.log_cont, b.log_cont, 1e-6);
  EXPECT_NEAR(a.log_disc, b.log_disc, 1e-6);
  // Only the drift return R = e^{rho dt} - 1 feeds v; index earns r + w (rho - r).
  const double dt = 0.01;
  const double R = std::expm1(0.03 * dt);
  double expect = 0.0;
  double v = cfg.v0;
  for (int n = 0; n < 100; ++n) {
    const double w = 0.2 / std::sqrt(v);
    expect += (0.05 + w * (0.03 - 0.05)) * dt;
    v = 0.9 * v + 0.1 / dt * R * R;
  }
  EXPECT_NEAR(a.log_cont, expect, 1e-6);
}

TEST(RunPath, UAndVConvergeInMeanSquare) {
  const auto market = MarketParams::constant(0.05, 0.03, 0.5, 1.0);
  IndexConfig cfg;
  auto mean_sq_gap = [&](int N) {
    const auto sched = segment_schedule(market, GridSpec{1.0, N});
    const double dt = 1.0 / N;
    double acc = 0.0;
    const int paths = 10'000;
    std::vector<double> z(static_cast<std::size_t>(N));
    for (int p = 0; p < paths; ++p) {
      RngStream{31, static_cast<std::uint64_t>(p)}.fill_normal(z);
      VarianceTracker v(cfg);
      VarianceTracker u(cfg);
      for (int n = 0; n < N; ++n) {
        const double zi = z[static_cast<std::size_t>(n)];
        v.update(std::expm1(stock_log_return(sched[static_cast<std::size_t>(n)], dt, zi)), dt);
        u.update(std::sqrt(0.25 * dt) * zi, dt);
      }
      acc += (u.variance() - v.variance()) * (u.variance() - v.variance());
    }
    return acc / paths;
  };
  const double coarse = mean_sq_gap(250);
  const double fine = mean_sq_gap(2500);
  EXPECT_GE(coarse / fine, 8.0) << coarse << " " << fine;
}

TEST(RunPath, LeverageStaysPositive) {
  const auto market = MarketParams::constant(0.05, 0.03, 0.5, 1.0);
  IndexConfig cfg;
  const GridSpec grid{1.0, 500};
  for (int p = 0; p < 200; ++p) {
    const auto r = run_path(market, cfg, grid, normals(8, static_cast<std::uint64_t>(p), 500), {true});
    ASSERT_EQ(r.leverage_trace.size(), 500u);
    for (double w : r.leverage_trace) ASSERT_GT(w, 0.0);
  }
}

TEST(RunPath, UncappedCappedVariantIsBitIdenticalToEwma) {
  const auto market = MarketParams::constant(0.05, 0.03, 0.5, 1.0);
  IndexConfig ewma;
  IndexConfig capped;
  capped.variant = CappedVariant{ewma.lambda, ewma.lambda, std::numeric_limits<double>::infinity()};
  const GridSpec grid{1.0, 400};
  for (int p = 0; p < 20; ++p) {
    const auto z = normals(4, static_cast<std::uint64_t>(p), 400);
    const auto a = run_path(market, ewma, grid, z, {true});
    const auto b = run_path(market, capped, grid, z, {true});
    ASSERT_EQ(a.leverage_trace, b.leverage_trace);
    ASSERT_EQ(a.log_cont, b.log_cont);
    ASSERT_EQ(a.log_disc, b.log_disc);
    ASSERT_EQ(a.log_x, b.log_x);
  }
}

TEST(RunPath, LeverageLagDelaysTrace) {
  const auto market = MarketParams::constant(0.05, 0.03, 0.5, 1.0);
  IndexConfig one;
  IndexConfig three;
  three.leverage_lag = 3;
  const GridSpec grid{1.0, 100};
  const auto z = normals(2, 0, 100);
  const auto a = run_path(market, one, grid, z, {true});
  const auto b = run_path(market, three, grid, z, {true});
  const double w0 = 0.2 / std::sqrt(0.02);
  EXPECT_EQ(b.leverage_trace[0], w0);
  EXPECT_EQ(b.leverage_trace[1], w0);
  EXPECT_EQ(b.leverage_trace[2], w0);
  for (std::size_t n = 3; n < 100; ++n) EXPECT_EQ(b.leverage_trace[n], a.leverage_trace[n - 2]);
}

TEST(RunPath, SmaVariantRuns) {
  const auto market = MarketParams::constant(0.05, 0.03, 0.5, 1.0);
  IndexConfig cfg;
  cfg.variant = SmaVariant{20};
  const auto r = run_path(market, cfg, GridSpec{1.0, 300}, normals(3, 3, 300), {true});
  EXPECT_TRUE(std::isfinite(r.log_cont));
  EXPECT_EQ(r.leverage_trace.front(), 0.2 / std::sqrt(0.02));
}

TEST(RunPath, CrashFlagsDiscreteIndexOnly) {
  const auto market = MarketParams::constant(0.05, 0.03, 0.5, 1.0);
  IndexConfig cfg;
  cfg.v0 = 0.001;  // leverage 6.3
  std::vector<double> z(10, 0.0);
  z[0] = -4.0;  // a -26% one-period return over dt = 0.1
  const auto r = run_path(market, cfg, GridSpec{1.0, 10}, z);
  EXPECT_TRUE(r.flagged);
  EXPECT_TRUE(std::isnan(r.log_disc));
  EXPECT_TRUE(std::isfinite(r.log_cont));
  EXPECT_TRUE(std::isfinite(r.log_x));
}

TEST(RunPath, FeeAdjustedVariantAddsCarry) {
  auto market = MarketParams::constant(0.05, 0.03, 0.5, 1.0);
  market.a = PiecewiseCurve::constant(0.01, 1.0);
  IndexConfig plain;
  IndexConfig fee;
  fee.variant = FeeAdjustedVariant{};
  const GridSpec grid{1.0, 200};
  const auto z = normals(6, 0, 200);
  const auto a = run_path(market, plain, grid, z, {true});
  const auto b = run_path(market, fee, grid, z, {true});
  ASSERT_EQ(a.leverage_trace, b.leverage_trace);
  double carry = 0.0;
  for (double w : a.leverage_trace) carry += w * 0.01 * grid.dt();
  EXPECT_NEAR(b.log_cont - a.log_cont, carry, 1e-12);
}
