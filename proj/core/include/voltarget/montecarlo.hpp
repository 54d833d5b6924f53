#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "voltarget/index_engine.hpp"
#include "voltarget/market.hpp"
#include "voltarget/multipliers.hpp"
#include "voltarget/statistics.hpp"

namespace voltarget {

/// Runs fn(i) for i in [0, count) on `threads` workers (0 = hardware
/// concurrency). fn must write only to slot i of its outputs; the first
/// exception thrown by any worker is rethrown on the caller.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& fn);

struct SimResult {
  std::vector<double> log_disc;  // per path, NaN where flagged
  std::vector<double> log_cont;
  std::vector<double> log_x;
  std::vector<std::uint8_t> flagged;
  std::size_t flagged_count = 0;
  IndexConfig config;
  GridSpec grid;
  std::uint64_t seed = 0;

  [[nodiscard]] std::size_t paths() const noexcept { return log_cont.size(); }
  /// Terminal log I~ over unflagged paths, in path order.
  [[nodiscard]] std::vector<double> disc_samples() const;
};

/// Path p is driven by RngStream{seed, p}; results are identical for any
/// thread count.
[[nodiscard]] SimResult run_batch(const MarketParams& market, const IndexConfig& config,
                                  const GridSpec& grid, int paths, std::uint64_t seed,
                                  int threads = 0);

struct McEstimate {
  double value = 0.0;
  double std_error = 0.0;
};

/// discount * mean(max(exp(x) - K, 0)).
[[nodiscard]] McEstimate mc_call_price(std::span<const double> log_terminal, double strike,
                                       double discount);

/// Central bump-and-reprice derivative from common-random-number batches,
/// with the standard error of the per-path differences.
[[nodiscard]] McEstimate mc_bump_sensitivity(std::span<const double> log_up,
                                             std::span<const double> log_down, double strike,
                                             double discount, double bump);

// ---------------------------------------------------------------------------
// Empirical limit-theorem checks on the normalised variance driver
//   w_n = lambda w_{n-1} + (1 - lambda) xi_n,   w_0 = v0 / sigma^2,  xi = Z^2

struct DriverSpec {
  LambdaParam lambda{0.9};
  double v0 = 0.02;
  double sigma = 0.5;
  int steps = 10000;
  int paths = 1;
  std::uint64_t seed = 0;
  bool unit_driver = false;  // xi == 1 instead of Z^2

  void validate() const;
};

struct LlnReport {
  std::vector<double> path_u;  // (1/N) sum w_{k-1}^{-1/2}
  std::vector<double> path_v;  // (1/N) sum w_{k-1}^{-1}
  SummaryStats u_stats;        // std fields are zero for a single path
  SummaryStats v_stats;
  MultiplierEstimate target_u;
  MultiplierEstimate target_v;
};

[[nodiscard]] LlnReport lln_verify(const DriverSpec& spec, int threads = 0,
                                   const QuadratureSettings& settings = {});

struct CltReport {
  std::vector<double> normalized_sums;  // N^{-1/2} sum Z_k / sqrt(w_{k-1}), one per path
  VarianceEstimate variance;
  ShapeDiagnostics shape;
  MultiplierEstimate target_v;
};

[[nodiscard]] CltReport clt_verify(const DriverSpec& spec, int threads = 0,
                                   const QuadratureSettings& settings = {});

struct EquivalenceReport {
  double mean_abs_log_diff = 0.0;  // over unflagged paths
  double flagged_fraction = 0.0;
  std::size_t unflagged = 0;
};

[[nodiscard]] EquivalenceReport equivalence_check(const MarketParams& market, const IndexConfig& config,
                                                  const GridSpec& grid, int paths, std::uint64_t seed,
                                                  int threads = 0);

}  // namespace voltarget
