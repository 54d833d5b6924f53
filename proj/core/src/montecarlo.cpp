#include "voltarget/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include "voltarget/errors.hpp"
#include "voltarget/rng.hpp"

namespace voltarget {

namespace {

constexpr std::size_t kChunk = 64;
constexpr std::size_t kDrawBlock = 4096;

int resolve_threads(int threads, std::size_t work) {
  int n = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
  n = std::max(n, 1);
  const auto max_useful = static_cast<int>((work + kChunk - 1) / kChunk);
  return std::max(1, std::min(n, max_useful));
}

// Single-element stats for one path; summary() needs two samples.
SummaryStats stats_or_single(std::span<const double> values) {
  if (values.size() >= 2) return summary(values);
  SummaryStats s;
  s.count = values.size();
  s.mean = values.empty() ? 0.0 : values.front();
  return s;
}

// Walks one normalised driver path, calling visit(w_prev, z) for k = 1..N
// before w is advanced with Z_k.
template <class Visit>
void walk_driver(const DriverSpec& spec, std::uint64_t path, Visit&& visit) {
  const double lambda = spec.lambda.value();
  const RngStream stream{spec.seed, path};
  std::vector<double> z(kDrawBlock);
  double w = spec.v0 / (spec.sigma * spec.sigma);
  const auto total = static_cast<std::uint64_t>(spec.steps);
  for (std::uint64_t first = 0; first < total; first += kDrawBlock) {
    const auto len = static_cast<std::size_t>(std::min<std::uint64_t>(kDrawBlock, total - first));
    stream.fill_normal(std::span<double>(z.data(), len), first);
    for (std::size_t j = 0; j < len; ++j) {
      visit(w, z[j]);
      const double xi = spec.unit_driver ? 1.0 : z[j] * z[j];
      w = lambda * w + (1.0 - lambda) * xi;
    }
  }
}

}  // namespace

void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& fn) {
  const int workers = resolve_threads(threads, count);
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto body = [&] {
    try {
      for (;;) {
        const std::size_t begin = next.fetch_add(kChunk);
        if (begin >= count) break;
        const std::size_t end = std::min(count, begin + kChunk);
        for (std::size_t i = begin; i < end; ++i) fn(i);
      }
    } catch (...) {
      const std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      next.store(count);
    }
  };
  std::vector<std::jthread> pool;
  pool.reserve(static_cast<std::size_t>(workers - 1));
  for (int t = 1; t < workers; ++t) pool.emplace_back(body);
  body();
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

std::vector<double> SimResult::disc_samples() const {
  std::vector<double> out;
  out.reserve(log_disc.size() - flagged_count);
  for (std::size_t i = 0; i < log_disc.size(); ++i) {
    if (!flagged[i]) out.push_back(log_disc[i]);
  }
  return out;
}

SimResult run_batch(const MarketParams& market, const IndexConfig& config, const GridSpec& grid,
                    int paths, std::uint64_t seed, int threads) {
  if (paths < 1) throw DomainError("run_batch needs at least one path");
  market.validate();
  config.validate();
  const auto schedule = segment_schedule(market, grid);
  const double dt = grid.dt();

  const auto count = static_cast<std::size_t>(paths);
  SimResult result;
  result.log_disc.resize(count);
  result.log_cont.resize(count);
  result.log_x.resize(count);
  result.flagged.resize(count);
  result.config = config;
  result.grid = grid;
  result.seed = seed;

  parallel_for(count, threads, [&](std::size_t p) {
    thread_local std::vector<double> z;
    z.resize(schedule.size());
    RngStream{seed, p}.fill_normal(z);
    const PathResult path = run_path(schedule, config, dt, z);
    result.log_disc[p] = path.log_disc;
    result.log_cont[p] = path.log_cont;
    result.log_x[p] = path.log_x;
    result.flagged[p] = path.flagged ? 1 : 0;
  });
  result.flagged_count = static_cast<std::size_t>(
      std::count(result.flagged.begin(), result.flagged.end(), std::uint8_t{1}));
  return result;
}

McEstimate mc_call_price(std::span<const double> log_terminal, double strike, double discount) {
  std::vector<double> payoff(log_terminal.size());
  std::transform(log_terminal.begin(), log_terminal.end(), payoff.begin(),
                 [&](double x) { return discount * std::max(std::exp(x) - strike, 0.0); });
  const auto s = stats_or_single(payoff);
  return {s.mean, s.stderr_mean};
}

McEstimate mc_bump_sensitivity(std::span<const double> log_up, std::span<const double> log_down,
                               double strike, double discount, double bump) {
  if (log_up.size() != log_down.size()) throw DomainError("bumped batches must have equal size");
  if (!(bump > 0.0)) throw DomainError("bump must be positive");
  std::vector<double> diff(log_up.size());
  for (std::size_t i = 0; i < diff.size(); ++i) {
    const double up = std::max(std::exp(log_up[i]) - strike, 0.0);
    const double down = std::max(std::exp(log_down[i]) - strike, 0.0);
    diff[i] = discount * (up - down) / (2.0 * bump);
  }
  const auto s = stats_or_single(diff);
  return {s.mean, s.stderr_mean};
}

void DriverSpec::validate() const {
  if (!(v0 > 0.0) || !(sigma > 0.0)) throw DomainError("driver needs v0 > 0 and sigma > 0");
  if (steps < 1 || paths < 1) throw DomainError("driver needs steps >= 1 and paths >= 1");
}

LlnReport lln_verify(const DriverSpec& spec, int threads, const QuadratureSettings& settings) {
  spec.validate();
  const auto count = static_cast<std::size_t>(spec.paths);
  LlnReport report;
  report.path_u.resize(count);
  report.path_v.resize(count);
  parallel_for(count, threads, [&](std::size_t p) {
    double sum_u = 0.0;
    double sum_v = 0.0;
    walk_driver(spec, p, [&](double w, double) {
      sum_u += 1.0 / std::sqrt(w);
      sum_v += 1.0 / w;
    });
    report.path_u[p] = sum_u / spec.steps;
    report.path_v[p] = sum_v / spec.steps;
  });
  report.u_stats = stats_or_single(report.path_u);
  report.v_stats = stats_or_single(report.path_v);
  report.target_u = compute_U(spec.lambda, settings);
  report.target_v = compute_V(spec.lambda, settings);
  return report;
}

CltReport clt_verify(const DriverSpec& spec, int threads, const QuadratureSettings& settings) {
  spec.validate();
  if (spec.paths < 4) throw DomainError("clt_verify needs at least four paths");
  const auto count = static_cast<std::size_t>(spec.paths);
  CltReport report;
  report.normalized_sums.resize(count);
  parallel_for(count, threads, [&](std::size_t p) {
    double sum = 0.0;
    walk_driver(spec, p, [&](double w, double z) { sum += z / std::sqrt(w); });
    report.normalized_sums[p] = sum / std::sqrt(static_cast<double>(spec.steps));
  });
  report.variance = variance_estimate(report.normalized_sums);
  report.shape = shape_diagnostics(report.normalized_sums);
  report.target_v = compute_V(spec.lambda, settings);
  return report;
}

EquivalenceReport equivalence_check(const MarketParams& market, const IndexConfig& config,
                                    const GridSpec& grid, int paths, std::uint64_t seed, int threads) {
  const SimResult sim = run_batch(market, config, grid, paths, seed, threads);
  std::vector<double> diffs;
  diffs.reserve(sim.paths());
  for (std::size_t i = 0; i < sim.paths(); ++i) {
    if (!sim.flagged[i]) diffs.push_back(std::abs(sim.log_disc[i] - sim.log_cont[i]));
  }
  EquivalenceReport report;
  report.unflagged = diffs.size();
  report.flagged_fraction = static_cast<double>(sim.flagged_count) / static_cast<double>(sim.paths());
  report.mean_abs_log_diff = diffs.empty() ? std::numeric_limits<double>::quiet_NaN()
                                           : pairwise_sum(diffs) / static_cast<double>(diffs.size());
  return report;
}

}  // namespace voltarget
