#include "voltarget/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "voltarget/errors.hpp"

namespace voltarget {

namespace {

constexpr std::size_t kPairwiseBlock = 32;

double central_moment_sum(std::span<const double> x, double mean, int power) {
  std::vector<double> terms(x.size());
  std::transform(x.begin(), x.end(), terms.begin(),
                 [&](double v) { return std::pow(v - mean, power); });
  return pairwise_sum(terms);
}

void require_samples(std::span<const double> samples, std::size_t n, const char* what) {
  if (samples.size() < n) throw DomainError(what);
}

}  // namespace

double pairwise_sum(std::span<const double> values) noexcept {
  if (values.size() <= kPairwiseBlock) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

SummaryStats summary(std::span<const double> samples) {
  require_samples(samples, 2, "summary statistics need at least two samples");
  const auto n = static_cast<double>(samples.size());
  const double mean = pairwise_sum(samples) / n;
  const double var = central_moment_sum(samples, mean, 2) / (n - 1.0);
  const double sd = std::sqrt(var);
  return {mean, sd, sd / std::sqrt(n), sd / std::sqrt(2.0 * (n - 1.0)), samples.size()};
}

ShapeDiagnostics shape_diagnostics(std::span<const double> samples) {
  require_samples(samples, 4, "shape diagnostics need at least four samples");
  const auto n = static_cast<double>(samples.size());
  const double mean = pairwise_sum(samples) / n;
  const double m2 = central_moment_sum(samples, mean, 2) / n;
  const double m3 = central_moment_sum(samples, mean, 3) / n;
  const double m4 = central_moment_sum(samples, mean, 4) / n;
  ShapeDiagnostics d;
  d.skewness = m3 / std::pow(m2, 1.5);
  d.excess_kurtosis = m4 / (m2 * m2) - 3.0;
  d.skewness_stderr = std::sqrt(6.0 / n);
  d.kurtosis_stderr = std::sqrt(24.0 / n);
  return d;
}

VarianceEstimate variance_estimate(std::span<const double> samples) {
  require_samples(samples, 2, "variance estimate needs at least two samples");
  const auto n = static_cast<double>(samples.size());
  const double mean = pairwise_sum(samples) / n;
  const double sum2 = central_moment_sum(samples, mean, 2);
  const double m2 = sum2 / n;
  const double m4 = central_moment_sum(samples, mean, 4) / n;
  return {sum2 / (n - 1.0), std::sqrt(std::max(m4 - m2 * m2, 0.0) / n)};
}

double silverman_bandwidth(std::span<const double> samples) {
  const auto stats = summary(samples);
  return 1.06 * stats.std * std::pow(static_cast<double>(samples.size()), -0.2);
}

std::vector<double> kde(std::span<const double> samples, std::span<const double> grid,
                        std::optional<double> bandwidth) {
  require_samples(samples, 1, "kde needs at least one sample");
  const double h = bandwidth ? *bandwidth : silverman_bandwidth(samples);
  if (!(h > 0.0)) throw DomainError("kde bandwidth must be positive");

  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());

  // Kernel mass beyond 9 bandwidths is below 1e-18 of the peak.
  constexpr double kCutoff = 9.0;
  const double norm = 1.0 / (static_cast<double>(sorted.size()) * h * std::sqrt(2.0 * std::numbers::pi));
  std::vector<double> density(grid.size());
  std::vector<double> terms;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    const double x = grid[g];
    const auto first = std::lower_bound(sorted.begin(), sorted.end(), x - kCutoff * h);
    const auto last = std::upper_bound(first, sorted.end(), x + kCutoff * h);
    terms.clear();
    for (auto it = first; it != last; ++it) {
      const double z = (x - *it) / h;
      terms.push_back(std::exp(-0.5 * z * z));
    }
    density[g] = norm * pairwise_sum(terms);
  }
  return density;
}

Histogram histogram(std::span<const double> samples, int bins, std::optional<double> lo,
                    std::optional<double> hi) {
  if (bins < 1) throw DomainError("histogram needs at least one bin");
  require_samples(samples, 1, "histogram needs at least one sample");
  const auto [mn, mx] = std::minmax_element(samples.begin(), samples.end());
  Histogram h{lo.value_or(*mn), hi.value_or(*mx), std::vector<std::size_t>(static_cast<std::size_t>(bins), 0)};
  if (!(h.hi > h.lo)) {
    if (h.hi == h.lo) {
      h.counts.front() = static_cast<std::size_t>(std::count(samples.begin(), samples.end(), h.lo));
      return h;
    }
    throw DomainError("histogram range must satisfy lo <= hi");
  }
  const double width = (h.hi - h.lo) / bins;
  for (double x : samples) {
    if (x < h.lo || x > h.hi) continue;
    auto b = static_cast<int>((x - h.lo) / width);
    b = std::min(b, bins - 1);
    ++h.counts[static_cast<std::size_t>(b)];
  }
  return h;
}

std::vector<double> linspace(double lo, double hi, int points) {
  if (points < 2) throw DomainError("linspace needs at least two points");
  std::vector<double> out(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) {
    out[static_cast<std::size_t>(i)] = (i == points - 1) ? hi : lo + (hi - lo) * i / (points - 1);
  }
  return out;
}

}  // namespace voltarget
