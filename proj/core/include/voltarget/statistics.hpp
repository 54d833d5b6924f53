#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace voltarget {

/// Pairwise (cascade) summation in index order. The result depends only on
/// the sequence, never on how it was produced.
[[nodiscard]] double pairwise_sum(std::span<const double> values) noexcept;

struct SummaryStats {
  double mean = 0.0;
  double std = 0.0;          // unbiased (n - 1) sample standard deviation
  double stderr_mean = 0.0;  // std / sqrt(n)
  double stderr_std = 0.0;   // std / sqrt(2 (n - 1)), normal-theory
  std::size_t count = 0;
};

/// Throws DomainError for fewer than two samples.
[[nodiscard]] SummaryStats summary(std::span<const double> samples);

struct ShapeDiagnostics {
  double skewness = 0.0;
  double skewness_stderr = 0.0;  // sqrt(6 / n)
  double excess_kurtosis = 0.0;
  double kurtosis_stderr = 0.0;  // sqrt(24 / n)
};

[[nodiscard]] ShapeDiagnostics shape_diagnostics(std::span<const double> samples);

/// Sample variance together with its standard error sqrt((m4 - m2^2) / n),
/// m2 and m4 the central sample moments.
struct VarianceEstimate {
  double variance = 0.0;
  double stderr_variance = 0.0;
};

[[nodiscard]] VarianceEstimate variance_estimate(std::span<const double> samples);

/// Silverman-type rule 1.06 * std * n^{-1/5}.
[[nodiscard]] double silverman_bandwidth(std::span<const double> samples);

/// Gaussian kernel density estimate at each grid point. An empty bandwidth
/// selects the Silverman rule. Throws DomainError on a non-positive bandwidth.
[[nodiscard]] std::vector<double> kde(std::span<const double> samples, std::span<const double> grid,
                                      std::optional<double> bandwidth = std::nullopt);

struct Histogram {
  double lo = 0.0;
  double hi = 0.0;
  std::vector<std::size_t> counts;
};

/// Equal-width bins over [lo, hi] (the sample range when not given); the
/// last bin is closed. Samples outside the range are dropped.
[[nodiscard]] Histogram histogram(std::span<const double> samples, int bins,
                                  std::optional<double> lo = std::nullopt,
                                  std::optional<double> hi = std::nullopt);

/// Evenly spaced points from lo to hi inclusive.
[[nodiscard]] std::vector<double> linspace(double lo, double hi, int points);

}  // namespace voltarget
