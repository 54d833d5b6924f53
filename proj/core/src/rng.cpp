#include "voltarget/rng.hpp"

#include <cmath>
#include <numbers>

namespace voltarget {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) noexcept {
  const std::uint64_t product = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(product >> 32);
  lo = static_cast<std::uint32_t>(product);
}

inline double to_open_unit(std::uint32_t hi, std::uint32_t lo) noexcept {
  const std::uint64_t bits = (static_cast<std::uint64_t>(hi) << 32 | lo) >> 11;
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

inline Philox4x32::Counter block(const RngStream& s, std::uint64_t block_index) noexcept {
  const Philox4x32::Counter ctr = {
      static_cast<std::uint32_t>(block_index), static_cast<std::uint32_t>(block_index >> 32),
      static_cast<std::uint32_t>(s.path_index), static_cast<std::uint32_t>(s.path_index >> 32)};
  const Philox4x32::Key key = {static_cast<std::uint32_t>(s.master_seed),
                               static_cast<std::uint32_t>(s.master_seed >> 32)};
  return Philox4x32::generate(ctr, key);
}

}  // namespace

Philox4x32::Counter Philox4x32::generate(Counter ctr, Key key) noexcept {
  for (int round = 0; round < 10; ++round) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kPhiloxM0, ctr[0], hi0, lo0);
    mulhilo(kPhiloxM1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kPhiloxW0;
    key[1] += kPhiloxW1;
  }
  return ctr;
}

double inverse_normal_cdf(double p) noexcept {
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double kLow = 0.02425;

  if (!(p > 0.0)) return -HUGE_VAL;
  if (!(p < 1.0)) return HUGE_VAL;

  double x;
  if (p < kLow) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - kLow) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log1p(-p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }

  // Halley step against the erfc-based CDF. The upper tail works with the
  // complement so the residual is not swamped by rounding of p near 1.
  constexpr double kSqrt2Pi = 2.50662827463100050242;
  const double e = (x < 0.0) ? 0.5 * std::erfc(-x / std::numbers::sqrt2) - p
                             : (1.0 - p) - 0.5 * std::erfc(x / std::numbers::sqrt2);
  const double u = e * kSqrt2Pi * std::exp(0.5 * x * x);
  return x - u / (1.0 + 0.5 * x * u);
}

double RngStream::uniform(std::uint64_t i) const noexcept {
  const auto out = block(*this, i >> 1);
  return (i & 1u) ? to_open_unit(out[2], out[3]) : to_open_unit(out[0], out[1]);
}

double RngStream::normal(std::uint64_t i) const noexcept { return inverse_normal_cdf(uniform(i)); }

void RngStream::fill_normal(std::span<double> out, std::uint64_t first) const noexcept {
  std::size_t j = 0;
  std::uint64_t i = first;
  if ((i & 1u) && j < out.size()) out[j++] = normal(i++);
  for (; j + 1 < out.size(); j += 2, i += 2) {
    const auto bits = block(*this, i >> 1);
    out[j] = inverse_normal_cdf(to_open_unit(bits[0], bits[1]));
    out[j + 1] = inverse_normal_cdf(to_open_unit(bits[2], bits[3]));
  }
  if (j < out.size()) out[j] = normal(i);
}

}  // namespace voltarget
