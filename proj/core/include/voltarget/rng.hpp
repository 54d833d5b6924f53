#pragma once

#include <array>
#include <cstdint>
#include <span>

namespace voltarget {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11). A pure
/// function of (counter, key); no hidden state.
struct Philox4x32 {
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  [[nodiscard]] static Counter generate(Counter counter, Key key) noexcept;
};

/// Standard normal quantile. Acklam's rational approximation refined with one
/// Halley step; relative error near double precision on (0, 1).
[[nodiscard]] double inverse_normal_cdf(double p) noexcept;

/// Addressable random stream for one simulated path. Draw i of path p under
/// seed s depends only on (s, p, i).
struct RngStream {
  std::uint64_t master_seed = 0;
  std::uint64_t path_index = 0;

  /// Uniform on the open interval (0, 1) with 53 random bits.
  [[nodiscard]] double uniform(std::uint64_t i) const noexcept;
  [[nodiscard]] double normal(std::uint64_t i) const noexcept;

  /// out[j] = normal(first + j), generating two draws per Philox block.
  void fill_normal(std::span<double> out, std::uint64_t first = 0) const noexcept;
};

[[nodiscard]] inline double normal_draw(const RngStream& stream, std::uint64_t i) noexcept {
  return stream.normal(i);
}

}  // namespace voltarget
