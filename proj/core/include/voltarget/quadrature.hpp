#pragma once

// Globally adaptive Gauss-Kronrod (7/15) quadrature on finite intervals and
// on [a, inf) via the substitution t = 1/s on the tail.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "voltarget/errors.hpp"

namespace voltarget::quadrature {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;     // estimated absolute error, |K15 - G7| summed over segments
  int subdivisions = 0;   // number of bisections performed
};

struct AdaptiveOptions {
  double abs_tol = 1e-10;
  double rel_tol = 1e-12;
  int max_subdivisions = 2000;
};

namespace detail {

// Kronrod abscissae on [-1, 1], descending; odd indices are the Gauss nodes.
inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

// Weights of the 7-point Gauss rule at kKronrodNodes[1], [3], [5], [7].
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a;
  double b;
  double value;
  double error;
};

template <class F>
Segment gauss_kronrod_15(F& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);

  const double f_center = f(center);
  double kronrod = kKronrodWeights[7] * f_center;
  double gauss = kGaussWeights[3] * f_center;
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kKronrodNodes[j];
    const double pair = f(center - dx) + f(center + dx);
    kronrod += kKronrodWeights[j] * pair;
    if (j % 2 == 1) gauss += kGaussWeights[j / 2] * pair;
  }
  kronrod *= half;
  gauss *= half;
  return {a, b, kronrod, std::abs(kronrod - gauss)};
}

}  // namespace detail

/// Integrates f over [a, b] by repeatedly bisecting the segment with the
/// largest error estimate until the summed estimate is below
/// max(abs_tol, rel_tol * |I|). Throws ConvergenceError when the budget of
/// `max_subdivisions` bisections runs out first.
template <class F>
QuadratureResult integrate(F&& f, double a, double b, const AdaptiveOptions& opts = {}) {
  if (!(opts.abs_tol > 0.0) || !(opts.rel_tol > 0.0) || opts.max_subdivisions < 1) {
    throw DomainError("quadrature tolerances must be positive and max_subdivisions >= 1");
  }
  if (a == b) return {};
  if (b < a) {
    QuadratureResult flipped = integrate(f, b, a, opts);
    flipped.value = -flipped.value;
    return flipped;
  }

  const auto by_error = [](const detail::Segment& x, const detail::Segment& y) {
    return x.error < y.error;
  };

  std::vector<detail::Segment> heap;
  heap.reserve(static_cast<std::size_t>(opts.max_subdivisions) + 2);
  heap.push_back(detail::gauss_kronrod_15(f, a, b));
  double total = heap.front().value;
  double total_err = heap.front().error;

  int bisections = 0;
  while (total_err > std::max(opts.abs_tol, opts.rel_tol * std::abs(total))) {
    if (bisections >= opts.max_subdivisions) {
      throw ConvergenceError("adaptive quadrature exhausted " +
                             std::to_string(opts.max_subdivisions) +
                             " subdivisions; error estimate " + std::to_string(total_err));
    }
    std::pop_heap(heap.begin(), heap.end(), by_error);
    const detail::Segment worst = heap.back();
    heap.pop_back();

    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      throw ConvergenceError("adaptive quadrature segment collapsed to machine precision");
    }
    const detail::Segment left = detail::gauss_kronrod_15(f, worst.a, mid);
    const detail::Segment right = detail::gauss_kronrod_15(f, mid, worst.b);
    heap.push_back(left);
    std::push_heap(heap.begin(), heap.end(), by_error);
    heap.push_back(right);
    std::push_heap(heap.begin(), heap.end(), by_error);
    ++bisections;

    // Re-sum rather than update incrementally so the running totals do not
    // accumulate cancellation error over thousands of bisections.
    total = 0.0;
    total_err = 0.0;
    for (const auto& s : heap) {
      total += s.value;
      total_err += s.error;
    }
  }
  return {total, total_err, bisections};
}

/// Integrates f over [a, inf): [a, split] directly and [split, inf) as
/// int_0^{1/split} f(1/s) / s^2 ds. The tolerance is shared evenly between the
/// two pieces. Requires 0 <= a < split.
template <class F>
QuadratureResult integrate_half_line(F&& f, double a, double split, const AdaptiveOptions& opts = {}) {
  if (!(a >= 0.0) || !(split > a)) {
    throw DomainError("integrate_half_line requires 0 <= a < split");
  }
  AdaptiveOptions piece_opts = opts;
  piece_opts.abs_tol = 0.5 * opts.abs_tol;

  const QuadratureResult head = integrate(f, a, split, piece_opts);
  auto tail_integrand = [&f](double s) {
    if (s <= 0.0) return 0.0;
    const double t = 1.0 / s;
    const double v = f(t);
    return v == 0.0 ? 0.0 : (v * t) * t;
  };
  const QuadratureResult tail = integrate(tail_integrand, 0.0, 1.0 / split, piece_opts);
  return {head.value + tail.value, head.error + tail.error,
          head.subdivisions + tail.subdivisions};
}

}  // namespace voltarget::quadrature
