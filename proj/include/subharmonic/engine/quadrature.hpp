#pragma once

#include <array>
#include <cmath>
#include <queue>
#include <vector>

#include "subharmonic/error.hpp"

namespace subharmonic::quadrature {

struct Estimate {
  double value = 0.0;
  double error = 0.0;
  int evaluations = 0;
};

namespace detail {

// 15-point Kronrod extension of the 7-point Gauss rule on [-1, 1].
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
// Gauss weights for the nodes at odd positions (1, 3, 5) and the centre.
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class F>
Estimate gauss_kronrod_15(F& f, double a, double b) {
  const double centre = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(centre);
  double kronrod = fc * kKronrodWeights[7];
  double gauss = fc * kGaussWeights[3];
  for (int i = 0; i < 7; ++i) {
    const double dx = half * kKronrodNodes[static_cast<std::size_t>(i)];
    const double sum = f(centre - dx) + f(centre + dx);
    kronrod += kKronrodWeights[static_cast<std::size_t>(i)] * sum;
    if (i % 2 == 1) gauss += kGaussWeights[static_cast<std::size_t>(i / 2)] * sum;
  }
  return {kronrod * half, std::abs((kronrod - gauss) * half), 15};
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod (7/15) integration of f over [a, b]:
/// repeatedly bisects the interval with the largest error estimate until the
/// summed estimate is at most max(abs_tol, rel_tol * |value|). Throws
/// NonConvergent when more than max_intervals subintervals would be needed.
template <class F>
Estimate integrate(F&& f, double a, double b, double abs_tol, double rel_tol,
                   int max_intervals = 2000) {
  struct Piece {
    double a, b;
    Estimate est;
    bool operator<(const Piece& o) const { return est.error < o.est.error; }
  };
  std::priority_queue<Piece> pieces;
  Estimate total = detail::gauss_kronrod_15(f, a, b);
  pieces.push({a, b, total});
  int evaluations = total.evaluations;
  while (total.error > std::max(abs_tol, rel_tol * std::abs(total.value))) {
    if (static_cast<int>(pieces.size()) >= max_intervals) {
      throw Error(ErrorCode::NonConvergent, "adaptive quadrature exceeded its interval budget");
    }
    const Piece worst = pieces.top();
    pieces.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    const Estimate left = detail::gauss_kronrod_15(f, worst.a, mid);
    const Estimate right = detail::gauss_kronrod_15(f, mid, worst.b);
    evaluations += left.evaluations + right.evaluations;
    total.value += left.value + right.value - worst.est.value;
    total.error += left.error + right.error - worst.est.error;
    pieces.push({worst.a, mid, left});
    pieces.push({mid, worst.b, right});
  }
  // Re-sum to shed the drift of the running updates.
  Estimate exact_sum{0.0, 0.0, evaluations};
  while (!pieces.empty()) {
    exact_sum.value += pieces.top().est.value;
    exact_sum.error += pieces.top().est.error;
    pieces.pop();
  }
  return exact_sum;
}

}  // namespace subharmonic::quadrature
