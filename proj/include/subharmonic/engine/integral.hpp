#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "subharmonic/engine/quadrature.hpp"
#include "subharmonic/error.hpp"

namespace subharmonic {

/// One g-integral of the mixture-of-g-priors family,
///
///   J = int_0^inf g^{nu/2-1} (1+1/g)^{-k/2} (1+g)^{(n-q-1)/2} (1+r g)^{-E} dg,
///
/// with E = outer_exponent_half: (n-1)/2 when r = 1 - R^2 (intercept
/// integrated out) and n/2 when r = 1 - check-R^2 (intercept treated as a
/// coefficient).
struct IntegralSpec {
  int n = 0;
  int q = 0;
  double r = 1.0;
  double nu = 0.0;
  double k = 0.0;
  double outer_exponent_half = 0.0;

  static IntegralSpec centered(int n, int q, double r, double nu, double k) {
    return {n, q, r, nu, k, 0.5 * (n - 1)};
  }
  static IntegralSpec check(int n, int q, double r, double nu, double k) {
    return {n, q, r, nu, k, 0.5 * n};
  }

  /// The check form with (n, q) is the centered form with (n+1, q+1). These
  /// are the sample size and dimension of the equivalent centered integral.
  double effective_n() const { return 2.0 * outer_exponent_half + 1.0; }
  double effective_q() const { return q + 2.0 * outer_exponent_half - (n - 1); }
};

/// Mode of the log-integrand h(tau) after the substitution g = exp(tau).
struct LaplaceMode {
  double z_hat = 0.0;       // exp(tau_hat)
  double tau_hat = 0.0;
  double h_at_mode = 0.0;
  double curvature = 0.0;   // d^2 h / d tau^2 at tau_hat, negative
};

namespace detail {

inline double softplus(double x) {
  return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

inline void require_finite_integral(const IntegralSpec& s) {
  if (!std::isfinite(s.r) || !std::isfinite(s.nu) || !std::isfinite(s.k) ||
      !std::isfinite(s.outer_exponent_half)) {
    throw Error(ErrorCode::DomainError, "integral parameters must be finite");
  }
  if (s.n < 2 || s.q < 0) throw Error(ErrorCode::DomainError, "need n >= 2 and q >= 0");
  if (s.k < 0.0) throw Error(ErrorCode::DomainError, "k must be non-negative");
  if (!(s.outer_exponent_half > 0.0)) {
    throw Error(ErrorCode::DomainError, "outer exponent must be positive");
  }
}

inline void require_convergent(const IntegralSpec& s) {
  if (!(s.nu < s.effective_q())) {
    throw Error(ErrorCode::DivergentIntegral,
                "nu = " + std::to_string(s.nu) + " must be below q = " +
                    std::to_string(s.effective_q()) + " for the integral to converge at infinity");
  }
  if (!(s.nu > -s.k)) {
    throw Error(ErrorCode::DivergentIntegral, "nu = " + std::to_string(s.nu) +
                                                  " must exceed -k = " + std::to_string(-s.k) +
                                                  " for the integral to converge at zero");
  }
}

/// Positive root of (q-nu) r z^2 + [(q-nu) - (n-1)(1-r) - (nu+k) r] z - (nu+k) = 0
/// in effective (n, q); valid for 0 < r <= 1 inside the convergence region.
inline double mode_root(const IntegralSpec& s) {
  const double shape = s.effective_q() - s.nu;
  const double d = s.effective_n() - 1.0;
  const double a = shape * s.r;
  const double b = shape - d * (1.0 - s.r) - (s.nu + s.k) * s.r;
  const double c = -(s.nu + s.k);
  const double disc = std::sqrt(b * b - 4.0 * a * c);
  // Pick the form that avoids cancellation between -b and the root.
  return b < 0.0 ? (-b + disc) / (2.0 * a) : (-2.0 * c) / (b + disc);
}

inline LaplaceMode mode_unchecked(const IntegralSpec& s);

}  // namespace detail

/// h(tau): log of the integrand in tau = log g, Jacobian included.
inline double log_integrand(const IntegralSpec& s, double tau) {
  const double a = 0.5 * (s.n - s.q - 1);
  return 0.5 * s.nu * tau - 0.5 * s.k * detail::softplus(-tau) + a * detail::softplus(tau) -
         s.outer_exponent_half * detail::softplus(tau + std::log(s.r));
}

/// dh/dtau = (1/2) z/(1+z) { (n-1)(1-r)/(1+rz) + (nu+k)/z - (q-nu) }, z = e^tau.
inline double log_integrand_slope(const IntegralSpec& s, double tau) {
  const double d = s.effective_n() - 1.0;
  const double shape = s.effective_q() - s.nu;
  const double up = 1.0 / (1.0 + std::exp(-tau));    // z/(1+z), overflow safe
  const double down = 1.0 / (1.0 + std::exp(tau));   // 1/(1+z)
  return 0.5 * up * (d * (1.0 - s.r) / (1.0 + s.r * std::exp(tau)) - shape) +
         0.5 * (s.nu + s.k) * down;
}

/// d2h/dtau2 = h'/(1+z) - z^2/(2(1+z)) { (n-1)(1-r) r/(1+rz)^2 + (nu+k)/z^2 }.
inline double log_integrand_curvature(const IntegralSpec& s, double tau) {
  const double z = std::exp(tau);
  const double d = s.effective_n() - 1.0;
  const double down = 1.0 / (1.0 + z);
  const double up = 1.0 / (1.0 + std::exp(-tau));
  const double rz = s.r * z / (1.0 + s.r * z);  // rz/(1+rz) in [0, 1]
  return log_integrand_slope(s, tau) * down - 0.5 * up * d * (1.0 - s.r) * rz / (1.0 + s.r * z) -
         0.5 * (s.nu + s.k) * down;
}

namespace detail {

inline LaplaceMode mode_unchecked(const IntegralSpec& s) {
  LaplaceMode m;
  m.z_hat = mode_root(s);
  m.tau_hat = std::log(m.z_hat);
  m.h_at_mode = log_integrand(s, m.tau_hat);
  m.curvature = log_integrand_curvature(s, m.tau_hat);
  return m;
}

inline void require_laplace_domain(const IntegralSpec& s) {
  require_finite_integral(s);
  if (!(s.r > 0.0 && s.r < 1.0)) {
    throw Error(ErrorCode::DomainError, "Laplace approximation needs 0 < r < 1");
  }
  if (!(s.nu < s.effective_q()) || !(s.nu > -s.k)) {
    throw Error(ErrorCode::DomainError, "Laplace approximation needs -k < nu < q");
  }
}

}  // namespace detail

/// Mode and curvature of h; the mode is the unique positive root of the
/// derivative condition cleared of denominators.
inline LaplaceMode laplace_mode(const IntegralSpec& s) {
  detail::require_laplace_domain(s);
  return detail::mode_unchecked(s);
}

inline constexpr double kDefaultRelTol = 1e-10;

/// log J by adaptive quadrature in tau, centred on the mode. The window grows
/// outward panel by panel until neither the newest panel nor the remaining
/// exponential tail can move the total by more than rel_tol.
inline double log_integral_J(const IntegralSpec& s, double rel_tol = kDefaultRelTol) {
  detail::require_finite_integral(s);
  if (!(rel_tol > 1e-14 && rel_tol < 1e-4)) {
    throw Error(ErrorCode::DomainError, "rel_tol must lie in (1e-14, 1e-4)");
  }
  if (!(s.r > 0.0 && s.r <= 1.0)) throw Error(ErrorCode::DomainError, "r must lie in (0, 1]");
  detail::require_convergent(s);

  const LaplaceMode mode = detail::mode_unchecked(s);
  const double h0 = mode.h_at_mode;
  auto f = [&](double tau) { return std::exp(log_integrand(s, tau) - h0); };

  // h - h0 carries rounding of order eps |h0|; no tolerance can beat that.
  const double noise = 64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(h0));
  const double width = 1.0 / std::sqrt(-mode.curvature);
  const double core = std::max(8.0 * width, 4.0);
  double total = quadrature::integrate(f, mode.tau_hat - core, mode.tau_hat + core, 0.0,
                                       std::max(0.1 * rel_tol, noise))
                     .value;

  const double stop = std::max(0.01 * rel_tol, noise);
  for (int side : {-1, +1}) {
    double edge = mode.tau_hat + side * core;
    double panel = core;
    for (int step = 0;; ++step) {
      if (step == 60) {
        throw Error(ErrorCode::NonConvergent, "integrand tail did not decay within the budget");
      }
      const double slope = std::abs(log_integrand_slope(s, edge));
      const double tail = f(edge) / std::max(slope, std::numeric_limits<double>::min());
      if (tail < stop * total) break;
      const double next = edge + side * panel;
      const double lo = std::min(edge, next);
      const double hi = std::max(edge, next);
      total += quadrature::integrate(f, lo, hi, stop * total, 0.0).value;
      edge = next;
      panel *= 2.0;
    }
  }
  return h0 + std::log(total);
}

/// Fully exponential Laplace value 1/2 log(2 pi) + h(tau_hat) - 1/2 log(-h''(tau_hat)).
inline double log_integral_laplace_exact(const IntegralSpec& s) {
  const LaplaceMode m = laplace_mode(s);
  return 0.5 * std::log(2.0 * std::numbers::pi) + m.h_at_mode - 0.5 * std::log(-m.curvature);
}

inline double log_phi(double s, double r) {
  if (!(s > 0.0) || !(r > 0.0 && r < 1.0) || !std::isfinite(s)) {
    throw Error(ErrorCode::DomainError, "phi needs s > 0 and 0 < r < 1");
  }
  return std::log(r) + (s - 1.0) * std::log(s) - s * (std::log(1.0 / r - 1.0) + 1.0);
}

/// phi(s, r) = r s^{s-1} {(1/r - 1) e}^{-s}.
inline double phi(double s, double r) { return std::exp(log_phi(s, r)); }

/// Large-n closed form 1/2 log(4 pi phi(q-nu, r) / (n^{q-nu} r^n)).
inline double log_integral_phi(const IntegralSpec& s) {
  detail::require_laplace_domain(s);
  const double shape = s.effective_q() - s.nu;
  const double n = s.effective_n();
  return 0.5 * (std::log(4.0 * std::numbers::pi) + log_phi(shape, s.r) - shape * std::log(n) -
                n * std::log(s.r));
}

}  // namespace subharmonic
