#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <string>

#include "subharmonic/error.hpp"

namespace subharmonic {

/// Spherically symmetric error law for an n-vector with unit component
/// variance, described through its density generator f(||e||^2).
struct ErrorModel {
  enum class Family { Gaussian, StudentT, ScaleMixture };

  Family family = Family::Gaussian;
  double df = 0.0;  // StudentT only

  // ScaleMixture oracles. log_moment(n, nu) = log E||e||^nu is required;
  // the density pair is needed only for BIC scale roots.
  std::function<double(int, double)> log_moment;
  std::function<double(int, double)> log_density;        // (n, t) -> log f(t)
  std::function<double(int, double)> log_density_slope;  // (n, t) -> f'(t)/f(t)

  static ErrorModel gaussian() { return {}; }

  /// Multivariate t with df degrees of freedom, rescaled to unit variance.
  static ErrorModel student_t(double df) {
    if (!(df > 2.0)) throw Error(ErrorCode::DomainError, "Student t needs df > 2 for unit variance");
    ErrorModel m;
    m.family = Family::StudentT;
    m.df = df;
    return m;
  }

  static ErrorModel scale_mixture(std::function<double(int, double)> log_moment,
                                  std::function<double(int, double)> log_density = {},
                                  std::function<double(int, double)> log_density_slope = {}) {
    ErrorModel m;
    m.family = Family::ScaleMixture;
    m.log_moment = std::move(log_moment);
    m.log_density = std::move(log_density);
    m.log_density_slope = std::move(log_density_slope);
    return m;
  }

  std::string name() const {
    switch (family) {
      case Family::Gaussian: return "gaussian";
      case Family::StudentT: {
        std::string s = std::to_string(df);
        s.erase(s.find_last_not_of('0') + 1);
        if (s.back() == '.') s.pop_back();
        return "t" + s;
      }
      case Family::ScaleMixture: return "scale-mixture";
    }
    return "unknown";
  }
};

/// log E||e||^nu for an n-dimensional error vector.
inline double log_norm_moment(const ErrorModel& model, int n, double nu) {
  if (n < 1) throw Error(ErrorCode::DomainError, "n must be positive");
  if (nu == 0.0) return 0.0;
  if (model.family == ErrorModel::Family::ScaleMixture) {
    if (!model.log_moment) throw Error(ErrorCode::UnsupportedFamily, "scale mixture lacks a moment oracle");
    return model.log_moment(n, nu);
  }
  if (!(nu > -n)) {
    throw Error(ErrorCode::MomentDiverges, "E||e||^nu is infinite for nu <= -n");
  }
  if (model.family == ErrorModel::Family::StudentT && !(nu < model.df)) {
    throw Error(ErrorCode::MomentDiverges, "E||e||^nu is infinite for nu >= df");
  }
  // Unit component variance makes the second moment exactly n.
  if (nu == 2.0) return std::log(static_cast<double>(n));

  const double gaussian_part = std::lgamma(0.5 * (n + nu)) - std::lgamma(0.5 * n);
  if (model.family == ErrorModel::Family::Gaussian) {
    return 0.5 * nu * std::numbers::ln2 + gaussian_part;
  }
  const double df = model.df;
  return gaussian_part + std::lgamma(0.5 * (df - nu)) - std::lgamma(0.5 * df) +
         0.5 * nu * std::log(df - 2.0);
}

/// log E||e_g||^nu - log E||e_F||^nu: the factor the exact Bayes factor picks up
/// when submodel and full model have different error laws.
inline double bf_moment_correction(const ErrorModel& err_g, const ErrorModel& err_f, int n,
                                   double nu) {
  return log_norm_moment(err_g, n, nu) - log_norm_moment(err_f, n, nu);
}

/// log f(t) for the density generator of the n-vector.
inline double log_density_generator(const ErrorModel& model, int n, double t) {
  switch (model.family) {
    case ErrorModel::Family::Gaussian:
      return -0.5 * n * std::log(2.0 * std::numbers::pi) - 0.5 * t;
    case ErrorModel::Family::StudentT: {
      const double df = model.df;
      return std::lgamma(0.5 * (df + n)) - std::lgamma(0.5 * df) -
             0.5 * n * std::log(std::numbers::pi * (df - 2.0)) -
             0.5 * (df + n) * std::log1p(t / (df - 2.0));
    }
    case ErrorModel::Family::ScaleMixture:
      if (!model.log_density) throw Error(ErrorCode::UnsupportedFamily, "scale mixture lacks a density oracle");
      return model.log_density(n, t);
  }
  throw Error(ErrorCode::UnsupportedFamily, "unknown family");
}

/// f'(t)/f(t).
inline double log_density_slope(const ErrorModel& model, int n, double t) {
  switch (model.family) {
    case ErrorModel::Family::Gaussian: return -0.5;
    case ErrorModel::Family::StudentT: return -0.5 * (model.df + n) / (model.df - 2.0 + t);
    case ErrorModel::Family::ScaleMixture:
      if (!model.log_density_slope) throw Error(ErrorCode::UnsupportedFamily, "scale mixture lacks a density oracle");
      return model.log_density_slope(n, t);
  }
  throw Error(ErrorCode::UnsupportedFamily, "unknown family");
}

/// Root of n/2 + c f'(c)/f(c) = 0 by bisection on (0, 10n].
inline double bic_scale_root_bisection(const ErrorModel& model, int n) {
  auto g = [&](double c) { return 0.5 * n + c * log_density_slope(model, n, c); };
  double lo = 0.0;
  double hi = 10.0 * n;
  if (!(g(hi) < 0.0)) {
    throw Error(ErrorCode::NonConvergent, "no sign change of the scale equation on (0, 10n]");
  }
  while (true) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (g(mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

/// Scale c at which eta^{n/2} f(eta * RSS) is maximised (eta_hat = c / RSS).
/// Closed forms: c = n (Gaussian), c = n (df-2)/df (unit-variance t). The
/// closed form is always checked against the bisection root.
inline double bic_scale_root(const ErrorModel& model, int n) {
  if (n < 1) throw Error(ErrorCode::DomainError, "n must be positive");
  const double numeric = bic_scale_root_bisection(model, n);
  double closed = numeric;
  switch (model.family) {
    case ErrorModel::Family::Gaussian: closed = n; break;
    case ErrorModel::Family::StudentT: closed = n * (model.df - 2.0) / model.df; break;
    case ErrorModel::Family::ScaleMixture: return numeric;
  }
  if (std::abs(closed - numeric) > 1e-9 * closed) {
    throw Error(ErrorCode::NumericalMismatch, "closed-form scale root disagrees with bisection");
  }
  return closed;
}

/// Log of the ratio of maximised likelihood constants c^{n/2} f(c) between the
/// submodel's and the full model's error laws; zero for a shared law.
inline double log_bic_correction(const ErrorModel& err_g, const ErrorModel& err_f, int n) {
  auto log_constant = [n](const ErrorModel& m) {
    const double c = bic_scale_root(m, n);
    return 0.5 * n * std::log(c) + log_density_generator(m, n, c);
  };
  return log_constant(err_g) - log_constant(err_f);
}

}  // namespace subharmonic
