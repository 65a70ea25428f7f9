#pragma once

#include <cmath>
#include <string>
#include <string_view>

#include "subharmonic/core/regression.hpp"
#include "subharmonic/engine/integral.hpp"
#include "subharmonic/error.hpp"

namespace subharmonic {

/// How the intercept enters the prior. Centered integrates it out under a flat
/// prior (R^2, exponent (n-1)/2, null model excluded); Check treats it as one
/// more coefficient (check-R^2, exponent n/2, null model allowed).
enum class Variant { Centered, Check };

/// Hyper-parameters of the prior g^{nu/2-1} (1 + 1/g)^{-k/2} on g.
struct GPriorSpec {
  double nu = 0.5;
  double k = 0.0;
  Variant variant = Variant::Centered;
};

enum class Method { ExactQuadrature, LaplacePhi, LaplaceExactMode, BIC };

constexpr std::string_view method_name(Method m) {
  switch (m) {
    case Method::ExactQuadrature: return "exact";
    case Method::LaplacePhi: return "laplace";
    case Method::LaplaceExactMode: return "laplace-mode";
    case Method::BIC: return "bic";
  }
  return "unknown";
}

inline Method parse_method(std::string_view name) {
  for (Method m : {Method::ExactQuadrature, Method::LaplacePhi, Method::LaplaceExactMode,
                   Method::BIC}) {
    if (method_name(m) == name) return m;
  }
  throw Error(ErrorCode::InvalidConfig, "unknown method '" + std::string(name) + "'");
}

constexpr std::string_view variant_name(Variant v) {
  return v == Variant::Centered ? "centered" : "check";
}

/// Natural log of BF_{gamma:F}.
struct LogBayesFactor {
  double value = 0.0;
  Method method = Method::ExactQuadrature;
};

/// Whether a method is defined at the null model under the given variant.
constexpr bool defined_at_null(Method m, Variant v) {
  return m == Method::BIC || v == Variant::Check;
}

/// True when nu lies in (0, 1), the range where the Bayes factor does not
/// depend on the spherically symmetric error law.
constexpr bool is_distribution_robust(double nu) { return nu > 0.0 && nu < 1.0; }

/// The g-integral of one submodel under `spec`.
inline IntegralSpec integral_spec_for(const FitSummary& fit, int n, const GPriorSpec& spec) {
  if (spec.variant == Variant::Centered) {
    return IntegralSpec::centered(n, fit.q, 1.0 - fit.r2, spec.nu, spec.k);
  }
  return IntegralSpec::check(n, fit.q, 1.0 - fit.r2_check, spec.nu, spec.k);
}

namespace detail {

inline void require_non_null(const FitSummary& fit, const GPriorSpec& spec) {
  if (spec.variant == Variant::Centered && (fit.q == 0 || fit.r2 <= 0.0)) {
    throw Error(ErrorCode::NullModelForbidden,
                "the centered Bayes factor is undefined at the null model (R^2 = 0)");
  }
}

inline void require_imperfect(const FitSummary& fit, const GPriorSpec& spec) {
  const double r2 = spec.variant == Variant::Centered ? fit.r2 : fit.r2_check;
  if (r2 >= 1.0) {
    throw Error(ErrorCode::PerfectFit, "model " + fit.model.label() + " fits the data exactly");
  }
}

}  // namespace detail

/// Exact Bayes factor of gamma against the full model by quadrature of both
/// g-integrals.
inline LogBayesFactor log_bf_exact(const FitSummary& fit_g, const FitSummary& fit_f, int n,
                                   const GPriorSpec& spec, double rel_tol = kDefaultRelTol) {
  detail::require_non_null(fit_g, spec);
  detail::require_imperfect(fit_g, spec);
  detail::require_imperfect(fit_f, spec);
  if (fit_g.model == fit_f.model) return {0.0, Method::ExactQuadrature};
  const double num = log_integral_J(integral_spec_for(fit_g, n, spec), rel_tol);
  const double den = log_integral_J(integral_spec_for(fit_f, n, spec), rel_tol);
  return {num - den, Method::ExactQuadrature};
}

/// BIC Bayes factor {(1-R_g^2)^{-n} n^{-q_g} / ((1-R_F^2)^{-n} n^{-p})}^{1/2}.
/// Defined at the null model.
inline LogBayesFactor log_bf_bic(const FitSummary& fit_g, const FitSummary& fit_f, int n, int p) {
  if (fit_g.r2 >= 1.0 || fit_f.r2 >= 1.0) {
    throw Error(ErrorCode::PerfectFit, "BIC is undefined when R^2 = 1");
  }
  const double log_n = std::log(static_cast<double>(n));
  const double value = 0.5 * (-n * std::log1p(-fit_g.r2) - fit_g.q * log_n +
                              n * std::log1p(-fit_f.r2) + p * log_n);
  return {value, Method::BIC};
}

/// Laplace (phi) approximation: the BIC factor times
/// {phi(q_g - nu, 1 - R_g^2) / phi(p - nu, 1 - R_F^2)}^{1/2}.
inline LogBayesFactor log_bf_laplace(const FitSummary& fit_g, const FitSummary& fit_f, int n, int p,
                                     double nu) {
  for (const FitSummary* f : {&fit_g, &fit_f}) {
    if (!(f->r2 > 0.0 && f->r2 < 1.0)) {
      throw Error(ErrorCode::DomainError,
                  "the phi approximation needs 0 < R^2 < 1 (model " + f->model.label() + ")");
    }
  }
  if (!(nu < fit_g.q) || !(nu < p)) {
    throw Error(ErrorCode::DomainError, "the phi approximation needs nu < q");
  }
  const double correction = 0.5 * (log_phi(fit_g.q - nu, 1.0 - fit_g.r2) -
                                   log_phi(p - nu, 1.0 - fit_f.r2));
  return {correction + log_bf_bic(fit_g, fit_f, n, p).value, Method::LaplacePhi};
}

/// Phi approximation for either variant, as the difference of the two
/// closed-form log integrals. For the centered variant this equals the
/// (fit_g, fit_f, n, p, nu) overload.
inline LogBayesFactor log_bf_laplace(const FitSummary& fit_g, const FitSummary& fit_f, int n,
                                     const GPriorSpec& spec) {
  if (spec.variant == Variant::Centered) {
    return log_bf_laplace(fit_g, fit_f, n, fit_f.q, spec.nu);
  }
  const double num = log_integral_phi(integral_spec_for(fit_g, n, spec));
  const double den = log_integral_phi(integral_spec_for(fit_f, n, spec));
  return {num - den, Method::LaplacePhi};
}

/// Fully exponential Laplace approximation at the exact mode of each integrand.
inline LogBayesFactor log_bf_laplace_mode(const FitSummary& fit_g, const FitSummary& fit_f, int n,
                                          const GPriorSpec& spec) {
  detail::require_non_null(fit_g, spec);
  const double num = log_integral_laplace_exact(integral_spec_for(fit_g, n, spec));
  const double den = log_integral_laplace_exact(integral_spec_for(fit_f, n, spec));
  return {num - den, Method::LaplaceExactMode};
}

/// Dispatches to the requested method; fit_f must be the full model.
inline LogBayesFactor log_bf(Method method, const FitSummary& fit_g, const FitSummary& fit_f,
                             int n, const GPriorSpec& spec, double rel_tol = kDefaultRelTol) {
  switch (method) {
    case Method::ExactQuadrature: return log_bf_exact(fit_g, fit_f, n, spec, rel_tol);
    case Method::LaplacePhi: return log_bf_laplace(fit_g, fit_f, n, spec);
    case Method::LaplaceExactMode: return log_bf_laplace_mode(fit_g, fit_f, n, spec);
    case Method::BIC: return log_bf_bic(fit_g, fit_f, n, fit_f.q);
  }
  throw Error(ErrorCode::InvalidConfig, "unknown method");
}

}  // namespace subharmonic
