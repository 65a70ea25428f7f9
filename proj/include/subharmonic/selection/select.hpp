#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <span>
#include <vector>

#include "subharmonic/core/dataset.hpp"
#include "subharmonic/core/model_id.hpp"
#include "subharmonic/core/regression.hpp"
#include "subharmonic/engine/bayes_factor.hpp"
#include "subharmonic/parallel.hpp"
#include "subharmonic/selection/posterior.hpp"

namespace subharmonic {

/// Posteriors closer than this (relative to the larger one) are reported as ties.
inline constexpr double kTieTolerance = 1e-6;

struct ModelRecord {
  ModelId model;
  int q = 0;
  double r2 = 0.0;
  double r2_check = 0.0;
};

struct MethodResult {
  Method method = Method::LaplacePhi;
  std::vector<double> log_bf;     // against the full model, aligned with records
  std::vector<double> posterior;  // aligned with records
  std::vector<std::size_t> ranking;  // record indices, best first
  std::vector<bool> tie_with_next;   // per ranking position
};

struct SelectionReport {
  int n = 0;
  int p = 0;
  GPriorSpec spec;
  ModelPrior::Kind prior = ModelPrior::Kind::UniformNonNull;
  double rel_tol = kDefaultRelTol;
  std::vector<ModelRecord> records;  // ascending mask order
  std::vector<MethodResult> results;

  const MethodResult& result(Method m) const {
    for (const auto& r : results) {
      if (r.method == m) return r;
    }
    throw Error(ErrorCode::InvalidConfig, "method not in report: " + std::string(method_name(m)));
  }

  /// Best k models of a method as (model, posterior) pairs.
  std::vector<std::pair<ModelId, double>> top(Method m, std::size_t k) const {
    const auto& res = result(m);
    std::vector<std::pair<ModelId, double>> out;
    for (std::size_t i = 0; i < std::min(k, res.ranking.size()); ++i) {
      const auto idx = res.ranking[i];
      out.emplace_back(records[idx].model, res.posterior[idx]);
    }
    return out;
  }
};

struct SelectOptions {
  double rel_tol = kDefaultRelTol;
  int cap = kDefaultEnumerationCap;
};

/// Orders record indices by log score (descending), breaking ties by
/// ascending model mask.
inline std::vector<std::size_t> rank_by_score(std::span<const double> scores,
                                              std::span<const ModelRecord> records) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return records[a].model < records[b].model;
  });
  return order;
}

/// log BF of every fitted model against the last entry of `fits` (the full
/// model). Models where the method is undefined (null model, centered
/// variant) get -inf; they must carry zero prior mass.
inline std::vector<double> log_bfs_against_full(Method method, std::span<const FitSummary> fits,
                                                int n, const GPriorSpec& spec, double rel_tol,
                                                unsigned workers = worker_count()) {
  const FitSummary& full = fits.back();
  std::vector<double> out(fits.size());
  auto one = [&](std::size_t i) {
    if (fits[i].model.is_null() && !defined_at_null(method, spec.variant)) {
      out[i] = -std::numeric_limits<double>::infinity();
    } else {
      out[i] = log_bf(method, fits[i], full, n, spec, rel_tol).value;
    }
  };
  if (method == Method::ExactQuadrature) {
    parallel_for(fits.size(), one, workers);
  } else {
    for (std::size_t i = 0; i < fits.size(); ++i) one(i);
  }
  return out;
}

namespace detail {

inline void check_method_prior(std::span<const Method> methods, const GPriorSpec& spec,
                               const ModelPrior& prior) {
  if (methods.empty()) throw Error(ErrorCode::InvalidConfig, "no methods requested");
  if (!prior.admits_null()) return;
  for (Method m : methods) {
    if (!defined_at_null(m, spec.variant)) {
      throw Error(ErrorCode::InvalidConfig,
                  "a prior with mass on the null model needs the check variant or BIC; method '" +
                      std::string(method_name(m)) + "' is undefined there");
    }
  }
}

inline std::vector<bool> flag_ties(std::span<const std::size_t> ranking,
                                   std::span<const double> posterior) {
  std::vector<bool> ties(ranking.size(), false);
  for (std::size_t i = 0; i + 1 < ranking.size(); ++i) {
    const double a = posterior[ranking[i]];
    const double b = posterior[ranking[i + 1]];
    ties[i] = a > 0.0 && std::abs(a - b) <= kTieTolerance * std::max(a, b);
  }
  return ties;
}

}  // namespace detail

/// Fits every admissible submodel, scores it with each requested method
/// against the full model and turns the scores into posterior probabilities
/// and rankings.
inline SelectionReport select(const Dataset& data, const GPriorSpec& spec,
                              std::span<const Method> methods, const ModelPrior& prior,
                              const SelectOptions& options = {}) {
  detail::check_method_prior(methods, spec, prior);
  const bool include_null =
      prior.kind == ModelPrior::Kind::UniformAll ||
      (prior.kind == ModelPrior::Kind::Custom && prior.weights.contains(ModelId::null_model()));
  const auto fits = fit_all_submodels(data, include_null, options.cap);

  SelectionReport report;
  report.n = data.n;
  report.p = data.p;
  report.spec = spec;
  report.prior = prior.kind;
  report.rel_tol = options.rel_tol;
  report.records.reserve(fits.size());
  std::vector<ModelId> models;
  models.reserve(fits.size());
  for (const auto& f : fits) {
    report.records.push_back({f.model, f.q, f.r2, f.r2_check});
    models.push_back(f.model);
  }
  const auto log_prior = log_prior_weights(models, prior);

  for (Method m : methods) {
    MethodResult res;
    res.method = m;
    res.log_bf = log_bfs_against_full(m, fits, data.n, spec, options.rel_tol);
    res.posterior = posterior_from_log_scores(res.log_bf, log_prior);
    std::vector<double> scores(fits.size());
    for (std::size_t i = 0; i < fits.size(); ++i) {
      scores[i] = res.posterior[i] > 0.0 ? res.log_bf[i] + log_prior[i]
                                         : -std::numeric_limits<double>::infinity();
    }
    res.ranking = rank_by_score(scores, report.records);
    res.tie_with_next = detail::flag_ties(res.ranking, res.posterior);
    report.results.push_back(std::move(res));
  }
  return report;
}

}  // namespace subharmonic
