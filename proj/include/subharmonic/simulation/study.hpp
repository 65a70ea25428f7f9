#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "subharmonic/core/dataset.hpp"
#include "subharmonic/core/regression.hpp"
#include "subharmonic/engine/bayes_factor.hpp"
#include "subharmonic/parallel.hpp"
#include "subharmonic/selection/posterior.hpp"
#include "subharmonic/selection/select.hpp"
#include "subharmonic/simulation/design.hpp"

namespace subharmonic::sim {

/// One scoring rule: a method and, unless it is BIC, a value of nu.
struct StudyMethod {
  Method method = Method::LaplacePhi;
  double nu = 0.5;

  std::string label() const {
    if (method == Method::BIC) return "bic";
    std::string v = std::to_string(nu);
    v.erase(v.find_last_not_of('0') + 1);
    if (v.back() == '.') v.pop_back();
    return std::string(method_name(method)) + "(" + v + ")";
  }
};

/// Expands methods x nus, with BIC appearing once whatever the nus.
inline std::vector<StudyMethod> expand_methods(std::span<const Method> methods,
                                               std::span<const double> nus) {
  std::vector<StudyMethod> out;
  for (Method m : methods) {
    if (m == Method::BIC) {
      out.push_back({m, 0.0});
      continue;
    }
    for (double nu : nus) out.push_back({m, nu});
  }
  if (out.empty()) throw Error(ErrorCode::InvalidConfig, "no scoring rules requested");
  return out;
}

struct StudyOptions {
  Variant variant = Variant::Centered;
  double k = 0.0;
  ModelPrior::Kind prior = ModelPrior::Kind::UniformNonNull;
  double rel_tol = kDefaultRelTol;
  bool keep_top3 = false;
  unsigned workers = worker_count();
};

struct FrequencyEntry {
  StudyMethod rule;
  int rank1 = 0;  // replicates with the true model ranked first
  int top3 = 0;   // replicates with the true model in the first three
  std::vector<std::vector<ModelId>> top3_models;  // per replicate, when kept

  double freq_rank1(int replicates) const { return static_cast<double>(rank1) / replicates; }
  double freq_top3(int replicates) const { return static_cast<double>(top3) / replicates; }
};

struct FrequencyResult {
  int replicates = 0;
  ModelId true_mask;
  std::vector<FrequencyEntry> entries;

  const FrequencyEntry& entry(const std::string& label) const {
    for (const auto& e : entries) {
      if (e.rule.label() == label) return e;
    }
    throw Error(ErrorCode::InvalidConfig, "no study entry '" + label + "'");
  }
};

namespace detail {

struct ReplicateOutcome {
  std::vector<int> rank;  // 1-based rank of the true model per rule
  std::vector<std::vector<ModelId>> top3;
};

/// Number of models that outrank index `target` under the given scores;
/// equal scores are broken by ascending mask.
inline int models_ahead(std::span<const double> score, std::span<const FitSummary> fits,
                        std::size_t target) {
  int ahead = 0;
  const double t = score[target];
  for (std::size_t i = 0; i < score.size(); ++i) {
    if (score[i] > t || (score[i] == t && i != target && fits[i].model < fits[target].model)) ++ahead;
  }
  return ahead;
}

inline ReplicateOutcome score_replicate(const SimDesign& design, std::span<const StudyMethod> rules,
                                        const StudyOptions& opt, std::uint64_t index) {
  const Dataset data = standardize(generate_replicate(design, index));
  const bool include_null = opt.prior == ModelPrior::Kind::UniformAll;
  const auto fits = fit_all_submodels(data, include_null, kDefaultEnumerationCap, 1);
  std::vector<ModelId> models;
  models.reserve(fits.size());
  for (const auto& f : fits) models.push_back(f.model);
  const auto log_prior = log_prior_weights(models, ModelPrior{opt.prior, {}});
  const std::size_t target = fit_index(design.true_mask, include_null);

  ReplicateOutcome out;
  for (const auto& rule : rules) {
    const GPriorSpec spec{rule.nu, opt.k, opt.variant};
    auto score = log_bfs_against_full(rule.method, fits, data.n, spec, opt.rel_tol, 1);
    for (std::size_t i = 0; i < score.size(); ++i) {
      score[i] = std::isinf(log_prior[i]) ? -std::numeric_limits<double>::infinity()
                                          : score[i] + log_prior[i];
    }
    out.rank.push_back(1 + models_ahead(score, fits, target));
    if (opt.keep_top3) {
      std::vector<std::size_t> order(score.size());
      std::iota(order.begin(), order.end(), std::size_t{0});
      const auto k = std::min<std::size_t>(3, order.size());
      std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end(),
                        [&](std::size_t a, std::size_t b) {
                          if (score[a] != score[b]) return score[a] > score[b];
                          return fits[a].model < fits[b].model;
                        });
      std::vector<ModelId> best;
      for (std::size_t i = 0; i < k; ++i) best.push_back(fits[order[i]].model);
      out.top3.push_back(std::move(best));
    }
  }
  return out;
}

}  // namespace detail

/// Runs every replicate of the design, scores all submodels with each rule
/// and counts how often the true model ranks first and within the first three.
inline FrequencyResult run_frequency_study(const SimDesign& design,
                                           std::span<const StudyMethod> rules,
                                           const StudyOptions& opt = {}) {
  validate(design);
  if (rules.empty()) throw Error(ErrorCode::InvalidConfig, "no scoring rules requested");
  if (design.p > kDefaultEnumerationCap) {
    throw Error(ErrorCode::TooManyModels, "p exceeds the enumeration cap");
  }
  if (design.true_mask.is_null() && opt.prior != ModelPrior::Kind::UniformAll) {
    throw Error(ErrorCode::InvalidConfig, "a null true model needs a prior that admits it");
  }
  if (opt.prior == ModelPrior::Kind::Custom) {
    throw Error(ErrorCode::InvalidConfig, "studies support uniform priors only");
  }
  if (opt.prior == ModelPrior::Kind::UniformAll) {
    for (const auto& r : rules) {
      if (!defined_at_null(r.method, opt.variant)) {
        throw Error(ErrorCode::InvalidConfig,
                    "rule " + r.label() + " is undefined at the null model under this variant");
      }
    }
  }

  std::vector<detail::ReplicateOutcome> outcomes(static_cast<std::size_t>(design.replicates));
  parallel_for(outcomes.size(), [&](std::size_t i) {
    outcomes[i] = detail::score_replicate(design, rules, opt, i);
  }, opt.workers);

  FrequencyResult result;
  result.replicates = design.replicates;
  result.true_mask = design.true_mask;
  for (std::size_t r = 0; r < rules.size(); ++r) {
    FrequencyEntry e;
    e.rule = rules[r];
    for (const auto& o : outcomes) {
      e.rank1 += o.rank[r] == 1;
      e.top3 += o.rank[r] <= 3;
      if (opt.keep_top3) e.top3_models.push_back(o.top3[r]);
    }
    result.entries.push_back(std::move(e));
  }
  return result;
}

struct SweepPoint {
  int n = 0;
  FrequencyResult result;
};

/// Recovery rate of the true model as n grows with the rest of the design fixed.
inline std::vector<SweepPoint> run_consistency_sweep(const SimDesign& base,
                                                     std::span<const int> n_grid,
                                                     std::span<const StudyMethod> rules,
                                                     const StudyOptions& opt = {}) {
  if (n_grid.empty()) throw Error(ErrorCode::InvalidConfig, "empty n grid");
  std::vector<SweepPoint> out;
  for (int n : n_grid) {
    SimDesign d = base;
    d.n = n;
    out.push_back({n, run_frequency_study(d, rules, opt)});
  }
  return out;
}

}  // namespace subharmonic::sim
