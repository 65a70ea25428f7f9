#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "subharmonic/core/model_id.hpp"
#include "subharmonic/error.hpp"

namespace subharmonic {

/// Prior probabilities over submodels.
struct ModelPrior {
  enum class Kind { UniformNonNull, UniformAll, Custom };

  Kind kind = Kind::UniformNonNull;
  std::map<ModelId, double> weights;  // Custom only

  static ModelPrior uniform_non_null() { return {}; }
  static ModelPrior uniform_all() { return {Kind::UniformAll, {}}; }
  static ModelPrior custom(std::map<ModelId, double> w) { return {Kind::Custom, std::move(w)}; }

  bool admits_null() const {
    if (kind == Kind::UniformAll) return true;
    if (kind == Kind::Custom) {
      auto it = weights.find(ModelId::null_model());
      return it != weights.end() && it->second > 0.0;
    }
    return false;
  }
};

constexpr std::string_view prior_name(ModelPrior::Kind k) {
  switch (k) {
    case ModelPrior::Kind::UniformNonNull: return "uniform-nonnull";
    case ModelPrior::Kind::UniformAll: return "uniform-all";
    case ModelPrior::Kind::Custom: return "custom";
  }
  return "unknown";
}

/// Log prior weight per model, aligned with `models`. Weights of custom priors
/// must be non-negative and sum to one over `models`.
inline std::vector<double> log_prior_weights(std::span<const ModelId> models,
                                             const ModelPrior& prior) {
  if (models.empty()) throw Error(ErrorCode::EmptyModelSet, "no models to weigh");
  std::vector<double> out(models.size());
  const double neg_inf = -std::numeric_limits<double>::infinity();
  switch (prior.kind) {
    case ModelPrior::Kind::UniformAll:
      std::fill(out.begin(), out.end(), -std::log(static_cast<double>(models.size())));
      break;
    case ModelPrior::Kind::UniformNonNull: {
      const auto admissible = std::count_if(models.begin(), models.end(),
                                            [](ModelId m) { return !m.is_null(); });
      if (admissible == 0) throw Error(ErrorCode::EmptyModelSet, "no non-null models");
      for (std::size_t i = 0; i < models.size(); ++i) {
        out[i] = models[i].is_null() ? neg_inf : -std::log(static_cast<double>(admissible));
      }
      break;
    }
    case ModelPrior::Kind::Custom: {
      if (prior.weights.size() != models.size()) {
        throw Error(ErrorCode::InvalidPrior, "custom prior does not cover exactly the model set");
      }
      double total = 0.0;
      for (std::size_t i = 0; i < models.size(); ++i) {
        auto it = prior.weights.find(models[i]);
        if (it == prior.weights.end()) {
          throw Error(ErrorCode::InvalidPrior, "no prior weight for model " + models[i].label());
        }
        if (!(it->second >= 0.0)) {
          throw Error(ErrorCode::NegativeWeight, "negative prior weight for model " + models[i].label());
        }
        total += it->second;
        out[i] = it->second > 0.0 ? std::log(it->second) : neg_inf;
      }
      if (std::abs(total - 1.0) > 1e-9) {
        throw Error(ErrorCode::InvalidPrior, "custom prior weights sum to " + std::to_string(total));
      }
      break;
    }
  }
  return out;
}

/// Normalises log prior + log BF with max subtraction. Entries with zero prior
/// weight get posterior 0 whatever their score.
inline std::vector<double> posterior_from_log_scores(std::span<const double> log_bf,
                                                     std::span<const double> log_prior) {
  if (log_bf.empty()) throw Error(ErrorCode::EmptyModelSet, "no models");
  std::vector<double> score(log_bf.size());
  double top = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < log_bf.size(); ++i) {
    score[i] = std::isinf(log_prior[i]) && log_prior[i] < 0
                   ? -std::numeric_limits<double>::infinity()
                   : log_bf[i] + log_prior[i];
    top = std::max(top, score[i]);
  }
  if (!std::isfinite(top)) throw Error(ErrorCode::EmptyModelSet, "no model has positive prior mass");
  double sum = 0.0;
  for (double& s : score) {
    s = std::exp(s - top);
    sum += s;
  }
  for (double& s : score) s /= sum;
  return score;
}

/// Pr(M_gamma | y) = pi_gamma BF_gamma / sum_delta pi_delta BF_delta. All Bayes
/// factors must share a base model.
inline std::map<ModelId, double> posterior_probabilities(const std::map<ModelId, double>& log_bfs,
                                                         const ModelPrior& prior) {
  if (log_bfs.empty()) throw Error(ErrorCode::EmptyModelSet, "no models");
  std::vector<ModelId> models;
  std::vector<double> values;
  for (const auto& [m, v] : log_bfs) {
    models.push_back(m);
    values.push_back(v);
  }
  const auto lp = log_prior_weights(models, prior);
  const auto post = posterior_from_log_scores(values, lp);
  std::map<ModelId, double> out;
  for (std::size_t i = 0; i < models.size(); ++i) out.emplace(models[i], post[i]);
  return out;
}

}  // namespace subharmonic
