#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "subharmonic/core/dataset.hpp"
#include "subharmonic/core/model_id.hpp"
#include "subharmonic/engine/error_model.hpp"
#include "subharmonic/error.hpp"
#include "subharmonic/simulation/rng.hpp"

namespace subharmonic::sim {

/// Correlation between predictors a and b (1-based). Pairs must be disjoint.
struct CorrelatedPair {
  int a = 0;
  int b = 0;
  double rho = 0.0;
};

/// Data-generating design y = intercept + coef * sum_{i in true} x_i + sigma * e
/// with standardized predictors drawn afresh for every replicate.
struct SimDesign {
  int n = 30;
  int p = 16;
  std::vector<CorrelatedPair> correlations;
  ModelId true_mask;  // may be empty: every slope is zero
  double intercept = 1.0;
  double coef = 2.0;
  double sigma = 1.0;  // 0 gives noiseless data
  ErrorModel error = ErrorModel::gaussian();
  int replicates = 200;
  std::uint64_t seed = 1;
};

/// The pairwise correlation structure used for the 16-predictor study.
inline std::vector<CorrelatedPair> benchmark_correlations() {
  return {{1, 2, 0.5}, {3, 4, -0.4}, {5, 6, 0.3}, {7, 8, -0.2}, {9, 10, 0.1}};
}

/// True model of size q_T in the 16-predictor study.
inline ModelId benchmark_true_model(int q_t) {
  switch (q_t) {
    case 4: return ModelId::from_indices({1, 2, 5, 6});
    case 8: return ModelId::from_indices({1, 2, 5, 6, 9, 10, 11, 12});
    case 12: return ModelId::from_indices({1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12});
    case 16: return ModelId::full_model(16);
  }
  throw Error(ErrorCode::InvalidConfig, "q_T must be one of 4, 8, 12, 16");
}

/// n = 30, p = 16 design with the given true size, noise level and error law.
inline SimDesign benchmark_design(int q_t, double sigma, ErrorModel error = ErrorModel::gaussian(),
                                  int replicates = 200, std::uint64_t seed = 1) {
  SimDesign d;
  d.correlations = benchmark_correlations();
  d.true_mask = benchmark_true_model(q_t);
  d.sigma = sigma;
  d.error = std::move(error);
  d.replicates = replicates;
  d.seed = seed;
  return d;
}

/// Six predictors with the first three correlation pairs; predictors 1, 3, 5
/// carry unit slopes.
inline SimDesign consistency_design(int n, ErrorModel error = ErrorModel::gaussian(),
                                    int replicates = 100, std::uint64_t seed = 1) {
  SimDesign d;
  d.n = n;
  d.p = 6;
  d.correlations = {{1, 2, 0.5}, {3, 4, -0.4}, {5, 6, 0.3}};
  d.true_mask = ModelId::from_indices({1, 3, 5});
  d.coef = 1.0;
  d.sigma = 1.0;
  d.error = std::move(error);
  d.replicates = replicates;
  d.seed = seed;
  return d;
}

inline void validate(const SimDesign& d) {
  if (d.p < 1 || d.p > 63) throw Error(ErrorCode::InvalidConfig, "p must lie in [1, 63]");
  if (d.n <= d.p + 1) throw Error(ErrorCode::InvalidConfig, "n must exceed p + 1");
  if (d.replicates < 1) throw Error(ErrorCode::InvalidConfig, "need at least one replicate");
  if (!(d.sigma >= 0.0) || !std::isfinite(d.sigma)) {
    throw Error(ErrorCode::InvalidConfig, "sigma must be finite and non-negative");
  }
  if (!std::isfinite(d.intercept) || !std::isfinite(d.coef)) {
    throw Error(ErrorCode::InvalidConfig, "intercept and coef must be finite");
  }
  if ((d.true_mask.mask() >> d.p) != 0) {
    throw Error(ErrorCode::InvalidConfig, "true model uses predictors beyond p");
  }
  if (d.error.family == ErrorModel::Family::ScaleMixture) {
    throw Error(ErrorCode::UnsupportedFamily, "no sampler for a generic scale mixture");
  }
  std::uint64_t used = 0;
  for (const auto& c : d.correlations) {
    if (c.a < 1 || c.b < 1 || c.a > d.p || c.b > d.p || c.a == c.b) {
      throw Error(ErrorCode::InvalidConfig, "correlated pair out of range");
    }
    if (!(std::abs(c.rho) < 1.0)) throw Error(ErrorCode::InvalidConfig, "correlation must lie in (-1, 1)");
    const std::uint64_t bits = (std::uint64_t{1} << (c.a - 1)) | (std::uint64_t{1} << (c.b - 1));
    if (used & bits) throw Error(ErrorCode::InvalidConfig, "correlated pairs must be disjoint");
    used |= bits;
  }
}

/// Spherical error vector with unit component variance. The t law shares one
/// chi-square mixing draw across all n components.
inline Eigen::VectorXd draw_errors(const ErrorModel& law, int n, Engine& rng) {
  std::normal_distribution<double> normal;
  Eigen::VectorXd e(n);
  for (int i = 0; i < n; ++i) e(i) = normal(rng);
  if (law.family == ErrorModel::Family::StudentT) {
    std::chi_squared_distribution<double> chi2(law.df);
    const double w = chi2(rng);
    e *= std::sqrt((law.df - 2.0) / w);
  }
  return e;
}

/// Replicate `replicate_index` of the design. Predictors are centered and
/// scaled before the response is formed. Bit-identical for equal arguments.
inline RawData generate_replicate(const SimDesign& d, std::uint64_t replicate_index) {
  validate(d);
  Engine rng = replicate_engine(d.seed, replicate_index);
  std::normal_distribution<double> normal;

  Eigen::MatrixXd X(d.n, d.p);
  for (int j = 0; j < d.p; ++j) {
    for (int i = 0; i < d.n; ++i) X(i, j) = normal(rng);
  }
  // Lower Cholesky factor of [[1, rho], [rho, 1]].
  for (const auto& c : d.correlations) {
    const double s = std::sqrt(1.0 - c.rho * c.rho);
    X.col(c.b - 1) = c.rho * X.col(c.a - 1) + s * X.col(c.b - 1);
  }
  for (int j = 0; j < d.p; ++j) {
    X.col(j).array() -= X.col(j).mean();
    X.col(j) /= std::sqrt(X.col(j).squaredNorm() / d.n);
  }

  RawData raw;
  raw.X = std::move(X);
  raw.y = Eigen::VectorXd::Constant(d.n, d.intercept);
  for (int j : d.true_mask.indices()) raw.y += d.coef * raw.X.col(j);
  const Eigen::VectorXd e = draw_errors(d.error, d.n, rng);
  if (d.sigma > 0.0) raw.y += d.sigma * e;
  for (int j = 0; j < d.p; ++j) raw.column_names.push_back("x" + std::to_string(j + 1));
  return raw;
}

}  // namespace subharmonic::sim
