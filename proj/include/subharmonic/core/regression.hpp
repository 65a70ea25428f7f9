#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "subharmonic/core/dataset.hpp"
#include "subharmonic/core/model_id.hpp"
#include "subharmonic/error.hpp"
#include "subharmonic/parallel.hpp"

namespace subharmonic {

/// Least-squares summary of one submodel (always with a fitted intercept).
struct FitSummary {
  ModelId model;
  int q = 0;
  double rss = 0.0;
  double r2 = 0.0;        // 1 - rss / ||y - ybar||^2
  double r2_check = 0.0;  // 1 - rss / ||y||^2
};

/// Largest tolerated condition number of a submodel design.
inline constexpr double kConditionLimit = 1e10;

namespace detail {

inline FitSummary make_summary(const Dataset& d, ModelId model, double rss) {
  rss = std::clamp(rss, 0.0, d.tss_centered);
  FitSummary s;
  s.model = model;
  s.q = model.size();
  s.rss = rss;
  s.r2 = std::clamp(1.0 - rss / d.tss_centered, 0.0, 1.0);
  s.r2_check = std::clamp(1.0 - rss / d.tss_raw, 0.0, 1.0);
  return s;
}

inline void check_model_in_range(const Dataset& d, ModelId model) {
  if (d.p < 64 && (model.mask() >> d.p) != 0) {
    throw Error(ErrorCode::InvalidInput,
                "model " + model.label() + " uses predictors beyond p = " + std::to_string(d.p));
  }
}

}  // namespace detail

/// OLS of y on (1, X_gamma) through a column-pivoted Householder QR of the
/// centered design. The null model fits the intercept only.
inline FitSummary fit_submodel(const Dataset& d, ModelId model) {
  detail::check_model_in_range(d, model);
  if (model.is_null()) return detail::make_summary(d, model, d.tss_centered);

  const auto idx = model.indices();
  const auto q = static_cast<Eigen::Index>(idx.size());
  Eigen::MatrixXd Xg(d.n, q);
  for (Eigen::Index c = 0; c < q; ++c) Xg.col(c) = d.X_std.col(idx[static_cast<std::size_t>(c)]);
  const Eigen::VectorXd yc = d.y.array() - d.y_mean;

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(Xg);
  // Pivoting orders |R_ii| decreasingly, so the ratio of the ends bounds the
  // condition number from below.
  const double r_max = std::abs(qr.matrixR()(0, 0));
  const double r_min = std::abs(qr.matrixR()(q - 1, q - 1));
  if (!(r_min > 0.0) || r_max / r_min > kConditionLimit) {
    throw Error(ErrorCode::NumericalRankLoss,
                "columns of model " + model.label() + " are numerically dependent");
  }
  Eigen::VectorXd qty = yc;
  qty.applyOnTheLeft(qr.householderQ().transpose());
  const double rss = qty.tail(d.n - q).squaredNorm();
  return detail::make_summary(d, model, rss);
}

/// Fits every nonempty submodel (plus the null model when requested) and
/// returns them in ascending mask order. Submodels are visited depth first,
/// each extending its parent's orthonormal basis by one column with
/// re-orthogonalized Gram-Schmidt, so the whole enumeration costs one column
/// update per model.
inline std::vector<FitSummary> fit_all_submodels(const Dataset& d, bool include_null,
                                                 int cap = kDefaultEnumerationCap,
                                                 unsigned workers = worker_count()) {
  if (d.p > cap) {
    throw Error(ErrorCode::TooManyModels,
                "p = " + std::to_string(d.p) + " exceeds enumeration cap " + std::to_string(cap));
  }
  const int p = d.p;
  const int n = d.n;
  const std::uint64_t count = std::uint64_t{1} << p;
  const std::uint64_t offset = include_null ? 0 : 1;
  std::vector<FitSummary> out(count - offset);
  if (include_null) out[0] = detail::make_summary(d, ModelId::null_model(), d.tss_centered);

  const Eigen::VectorXd yc = d.y.array() - d.y_mean;
  const double col_norm = std::sqrt(static_cast<double>(n));

  struct Workspace {
    Eigen::MatrixXd basis;      // orthonormal columns, one per depth
    Eigen::MatrixXd residuals;  // residual of yc after projecting out depth columns
    Eigen::VectorXd v;
  };

  auto visit = [&](auto&& self, Workspace& ws, std::uint64_t mask, int depth, int next) -> void {
    for (int j = next; j < p; ++j) {
      ws.v = d.X_std.col(j);
      for (int pass = 0; pass < 2; ++pass) {
        for (int t = 0; t < depth; ++t) ws.v -= ws.basis.col(t).dot(ws.v) * ws.basis.col(t);
      }
      const double norm = ws.v.norm();
      const std::uint64_t child = mask | (std::uint64_t{1} << j);
      if (!(norm * kConditionLimit > col_norm)) {
        throw Error(ErrorCode::NumericalRankLoss,
                    "columns of model " + ModelId(child).label() + " are numerically dependent");
      }
      ws.basis.col(depth) = ws.v / norm;
      const double coef = ws.basis.col(depth).dot(ws.residuals.col(depth));
      ws.residuals.col(depth + 1) = ws.residuals.col(depth) - coef * ws.basis.col(depth);
      out[child - offset] =
          detail::make_summary(d, ModelId(child), ws.residuals.col(depth + 1).squaredNorm());
      if (j + 1 < p) self(self, ws, child, depth + 1, j + 1);
    }
  };

  // Each top-level branch (smallest predictor in the model) is independent.
  parallel_for(static_cast<std::size_t>(p), [&](std::size_t first) {
    Workspace ws{Eigen::MatrixXd(n, p), Eigen::MatrixXd(n, p + 1), Eigen::VectorXd(n)};
    ws.residuals.col(0) = yc;
    const int j = static_cast<int>(first);
    ws.v = d.X_std.col(j);
    const double norm = ws.v.norm();
    ws.basis.col(0) = ws.v / norm;
    const double coef = ws.basis.col(0).dot(yc);
    ws.residuals.col(1) = yc - coef * ws.basis.col(0);
    const std::uint64_t mask = std::uint64_t{1} << j;
    out[mask - offset] = detail::make_summary(d, ModelId(mask), ws.residuals.col(1).squaredNorm());
    if (j + 1 < p) visit(visit, ws, mask, 1, j + 1);
  }, workers);
  return out;
}

/// Position of `model` in the vector returned by fit_all_submodels.
inline std::size_t fit_index(ModelId model, bool include_null) {
  return static_cast<std::size_t>(model.mask() - (include_null ? 0 : 1));
}

}  // namespace subharmonic
