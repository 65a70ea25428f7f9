#pragma once

#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "subharmonic/error.hpp"

namespace subharmonic {

/// Response vector and predictor matrix as read from disk.
struct RawData {
  Eigen::VectorXd y;
  Eigen::MatrixXd X;
  std::vector<std::string> column_names;

  Eigen::Index n() const { return y.size(); }
  Eigen::Index p() const { return X.cols(); }
};

/// Predictors centered and scaled to x'1 = 0, x'x/n = 1. The response is kept
/// on its original scale.
struct Dataset {
  Eigen::VectorXd y;
  Eigen::MatrixXd X_std;
  Eigen::VectorXd centering_offsets;
  Eigen::VectorXd scale_factors;
  std::vector<std::string> column_names;
  int n = 0;
  int p = 0;
  double y_mean = 0.0;
  double tss_centered = 0.0;  // ||y - ybar 1||^2
  double tss_raw = 0.0;       // ||y||^2
};

namespace detail {

inline void validate_raw(const RawData& raw) {
  if (raw.X.rows() != raw.y.size()) {
    throw Error(ErrorCode::InvalidInput, "X has " + std::to_string(raw.X.rows()) +
                                             " rows but y has " + std::to_string(raw.y.size()));
  }
  if (raw.y.size() < 2) throw Error(ErrorCode::TooFewRows, "need at least 2 observations");
  if (raw.X.cols() < 1) throw Error(ErrorCode::InvalidInput, "need at least one predictor");
  if (!raw.y.allFinite() || !raw.X.allFinite()) {
    throw Error(ErrorCode::InvalidInput, "data contain non-finite values");
  }
  if (!raw.column_names.empty() &&
      raw.column_names.size() != static_cast<std::size_t>(raw.X.cols())) {
    throw Error(ErrorCode::InvalidInput, "column_names length does not match predictor count");
  }
}

}  // namespace detail

/// Centers each predictor and scales it by its population standard deviation
/// (divisor n). Throws TooFewRows when n <= p + 1, ConstantColumn for a
/// zero-variance predictor and RankDeficient when the centered design has rank < p.
inline Dataset standardize(const RawData& raw) {
  detail::validate_raw(raw);
  const auto n = raw.X.rows();
  const auto p = raw.X.cols();
  if (n <= p + 1) {
    throw Error(ErrorCode::TooFewRows,
                "n = " + std::to_string(n) + " must exceed p + 1 = " + std::to_string(p + 1));
  }

  Dataset d;
  d.n = static_cast<int>(n);
  d.p = static_cast<int>(p);
  d.y = raw.y;
  d.column_names = raw.column_names;
  if (d.column_names.empty()) {
    for (Eigen::Index j = 0; j < p; ++j) d.column_names.push_back("x" + std::to_string(j + 1));
  }

  d.centering_offsets = raw.X.colwise().mean().transpose();
  d.X_std = raw.X.rowwise() - d.centering_offsets.transpose();
  d.scale_factors.resize(p);
  for (Eigen::Index j = 0; j < p; ++j) {
    const double ss = d.X_std.col(j).squaredNorm();
    const double raw_scale = raw.X.col(j).cwiseAbs().maxCoeff();
    // Relative test so that columns of tiny magnitude are not flagged.
    if (!(ss > 0.0) || std::sqrt(ss / n) <= 1e-12 * std::max(raw_scale, 1e-300)) {
      throw Error(ErrorCode::ConstantColumn, "predictor '" + d.column_names[j] + "' is constant");
    }
    d.scale_factors(j) = std::sqrt(ss / static_cast<double>(n));
    d.X_std.col(j) /= d.scale_factors(j);
  }

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(d.X_std);
  qr.setThreshold(1e-10);
  if (qr.rank() < p) {
    throw Error(ErrorCode::RankDeficient, "centered design has rank " + std::to_string(qr.rank()) +
                                              " < p = " + std::to_string(p));
  }

  d.y_mean = d.y.mean();
  d.tss_centered = (d.y.array() - d.y_mean).matrix().squaredNorm();
  d.tss_raw = d.y.squaredNorm();
  if (!(d.tss_centered > 0.0)) {
    throw Error(ErrorCode::InvalidInput, "response has zero variance");
  }
  return d;
}

/// Restores predictors to their original scale.
inline Eigen::MatrixXd unstandardize(const Dataset& d) {
  Eigen::MatrixXd X = d.X_std * d.scale_factors.asDiagonal();
  X.rowwise() += d.centering_offsets.transpose();
  return X;
}

}  // namespace subharmonic
