#pragma once

#include <random>
#include <string>

#include <Eigen/Dense>

#include "subharmonic/core/dataset.hpp"
#include "subharmonic/io/csv.hpp"

namespace testing_support {

inline std::string data_path(const std::string& file) {
  return std::string(SUBHARMONIC_DATA_DIR) + "/" + file;
}

inline subharmonic::RawData hald() { return subharmonic::io::load_csv(data_path("hald.csv")); }
inline subharmonic::RawData uscrime() { return subharmonic::io::load_csv(data_path("uscrime.csv")); }

/// Gaussian design with a few active slopes; deterministic in seed.
inline subharmonic::RawData random_data(int n, int p, unsigned seed, double noise = 1.0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> z;
  subharmonic::RawData raw;
  raw.X.resize(n, p);
  raw.y.resize(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < p; ++j) raw.X(i, j) = z(rng) + 0.3 * j;
  }
  for (int i = 0; i < n; ++i) {
    raw.y(i) = 0.5 + noise * z(rng);
    for (int j = 0; j < p; j += 2) raw.y(i) += (1.0 - 0.2 * j) * raw.X(i, j);
  }
  return raw;
}

}  // namespace testing_support
