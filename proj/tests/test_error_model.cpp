#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "subharmonic/engine/error_model.hpp"

using namespace subharmonic;

namespace {

// Mean and standard error of ||e||^nu over unit-variance spherical t draws.
std::pair<double, double> monte_carlo_t_moment(double df, int n, double nu, int draws, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> z;
  std::chi_squared_distribution<double> chi2(df);
  double sum = 0.0;
  double sum_sq = 0.0;
  for (int i = 0; i < draws; ++i) {
    double norm_sq = 0.0;
    for (int j = 0; j < n; ++j) {
      const double v = z(rng);
      norm_sq += v * v;
    }
    const double x = std::pow(norm_sq * (df - 2.0) / chi2(rng), 0.5 * nu);
    sum += x;
    sum_sq += x * x;
  }
  const double mean = sum / draws;
  const double var = sum_sq / draws - mean * mean;
  return {mean, std::sqrt(var / draws)};
}

// max over eta of (n/2) log eta + log f(eta S), by golden section in log eta.
double max_log_likelihood(const ErrorModel& m, int n, double S) {
  auto obj = [&](double t) { return 0.5 * n * t + log_density_generator(m, n, std::exp(t) * S); };
  double lo = -30.0;
  double hi = 30.0;
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int i = 0; i < 300; ++i) {
    const double a = hi - g * (hi - lo);
    const double b = lo + g * (hi - lo);
    (obj(a) < obj(b) ? lo : hi) = obj(a) < obj(b) ? a : b;
  }
  return obj(0.5 * (lo + hi));
}

}  // namespace

TEST(Moments, SecondMomentIsExactlyN) {
  for (int n : {1, 7, 30}) {
    EXPECT_EQ(log_norm_moment(ErrorModel::gaussian(), n, 2.0), std::log(double(n)));
    EXPECT_EQ(log_norm_moment(ErrorModel::student_t(3.0), n, 2.0), std::log(double(n)));
    EXPECT_EQ(bf_moment_correction(ErrorModel::student_t(3.0), ErrorModel::gaussian(), n, 2.0), 0.0);
  }
}

TEST(Moments, GaussianClosedForm) {
  // E||e|| for n = 2 is the Rayleigh mean sqrt(pi/2).
  EXPECT_NEAR(std::exp(log_norm_moment(ErrorModel::gaussian(), 2, 1.0)), std::sqrt(M_PI / 2.0), 1e-14);
  // E||e||^4 = n(n+2).
  EXPECT_NEAR(std::exp(log_norm_moment(ErrorModel::gaussian(), 5, 4.0)), 35.0, 1e-11);
}

TEST(Moments, StudentTAgainstMonteCarlo) {
  const auto [mean, se] = monte_carlo_t_moment(5.0, 2, 1.0, 1'000'000, 17);
  const double exact = std::exp(log_norm_moment(ErrorModel::student_t(5.0), 2, 1.0));
  EXPECT_NEAR(exact, 1.1547, 5e-4);
  EXPECT_LT(std::abs(mean - exact), 3.0 * se);
}

TEST(Moments, CorrectionVanishesAsNuShrinks) {
  EXPECT_EQ(bf_moment_correction(ErrorModel::student_t(3.0), ErrorModel::gaussian(), 30, 0.0), 0.0);
  EXPECT_LT(std::abs(bf_moment_correction(ErrorModel::student_t(3.0), ErrorModel::gaussian(), 30, 1e-8)),
            1e-6);
}

TEST(Moments, Divergence) {
  try {
    log_norm_moment(ErrorModel::student_t(3.0), 10, 3.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MomentDiverges);
  }
  EXPECT_THROW(log_norm_moment(ErrorModel::gaussian(), 3, -3.0), Error);
  EXPECT_THROW(ErrorModel::student_t(2.0), Error);
}

TEST(Moments, ScaleMixtureUsesOracle) {
  const auto m = ErrorModel::scale_mixture([](int n, double nu) { return nu * std::log(double(n)); });
  EXPECT_DOUBLE_EQ(log_norm_moment(m, 4, 0.5), 0.5 * std::log(4.0));
  EXPECT_THROW(log_density_generator(m, 4, 1.0), Error);
}

TEST(ScaleRoot, ClosedFormsMatchBisection) {
  for (int n : {5, 30, 1000}) {
    EXPECT_NEAR(bic_scale_root_bisection(ErrorModel::gaussian(), n), n, 1e-10 * n);
    for (double df : {3.0, 5.0, 30.0}) {
      const double closed = n * (df - 2.0) / df;
      EXPECT_NEAR(bic_scale_root_bisection(ErrorModel::student_t(df), n), closed, 1e-10 * closed);
      EXPECT_DOUBLE_EQ(bic_scale_root(ErrorModel::student_t(df), n), closed);
    }
  }
}

TEST(ScaleRoot, CorrectionIsMaximisedLikelihoodRatio) {
  // The maximised likelihood over the precision eta is S^{-n/2} c^{n/2} f(c);
  // S cancels from the ratio between two error laws.
  for (int n : {10, 50}) {
    for (double S : {0.3, 7.0}) {
      const auto t = ErrorModel::student_t(4.0);
      const auto g = ErrorModel::gaussian();
      const double numeric = max_log_likelihood(t, n, S) - max_log_likelihood(g, n, S);
      EXPECT_NEAR(log_bic_correction(t, g, n), numeric, 1e-8);
    }
  }
  EXPECT_EQ(log_bic_correction(ErrorModel::gaussian(), ErrorModel::gaussian(), 20), 0.0);
}

TEST(ErrorModelNames, Stable) {
  EXPECT_EQ(ErrorModel::gaussian().name(), "gaussian");
  EXPECT_EQ(ErrorModel::student_t(3.0).name(), "t3");
  EXPECT_EQ(ErrorModel::student_t(4.5).name(), "t4.5");
}

TEST(ScaleRoot, WorkedValues) {
  EXPECT_DOUBLE_EQ(bic_scale_root(ErrorModel::gaussian(), 30), 30.0);
  EXPECT_NEAR(bic_scale_root(ErrorModel::student_t(3.0), 30), 10.0, 1e-12);
  EXPECT_NEAR(bic_scale_root(ErrorModel::student_t(1e6), 30), 30.0, 1e-3);
}

TEST(ScaleRoot, StudentTCorrectionByHand) {
  // log[c^{n/2} f(c)] for t3 at c = 10 and the Gaussian at c = 30, n = 30.
  const int n = 30;
  const double t_part = 15.0 * std::log(10.0) + std::lgamma(16.5) - std::lgamma(1.5) -
                        15.0 * std::log(M_PI) - 16.5 * std::log1p(10.0);
  const double g_part = 15.0 * std::log(30.0) - 15.0 * std::log(2.0 * M_PI) - 15.0;
  EXPECT_NEAR(log_bic_correction(ErrorModel::student_t(3.0), ErrorModel::gaussian(), n), t_part - g_part,
              1e-10);
}

TEST(Moments, GaussianSecondMomentWorkedValue) {
  EXPECT_DOUBLE_EQ(log_norm_moment(ErrorModel::gaussian(), 2, 2.0), std::log(2.0));
}
