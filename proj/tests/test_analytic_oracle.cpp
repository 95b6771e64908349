#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "lhvbell/analytic_oracle.hpp"
#include "lhvbell/errors.hpp"
#include "lhvbell/monte_carlo.hpp"
#include "support/isserlis.hpp"

using namespace lhvbell;
using std::numbers::pi;

namespace {

constexpr auto kEq3 = Representation::QuadratureDerived;
constexpr auto kEq4 = Representation::WignerIntensity;

// Rate R^i on side A (theta_a) or B (theta_b) as a quadratic form in the
// twelve real components.
test_oracle::Quadratic rate_form(bool side_b, Sign sign, double theta, Representation rep) {
  const double c = std::cos(theta), s = std::sin(theta);
  std::array<double, 6> coeff{};
  const std::size_t first = side_b ? 1 : 0, second = side_b ? 3 : 2;
  if (sign == Sign::plus) {
    coeff[first] = c;
    coeff[second] = s;
  } else {
    coeff[second] = c;
    coeff[first] = -s;
  }
  test_oracle::Quadratic q;
  if (rep == kEq4) {
    test_oracle::add_intensity(q, coeff, 1.0);
    q.offset = -0.5;
  } else {
    test_oracle::add_intensity(q, coeff, 4.0);
    std::array<double, 6> vac{};
    vac[side_b ? 5 : 4] = 1.0;
    test_oracle::add_intensity(q, vac, -4.0);
  }
  return q;
}

double enumerated_joint_moment(double chi, double theta_a, double theta_b, Sign i, Sign j,
                               Representation rep) {
  const auto cov = exact_second_moments(build_covariance(chi)).matrix();
  return test_oracle::joint_moment(rate_form(false, i, theta_a, rep), rate_form(true, j, theta_b, rep),
                               cov);
}

}  // namespace

TEST(OracleMeanRate, Examples) {
  EXPECT_EQ(oracle_mean_rate(0.0, kEq4), 0.0);
  EXPECT_NEAR(oracle_mean_rate(0.2, kEq4), 0.04, 1e-16);
  EXPECT_NEAR(oracle_mean_rate(0.2, kEq3), 0.16, 1e-16);
  EXPECT_EQ(oracle_mean_rate(1.0, kEq3), 4.0);
  EXPECT_THROW(oracle_mean_rate(-1.0, kEq3), InvalidArgument);
}

TEST(OracleMeanRate, MatchesEnumeratedQuadraticForm) {
  for (double chi : {0.0, 0.2, 1.0, 1.7}) {
    for (auto rep : {kEq3, kEq4}) {
      const auto cov = exact_second_moments(build_covariance(chi)).matrix();
      EXPECT_NEAR(test_oracle::mean(rate_form(false, Sign::plus, 0.77, rep), cov),
                  oracle_mean_rate(chi, rep), 1e-14);
    }
  }
}

TEST(OracleJointMoment, Examples) {
  for (Sign i : {Sign::plus, Sign::minus})
    for (Sign j : {Sign::plus, Sign::minus}) EXPECT_EQ(oracle_joint_moment(0.0, 0.4, i, j, kEq4), 0.0);
  EXPECT_NEAR(oracle_joint_moment(0.2, 0.0, Sign::plus, Sign::plus, kEq4), 0.0432, 1e-15);
  EXPECT_NEAR(oracle_joint_moment(0.2, 0.0, Sign::plus, Sign::minus, kEq4), 0.0016, 1e-16);
}

TEST(OracleJointMoment, MatchesBruteForceIsserlisEnumeration) {
  for (double chi : {0.1, 0.2, 0.5, 1.0}) {
    for (double theta_a : {0.0, pi / 8, pi / 4, 3 * pi / 8, 1.3}) {
      const double theta_b = -0.25;
      for (Sign i : {Sign::plus, Sign::minus})
        for (Sign j : {Sign::plus, Sign::minus})
          for (auto rep : {kEq3, kEq4}) {
            const double oracle = oracle_joint_moment(chi, theta_a - theta_b, i, j, rep);
            const double brute = enumerated_joint_moment(chi, theta_a, theta_b, i, j, rep);
            EXPECT_NEAR(oracle, brute, 1e-12 * std::max(1.0, std::abs(brute)))
                << chi << " " << theta_a;
          }
    }
  }
}

TEST(OracleJointMoment, QuadratureDerivedIsExactlySixteenTimes) {
  for (double chi : {0.0, 0.1, 0.2, 0.5, 1.0, 2.0})
    for (double delta : {0.0, 0.3, pi / 4, 2.0})
      for (Sign i : {Sign::plus, Sign::minus})
        for (Sign j : {Sign::plus, Sign::minus})
          EXPECT_EQ(oracle_joint_moment(chi, delta, i, j, kEq3),
                    16.0 * oracle_joint_moment(chi, delta, i, j, kEq4));
}

TEST(OracleJointMoment, AgreesWithMonteCarlo) {
  const CovarianceModel m = build_covariance(0.2);
  for (auto rep : {kEq3, kEq4}) {
    const auto est = estimate_mean(m, RandomStream{123, 0}, 2000000, 32, 0,
                                   [rep](const HiddenVariableSample& s) {
                                     const auto r = count_rates(s, {0.0, 0.0}, rep);
                                     return r.a_plus * r.b_plus;
                                   });
    EXPECT_NEAR(est.mean, oracle_joint_moment(0.2, 0.0, Sign::plus, Sign::plus, rep),
                3.0 * est.std_error);
  }
}

TEST(OracleCorrelationE, Examples) {
  EXPECT_NEAR(oracle_correlation_e(0.2, 0.0), 0.9285714285714285, 1e-15);
  EXPECT_NEAR(oracle_correlation_e(0.7, pi / 4), 0.0, 1e-16);
  EXPECT_EQ(oracle_correlation_e(1.0, 0.0), 0.5);
  EXPECT_THROW(oracle_correlation_e(0.0, 0.0), DegenerateDenominator);
}

TEST(OracleCorrelationE, EqualsRatioOfJointMoments) {
  for (double chi : {0.05, 0.1, 0.2, 0.5, 1.0, 2.0}) {
    for (double delta : {0.0, pi / 8, pi / 4, 3 * pi / 8, 2.5}) {
      for (auto rep : {kEq3, kEq4}) {
        const double pp = oracle_joint_moment(chi, delta, Sign::plus, Sign::plus, rep);
        const double mm = oracle_joint_moment(chi, delta, Sign::minus, Sign::minus, rep);
        const double pm = oracle_joint_moment(chi, delta, Sign::plus, Sign::minus, rep);
        const double mp = oracle_joint_moment(chi, delta, Sign::minus, Sign::plus, rep);
        const double ratio = (pp + mm - pm - mp) / (pp + mm + pm + mp);
        const double e = oracle_correlation_e(chi, delta);
        // |E| <= 1, so relative error is taken against unit scale near the zeros
        // of cos(2 delta).
        EXPECT_NEAR(e, ratio, 1e-14 * std::max(std::abs(e), 1.0)) << chi << " " << delta;
        EXPECT_LE(std::abs(e), 1.0);
      }
    }
  }
}

TEST(OracleBellS, Examples) {
  const auto angles = BellAngles::standard();
  EXPECT_NEAR(oracle_bell_s(1e-3, angles), 2.8284214679089112, 1e-12);
  EXPECT_NEAR(oracle_bell_s(0.2, angles), 2.626396615835748, 1e-12);
  EXPECT_NEAR(oracle_bell_s(1.0, angles), std::numbers::sqrt2, 1e-12);
  EXPECT_NEAR(oracle_bell_s(oracle_classical_crossing_chi(), angles), 2.0, 1e-12);
  EXPECT_NEAR(oracle_classical_crossing_chi(), 0.5110810845293939, 1e-13);
  EXPECT_THROW(oracle_bell_s(0.0, angles), DegenerateDenominator);
}

TEST(OracleNegativeFraction, Examples) {
  EXPECT_NEAR(oracle_negative_fraction(0.0, kEq4), 0.6321205588285577, 1e-15);
  EXPECT_NEAR(oracle_negative_fraction(0.2, kEq4), 0.6038355697179344, 1e-15);
  EXPECT_NEAR(oracle_negative_fraction(2.0, kEq4), 0.10516068318563021, 1e-15);
  EXPECT_EQ(oracle_negative_fraction(0.0, kEq3), 0.5);
}

TEST(OracleNegativeFraction, QuadratureDerivedClosedFormMatchesBruteForce) {
  for (double chi : {0.0, 0.2, 1.0}) {
    const auto est = estimate_mean(build_covariance(chi), RandomStream{55, 0}, 1000000, 32, 0,
                                   [](const HiddenVariableSample& s) {
                                     return count_rates(s, {0.4, 0.0}, kEq3).a_plus < 0 ? 1.0 : 0.0;
                                   });
    EXPECT_NEAR(est.mean, oracle_negative_fraction(chi, kEq3), 4.0 * est.std_error) << chi;
  }
}

TEST(OracleSignCorrelation, BoundedAndMatchesMonteCarlo) {
  for (double chi : {0.2, 1.0}) {
    EXPECT_LE(std::abs(oracle_sign_bell_s(chi, BellAngles::standard())), 2.0);
    const auto est = estimate_mean(build_covariance(chi), RandomStream{56, 0}, 500000, 32, 0,
                                   [](const HiddenVariableSample& s) {
                                     const auto q = quadrature_realities(s, {0.3, 0.0});
                                     return (q.a_plus[0] >= 0) == (q.b_plus[0] >= 0) ? 1.0 : -1.0;
                                   });
    EXPECT_NEAR(est.mean, oracle_sign_correlation(chi, 0.3), 4.0 * est.std_error);
  }
}
