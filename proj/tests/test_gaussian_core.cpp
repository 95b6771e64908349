#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "lhvbell/errors.hpp"
#include "lhvbell/gaussian_core.hpp"
#include "support/quadrature.hpp"

using namespace lhvbell;
using std::numbers::pi;

namespace {

using Point4 = std::array<double, 4>;  // (Re E, Im E, Re E', Im E')
using Point2 = std::array<double, 2>;

// Principal axes of a symmetric exchange-invariant pair: (x1 +- x2)/sqrt2
// for the real parts and the same for the imaginary parts.
std::array<Point4, 4> pair_axes() {
  const double r = 1.0 / std::sqrt(2.0);
  return {{{r, 0, r, 0}, {r, 0, -r, 0}, {0, r, 0, r}, {0, r, 0, -r}}};
}

std::function<double(const Point4&)> squeezed_block(double chi) {
  const SqueezeParameter p(chi);
  return [p](const Point4& x) {
    return squeezed_wigner(p, {x[0], x[1]}, {x[2], x[3]});
  };
}

double block_integral(double chi, const std::function<double(const Point4&)>& g) {
  return test_oracle::integrate<4>(squeezed_block(chi), g, pair_axes(), 16);
}

double vacuum_integral(const std::function<double(const Point2&)>& g) {
  const std::function<double(const Point2&)> f = [](const Point2& x) {
    return vacuum_wigner({x[0], x[1]});
  };
  return test_oracle::integrate<2>(f, g, {{{1, 0}, {0, 1}}}, 16);
}

double one4(const Point4&) { return 1.0; }

// Empirical covariance of real components i, j (zero-mean model) with the
// standard error of the product mean.
struct Moment {
  double mean;
  double se;
};

double component(const HiddenVariableSample& s, std::size_t c) {
  const Complex z = s.e[c / 2];
  return c % 2 == 0 ? z.real() : z.imag();
}

Moment product_moment(const std::vector<HiddenVariableSample>& batch, std::size_t i,
                      std::size_t j) {
  double sum = 0, sum_sq = 0;
  for (const auto& s : batch) {
    const double p = component(s, i) * component(s, j);
    sum += p;
    sum_sq += p * p;
  }
  const double n = static_cast<double>(batch.size());
  const double mean = sum / n;
  return {mean, std::sqrt((sum_sq / n - mean * mean) / n)};
}

}  // namespace

TEST(BuildCovariance, VacuumAtZeroSqueezing) {
  const CovarianceModel m = build_covariance(0.0);
  EXPECT_EQ(m.var_sq, 0.25);
  EXPECT_EQ(m.cov_x, 0.0);
  EXPECT_EQ(m.cov_y, 0.0);
  EXPECT_EQ(m.var_vac, 0.25);
}

TEST(BuildCovariance, FrozenValuesMatchQuadratureOracle) {
  // chi -> {var_sq, cov_x}; frozen from the quadrature oracle below.
  const std::array<std::array<double, 3>, 3> cases{{
      {0.2, 0.27, 0.10198039027185571},
      {1.0, 0.75, 0.70710678118654757},
      {2.0, 2.25, 2.2360679774997898},
  }};
  for (const auto& [chi, var_sq, cov] : cases) {
    const CovarianceModel m = build_covariance(chi);
    EXPECT_NEAR(m.var_sq, var_sq, 1e-15) << chi;
    EXPECT_NEAR(m.cov_x, cov, 1e-15) << chi;
    EXPECT_NEAR(m.cov_y, -cov, 1e-15) << chi;
    EXPECT_EQ(m.var_vac, 0.25);

    const double norm = block_integral(chi, one4);
    auto moment = [&](std::size_t i, std::size_t j) {
      return block_integral(chi, [i, j](const Point4& x) { return x[i] * x[j]; }) / norm;
    };
    EXPECT_NEAR(moment(0, 0), var_sq, 1e-9) << chi;
    EXPECT_NEAR(moment(1, 1), var_sq, 1e-9) << chi;
    EXPECT_NEAR(moment(0, 2), cov, 1e-9) << chi;
    EXPECT_NEAR(moment(1, 3), -cov, 1e-9) << chi;
    EXPECT_NEAR(moment(0, 1), 0.0, 1e-12) << chi;
    EXPECT_NEAR(moment(0, 3), 0.0, 1e-12) << chi;
  }
}

TEST(BuildCovariance, BlocksArePositiveDefinite) {
  for (double chi : {0.0, 0.1, 0.5, 1.0, 2.0, 10.0}) {
    const CovarianceModel m = build_covariance(chi);
    // var_sq^2 - cov^2 = 1/16 for every chi
    EXPECT_NEAR(m.var_sq * m.var_sq - m.cov_x * m.cov_x, 1.0 / 16.0, 1e-12 * m.var_sq * m.var_sq);
    EXPECT_GT(m.var_sq * m.var_sq - m.cov_y * m.cov_y, 0.0);
  }
}

TEST(BuildCovariance, RejectsInvalidChi) {
  EXPECT_THROW(build_covariance(-0.1), InvalidArgument);
  EXPECT_THROW(build_covariance(std::numeric_limits<double>::quiet_NaN()), InvalidArgument);
  EXPECT_THROW(build_covariance(std::numeric_limits<double>::infinity()), InvalidArgument);
}

TEST(Density, OriginValue) {
  const double expected = 64.0 / std::pow(pi, 6);
  for (double chi : {0.0, 0.2, 1.0}) {
    EXPECT_NEAR(density(build_covariance(chi), HiddenVariableSample{}), expected, 1e-15) << chi;
  }
}

TEST(Density, VacuumCaseIsProductOfSixVacuumFactors) {
  const CovarianceModel m = build_covariance(0.0);
  HiddenVariableSample s;
  s.e = {Complex{0.1, -0.3}, {0.4, 0.2}, {-0.5, 0.1}, {0.0, 0.7}, {0.3, 0.3}, {-0.2, 0.6}};
  double product = 1.0;
  for (const Complex& z : s.e) product *= vacuum_wigner(z);
  EXPECT_NEAR(density(m, s), product, 1e-14 * product);
}

TEST(Density, FactorizesAcrossBlocks) {
  // Changing only E_5 changes log density by exactly the vacuum-factor term,
  // whatever the other variables are.
  const CovarianceModel m = build_covariance(0.7);
  const RandomStream stream{11, 0};
  for (std::uint64_t i = 0; i < 100; ++i) {
    HiddenVariableSample s = sample_at(m, stream, i);
    HiddenVariableSample t = s;
    t.e[4] = {0.25, -0.5};
    const double lhs = log_density(m, t) - log_density(m, s);
    const double rhs = std::log(vacuum_wigner(t.e[4])) - std::log(vacuum_wigner(s.e[4]));
    EXPECT_NEAR(lhs, rhs, 1e-12);
    t = s;
    t.e[2] = {1.0, 0.5};
    const SqueezeParameter chi(0.7);
    EXPECT_NEAR(log_density(m, t) - log_density(m, s),
                std::log(squeezed_wigner(chi, t.e[2], t.e[3])) -
                    std::log(squeezed_wigner(chi, s.e[2], s.e[3])),
                1e-12);
  }
}

TEST(Density, PositiveOnRandomPoints) {
  const RandomStream stream{99, 3};
  for (double chi : {0.0, 0.2, 1.0, 2.0}) {
    const CovarianceModel m = build_covariance(chi);
    for (std::uint64_t i = 0; i < 20000; ++i) {
      HiddenVariableSample s;
      for (std::size_t k = 0; k < 6; ++k) {
        const auto w = stream.words(6 * i + k);
        s.e[k] = {4.0 * (uniform_closed_open(w[0]) - 0.5), 4.0 * (uniform_closed_open(w[1]) - 0.5)};
      }
      // Far in the tails at large chi the product underflows double range;
      // the log form stays finite there.
      ASSERT_TRUE(std::isfinite(log_density(m, s)));
      if (chi <= 1.0) ASSERT_GT(density(m, s), 0.0);
    }
  }
}

TEST(Density, RejectsNonFiniteSample) {
  HiddenVariableSample s;
  s.e[3] = {std::numeric_limits<double>::infinity(), 0.0};
  EXPECT_THROW(density(build_covariance(0.5), s), InvalidArgument);
}

TEST(Density, NormalizedPerBlock) {
  const double vac = vacuum_integral([](const Point2&) { return 1.0; });
  EXPECT_NEAR(vac, 1.0, 1e-10);
  for (double chi : {0.0, 0.5, 1.0}) {
    const double block = block_integral(chi, one4);
    EXPECT_NEAR(block, 1.0, 1e-8) << chi;
    EXPECT_NEAR(block * block * vac * vac, 1.0, 1e-6) << chi;
  }
}

TEST(ExactSecondMoments, Examples) {
  const auto zero = exact_second_moments(build_covariance(0.0));
  EXPECT_DOUBLE_EQ(zero.intensity(0), 0.5);
  EXPECT_EQ(zero.product_moment(0, 1), Complex(0.0, 0.0));

  const auto small = exact_second_moments(build_covariance(0.2));
  EXPECT_NEAR(small.intensity(0), 0.54, 1e-15);
  EXPECT_NEAR(small.product_moment(0, 1).real(), 0.20396078054371142, 1e-15);
  EXPECT_EQ(small.product_moment(0, 1).imag(), 0.0);
  EXPECT_EQ(small.conjugate_moment(0, 1), Complex(0.0, 0.0));
  EXPECT_EQ(small.product_moment(0, 0), Complex(0.0, 0.0));
  EXPECT_DOUBLE_EQ(small.intensity(4), 0.5);
  EXPECT_DOUBLE_EQ(small.intensity(5), 0.5);

  const auto one = exact_second_moments(build_covariance(1.0));
  EXPECT_NEAR(one.product_moment(0, 1).real(), std::numbers::sqrt2, 1e-15);
  EXPECT_NEAR(one.product_moment(2, 3).real(), std::numbers::sqrt2, 1e-15);
}

TEST(ExactSecondMoments, OnlyListedPairsAreCorrelated) {
  const auto t = exact_second_moments(build_covariance(0.8));
  for (std::size_t i = 0; i < kRealComponents; ++i) {
    for (std::size_t j = 0; j < kRealComponents; ++j) {
      const bool same = i == j;
      const bool paired = (i / 4 == j / 4) && i / 4 < 2 && (i % 2 == j % 2) && (i != j);
      if (!same && !paired) EXPECT_EQ(t.covariance(i, j), 0.0) << i << "," << j;
      EXPECT_EQ(t.covariance(i, j), t.covariance(j, i));
    }
  }
}

TEST(SampleBatch, VacuumStatistics) {
  const auto batch = sample_batch(build_covariance(0.0), RandomStream{2718, 0}, 100000);
  for (std::size_t i = 0; i < kRealComponents; ++i) {
    for (std::size_t j = i; j < kRealComponents; ++j) {
      const Moment m = product_moment(batch, i, j);
      EXPECT_NEAR(m.mean, i == j ? 0.25 : 0.0, 5.0 * m.se) << i << "," << j;
    }
  }
}

TEST(SampleBatch, SqueezedCovarianceMatchesExactTable) {
  for (double chi : {1.0, 0.2}) {
    const CovarianceModel model = build_covariance(chi);
    const auto table = exact_second_moments(model);
    const auto batch = sample_batch(model, RandomStream{31415, 1}, 1000000);
    for (std::size_t i = 0; i < kRealComponents; ++i) {
      for (std::size_t j = i; j < kRealComponents; ++j) {
        const Moment m = product_moment(batch, i, j);
        EXPECT_NEAR(m.mean, table.covariance(i, j), 5.0 * m.se) << chi << ": " << i << "," << j;
      }
    }
  }
}

TEST(SampleBatch, DeterministicAndIndexAddressable) {
  const CovarianceModel model = build_covariance(0.4);
  const RandomStream stream{5, 9};
  const auto first = sample_batch(model, stream, 1000);
  const auto second = sample_batch(model, stream, 1000);
  EXPECT_EQ(first, second);
  EXPECT_EQ(sample_at(model, stream, 537), first[537]);
  std::vector<HiddenVariableSample> tail(10);
  sample_into(model, stream, 990, tail);
  EXPECT_TRUE(std::equal(tail.begin(), tail.end(), first.begin() + 990));
  EXPECT_NE(sample_batch(model, RandomStream{5, 10}, 1).front(), first.front());
}

TEST(SampleBatch, SizeErrors) {
  const CovarianceModel model = build_covariance(0.1);
  EXPECT_THROW(sample_batch(model, RandomStream{}, 0), InvalidArgument);
  EXPECT_THROW(sample_batch(model, RandomStream{}, std::numeric_limits<std::size_t>::max()),
               CapacityError);
}
