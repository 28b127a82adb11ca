#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "unseen/error.hpp"
#include "unseen/smoothing.hpp"

using unseen::SmoothingDistribution;

namespace {

double binomial_pmf(unsigned k, double q, unsigned l) {
  double c = 1.0;
  for (unsigned j = 1; j <= l; ++j) c = c * (k - l + j) / j;
  return c * std::pow(q, l) * std::pow(1.0 - q, k - l);
}

double j0_series(double x) {
  double sum = 0.0;
  double term = 1.0;
  for (int j = 0; j < 200; ++j) {
    sum += term;
    term *= -(x * x / 4.0) / ((j + 1.0) * (j + 1.0));
  }
  return sum;
}

}  // namespace

TEST(Smoothing, BinomialTail) {
  const auto law = SmoothingDistribution::binomial(2, 0.5);
  const double brute = binomial_pmf(2, 0.5, 1) + binomial_pmf(2, 0.5, 2);
  EXPECT_DOUBLE_EQ(law.tail(1), brute);
  EXPECT_DOUBLE_EQ(law.tail(1), 0.75);
  EXPECT_EQ(law.tail(3), 0.0);
}

TEST(Smoothing, TailAtZeroIsOne) {
  for (const auto& law :
       {SmoothingDistribution::poisson(3.0), SmoothingDistribution::binomial(7, 0.2),
        SmoothingDistribution::deterministic(4), SmoothingDistribution::infinite()}) {
    EXPECT_EQ(law.tail(0), 1.0);
  }
}

TEST(Smoothing, ZeroRatePoissonIsDeterministicZero) {
  const auto law = SmoothingDistribution::poisson(0.0);
  EXPECT_EQ(law, SmoothingDistribution::deterministic(0));
  EXPECT_EQ(law.tail(1), 0.0);
}

TEST(Smoothing, PoissonTailsMatchPmfSums) {
  const auto law = SmoothingDistribution::poisson(2.5);
  double below = 0.0;
  double term = std::exp(-2.5);
  for (unsigned i = 0; i < 25; ++i) {
    EXPECT_NEAR(law.tail(i), 1.0 - below, 1e-14) << "i=" << i;
    below += term;
    term *= 2.5 / (i + 1.0);
  }
  const auto tails = law.tails(10);
  ASSERT_EQ(tails.size(), 11u);
  for (unsigned i = 0; i <= 10; ++i) EXPECT_DOUBLE_EQ(tails[i], law.tail(i));
}

TEST(Smoothing, ExpectedPowerAtOne) {
  EXPECT_DOUBLE_EQ(SmoothingDistribution::poisson(1.0).expected_t_power(1.0), 1.0);
}

TEST(Smoothing, ExpectedPowerPoisson) {
  double series = 0.0;
  double term = std::exp(-1.0);
  for (int l = 0; l < 60; ++l) {
    series += term;
    term *= 2.0 / (l + 1.0);
  }
  const double got = SmoothingDistribution::poisson(1.0).expected_t_power(2.0);
  EXPECT_NEAR(got, series, 1e-12);
  EXPECT_NEAR(got, std::exp(1.0), 1e-12);
}

TEST(Smoothing, ExpectedPowerBinomial) {
  double brute = 0.0;
  for (unsigned l = 0; l <= 3; ++l) brute += binomial_pmf(3, 0.5, l) * std::pow(3.0, l);
  EXPECT_DOUBLE_EQ(brute, 8.0);
  EXPECT_NEAR(SmoothingDistribution::binomial(3, 0.5).expected_t_power(3.0), brute, 1e-13);
}

TEST(Smoothing, InfiniteMomentsThrow) {
  const auto law = SmoothingDistribution::infinite();
  EXPECT_THROW(law.expected_t_power(2.0), unseen::NumericError);
  EXPECT_THROW(law.signed_moment(1.0), unseen::NumericError);
}

TEST(Smoothing, Laguerre) {
  EXPECT_EQ(unseen::laguerre(0, 3.7), 1.0);
  EXPECT_NEAR(unseen::laguerre(1, 1.0), 0.0, 1e-15);
  EXPECT_NEAR(unseen::laguerre(2, 2.0), 1.0 - 2.0 * 2.0 + 2.0 * 2.0 / 2.0, 1e-14);
  EXPECT_NEAR(unseen::laguerre(2, 2.0), -1.0, 1e-14);
}

TEST(Smoothing, LaguerreMatchesExplicitSum) {
  for (unsigned k : {3u, 7u, 12u}) {
    for (double y : {0.3, 2.0, 9.5}) {
      double sum = 0.0;
      for (unsigned j = 0; j <= k; ++j) {
        double c = 1.0;
        for (unsigned i = 1; i <= j; ++i) c = c * (k - j + i) / i;
        sum += c * std::pow(-y, j) / std::tgamma(j + 1.0);
      }
      EXPECT_NEAR(unseen::laguerre(k, y), sum, 1e-10 * std::max(1.0, std::abs(sum)));
    }
  }
}

TEST(Smoothing, BesselJ0) {
  for (double x : {0.0, 0.5, 2.0, 7.3, 11.9}) {
    EXPECT_NEAR(unseen::bessel_j0(x), j0_series(x), 1e-12) << "x=" << x;
  }
  EXPECT_NEAR(unseen::bessel_j0(2.0), 0.22389077914123567, 1e-15);
  EXPECT_NEAR(unseen::bessel_j0(30.0), -0.086367983581040226, 1e-12);
  EXPECT_NEAR(unseen::bessel_j0(100.0), 0.019985850304223122, 1e-12);
}

TEST(Smoothing, SignedMomentAtZero) {
  EXPECT_EQ(SmoothingDistribution::deterministic(0).signed_moment(0.0), 1.0);
  const auto law = SmoothingDistribution::poisson(1.5);
  EXPECT_NEAR(law.signed_moment(0.0), law.pmf(0), 1e-15);
}

TEST(Smoothing, SignedMomentBinomial) {
  const double brute = 0.5 + 0.5 * (-2.0);
  EXPECT_NEAR(SmoothingDistribution::binomial(1, 0.5).signed_moment(2.0), brute, 1e-15);
  EXPECT_NEAR(brute, -0.5, 0.0);
}

TEST(Smoothing, SignedMomentPoisson) {
  double series = 0.0;
  double term = 1.0;
  for (int j = 0; j < 40; ++j) {
    series += term;
    term *= -1.0 / ((j + 1.0) * (j + 1.0));
  }
  series *= std::exp(-1.0);
  EXPECT_NEAR(SmoothingDistribution::poisson(1.0).signed_moment(1.0), series, 1e-12);
}

TEST(Smoothing, XiBounds) {
  EXPECT_DOUBLE_EQ(SmoothingDistribution::poisson(2.0).xi_bound(3.0), std::exp(-2.0));
  EXPECT_EQ(SmoothingDistribution::binomial(0, 0.3).xi_bound(2.0), 1.0);
  EXPECT_DOUBLE_EQ(SmoothingDistribution::binomial(3, 0.5).xi_bound(2.0), 0.125);
  EXPECT_THROW(SmoothingDistribution::binomial(3, 0.6).xi_bound(2.0), unseen::SchemeError);
}

TEST(Smoothing, BinomialXiBoundHoldsNumerically) {
  const auto law = SmoothingDistribution::binomial(3, 0.5);
  double worst = 0.0;
  for (int j = 0; j <= 20000; ++j) {
    const double s = j * 0.005;
    worst = std::max(worst, std::abs(law.signed_moment(s)) * std::exp(-s / 2.0));
  }
  EXPECT_LE(worst, 0.125 + 1e-15);
}

TEST(Smoothing, CustomXiMatchesGrid) {
  const auto law = SmoothingDistribution::custom({0.2, 0.5, 0.3});
  double worst = 0.0;
  for (int j = 0; j <= 40000; ++j) {
    const double s = j * 0.001;
    const double moment = 0.2 - 0.5 * s + 0.3 * s * s / 2.0;
    worst = std::max(worst, std::abs(moment) * std::exp(-s / 2.0));
  }
  EXPECT_NEAR(law.xi_bound(2.0), worst, 1e-6);
}

TEST(Smoothing, DeterministicXiIsExact) {
  const double t = 2.0;
  const auto law = SmoothingDistribution::deterministic(3);
  double worst = 0.0;
  for (int j = 0; j <= 200000; ++j) {
    const double s = j * 0.0001;
    worst = std::max(worst, std::pow(s, 3) / 6.0 * std::exp(-s / t));
  }
  EXPECT_NEAR(law.xi_bound(t), worst, 1e-9);
}

TEST(Smoothing, CustomPmfCsv) {
  std::istringstream in("ell,prob\n0,0.25\n2,0.75\n");
  const auto law = unseen::read_custom_pmf_csv(in);
  EXPECT_DOUBLE_EQ(law.pmf(0), 0.25);
  EXPECT_DOUBLE_EQ(law.pmf(1), 0.0);
  EXPECT_DOUBLE_EQ(law.tail(1), 0.75);
  EXPECT_EQ(law.support_max(), 2u);
  std::istringstream dup("ell,prob\n1,0.5\n1,0.5\n");
  EXPECT_THROW(unseen::read_custom_pmf_csv(dup), unseen::InvalidArgument);
  std::istringstream bad_sum("ell,prob\n0,0.5\n");
  EXPECT_THROW(unseen::read_custom_pmf_csv(bad_sum), unseen::InvalidArgument);
}

TEST(Smoothing, Describe) {
  EXPECT_EQ(SmoothingDistribution::binomial(5, 0.5).describe(), "binomial(k=5,q=0.5)");
  EXPECT_EQ(SmoothingDistribution::infinite().describe(), "infinite");
  EXPECT_EQ(SmoothingDistribution::deterministic(3).describe(), "deterministic(l=3)");
}

TEST(Smoothing, RejectsBadParameters) {
  EXPECT_THROW(SmoothingDistribution::poisson(-1.0), unseen::InvalidArgument);
  EXPECT_THROW(SmoothingDistribution::binomial(3, 1.5), unseen::InvalidArgument);
  EXPECT_THROW(SmoothingDistribution::custom({0.5, 0.2}), unseen::InvalidArgument);
}

TEST(Smoothing, PoissonTailUnderflowTerminates) {
  const auto law = SmoothingDistribution::poisson(0.476);
  for (std::uint64_t i : {140u, 150u, 160u, 170u, 180u}) {
    const double v = law.tail(i);
    EXPECT_GE(v, 0.0);
    EXPECT_LT(v, 1e-280);
  }
  EXPECT_EQ(law.tails(400).size(), 401u);
}
