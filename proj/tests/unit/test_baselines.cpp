#include <cmath>

#include <gtest/gtest.h>

#include "helpers.hpp"
#include "unseen/baselines.hpp"
#include "unseen/error.hpp"

using unseen::BaselineKind;
using unseen::PrevalenceHistogram;

namespace {

double scl(double f0, double f1, double n, double m) {
  return f0 * (1.0 - std::pow(1.0 - f1 / (n * f0), m));
}

}  // namespace

TEST(Baselines, Names) {
  for (const char* name : {"chao-lee", "ace", "jackknife1", "jackknife5", "scl", "empirical"}) {
    EXPECT_EQ(BaselineKind::parse(name).name(), name);
  }
  EXPECT_THROW(BaselineKind::parse("jackknife6"), unseen::InvalidArgument);
}

TEST(Baselines, JackknifeFirstOrder) {
  const auto h = testing_support::corbet();
  const double n = static_cast<double>(h.sample_size());
  const double expected = 435.0 + 118.0 * (n - 1.0) / n;
  EXPECT_NEAR(unseen::baseline_support(h, BaselineKind::jackknife(1)).value, expected, 1e-9);
}

TEST(Baselines, JackknifeSecondOrder) {
  const auto h = PrevalenceHistogram::from_prevalences({{1, 6}, {2, 3}, {4, 1}});
  const double n = static_cast<double>(h.sample_size());
  const double expected = 10.0 + 6.0 * (2.0 * n - 3.0) / n - 3.0 * (n - 2.0) * (n - 2.0) / (n * (n - 1.0));
  EXPECT_NEAR(unseen::baseline_support(h, BaselineKind::jackknife(2)).value, expected, 1e-9);
}

TEST(Baselines, ChaoLeeCorbetByHand) {
  const auto h = testing_support::corbet();
  const double n = static_cast<double>(h.sample_size());
  const double c = 1.0 - 118.0 / n;
  const double s0 = 435.0 / c;
  double pairs = 0.0;
  for (const auto& [i, f] : h.entries()) pairs += static_cast<double>(i * (i - 1) * f);
  const double g2 = std::max(s0 * pairs / (n * (n - 1.0)) - 1.0, 0.0);
  const double support = s0 + 118.0 * g2 / c;
  EXPECT_NEAR(unseen::baseline_support(h, BaselineKind::chao_lee()).value, support, 1e-9);
  const double unseen_value = scl(support - 435.0, 118.0, n, n);
  const auto got = unseen::baseline_unseen(h, 1.0, BaselineKind::chao_lee());
  EXPECT_NEAR(got.value, unseen_value, 1e-9);
  EXPECT_NEAR(got.value, 69.613657341173223, 1e-9);
  EXPECT_FALSE(got.warning.has_value());
}

TEST(Baselines, Chao1BiasCorrected) {
  const auto h = testing_support::corbet();
  const double n = static_cast<double>(h.sample_size());
  const double expected = 435.0 + (n - 1.0) / n * 118.0 * 117.0 / (2.0 * 75.0);
  EXPECT_NEAR(unseen::baseline_support(h, BaselineKind::shen_chao_lin()).value, expected, 1e-9);
}

TEST(Baselines, AceWithAllRare) {
  const auto h = PrevalenceHistogram::from_prevalences({{1, 4}, {2, 3}, {3, 2}});
  const double n = 16.0;
  const double c = 1.0 - 4.0 / n;
  const double pairs = 2.0 * 3.0 + 6.0 * 2.0;
  const double g2 = std::max(9.0 / c * pairs / (n * (n - 1.0)) - 1.0, 0.0);
  const double expected = 9.0 / c + 4.0 * g2 / c;
  EXPECT_NEAR(unseen::baseline_support(h, BaselineKind::ace()).value, expected, 1e-12);
}

TEST(Baselines, NoSingletonsPredictsZero) {
  const auto h = PrevalenceHistogram::from_prevalences({{2, 5}, {3, 1}});
  for (const char* name : {"chao-lee", "ace", "jackknife1", "scl"}) {
    EXPECT_EQ(unseen::baseline_unseen(h, 2.0, BaselineKind::parse(name)).value, 0.0) << name;
  }
}

TEST(Baselines, EmpiricalIsZero) {
  EXPECT_EQ(unseen::baseline_unseen(testing_support::corbet(), 3.0, BaselineKind::empirical()).value, 0.0);
}

TEST(Baselines, AllSingletonsFallsBack) {
  const auto h = PrevalenceHistogram::from_prevalences({{1, 8}});
  const auto coverage = unseen::baseline_unseen(h, 1.0, BaselineKind::chao_lee());
  const auto jack = unseen::baseline_unseen(h, 1.0, BaselineKind::jackknife(1));
  ASSERT_TRUE(coverage.warning.has_value());
  EXPECT_EQ(*coverage.warning, "all-singletons: coverage undefined");
  EXPECT_EQ(coverage.value, jack.value);
  EXPECT_TRUE(unseen::baseline_unseen(h, 1.0, BaselineKind::ace()).warning.has_value());
}

TEST(Baselines, SclExtrapolation) {
  const auto h = testing_support::corbet();
  const double n = static_cast<double>(h.sample_size());
  EXPECT_NEAR(unseen::shen_chao_lin_extrapolation(h, 50.0, 2.0), scl(50.0, 118.0, n, 2.0 * n), 1e-9);
  EXPECT_EQ(unseen::shen_chao_lin_extrapolation(h, 0.0, 2.0), 0.0);
}
