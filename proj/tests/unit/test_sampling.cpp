#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>

#include <gtest/gtest.h>

#include "unseen/error.hpp"
#include "unseen/sampling.hpp"

using unseen::Population;
using unseen::PopulationSpec;
using unseen::SamplingModel;

namespace {

std::map<std::string, std::uint64_t> letters(const std::string& word) {
  std::map<std::string, std::uint64_t> out;
  for (char c : word) ++out[std::string(1, c)];
  return out;
}

}  // namespace

TEST(Population, Recipes) {
  const auto uniform = unseen::realize(PopulationSpec::parse("uniform:4"), 0);
  EXPECT_EQ(uniform.probabilities(), std::vector<double>(4, 0.25));

  auto two = unseen::realize(PopulationSpec::parse("twostep:4"), 0).probabilities();
  std::sort(two.begin(), two.end());
  EXPECT_DOUBLE_EQ(two[0], 0.125);
  EXPECT_DOUBLE_EQ(two[1], 0.125);
  EXPECT_DOUBLE_EQ(two[2], 0.375);
  EXPECT_DOUBLE_EQ(two[3], 0.375);

  const auto zipf = unseen::realize(PopulationSpec::parse("zipf:1:10:10000"), 0).probabilities();
  ASSERT_EQ(zipf.size(), 10'000u);
  for (std::size_t i : {0u, 17u, 9999u}) {
    EXPECT_NEAR(zipf[i] * (static_cast<double>(i + 1) + 10.0), zipf[0] * 11.0, 1e-15);
  }
}

TEST(Population, DirichletIsSeeded) {
  const auto spec = PopulationSpec::parse("dirichlet:0.5:50");
  const auto a = unseen::realize(spec, 3).probabilities();
  EXPECT_EQ(a, unseen::realize(spec, 3).probabilities());
  EXPECT_NE(a, unseen::realize(spec, 4).probabilities());
  EXPECT_NEAR(std::accumulate(a.begin(), a.end(), 0.0), 1.0, 1e-12);
}

TEST(Population, RejectsBadRecipes) {
  EXPECT_THROW(PopulationSpec::parse("twostep:5"), unseen::InvalidArgument);
  EXPECT_THROW(PopulationSpec::parse("uniform:0"), unseen::InvalidArgument);
  EXPECT_THROW(PopulationSpec::parse("pareto:3"), unseen::InvalidArgument);
  EXPECT_THROW(Population::probabilistic({0.5, 0.4}), unseen::InvalidArgument);
}

TEST(Sample, SingleSymbol) {
  const auto pop = Population::probabilistic({1.0});
  const auto s = unseen::sample(pop, SamplingModel::Multinomial, 5, 5, 1);
  EXPECT_EQ(s.old_counts, std::vector<std::uint64_t>{5});
  EXPECT_EQ(s.new_counts, std::vector<std::uint64_t>{5});
  EXPECT_EQ(unseen::true_unseen(s.old_counts, s.new_counts), 0u);
}

TEST(Sample, MultinomialSizes) {
  const auto pop = unseen::realize(PopulationSpec::parse("zipf:1:0:500"), 0);
  const auto s = unseen::sample(pop, SamplingModel::Multinomial, 1000, 250, 9);
  EXPECT_EQ(std::accumulate(s.old_counts.begin(), s.old_counts.end(), std::uint64_t{0}), 1000u);
  EXPECT_EQ(std::accumulate(s.new_counts.begin(), s.new_counts.end(), std::uint64_t{0}), 250u);
}

TEST(Sample, ExhaustiveUrn) {
  const auto pop = Population::urn(std::vector<std::uint64_t>(30, 1));
  const auto s = unseen::sample(pop, SamplingModel::Hypergeometric, 12, 18, 4);
  for (std::size_t x = 0; x < 30; ++x) EXPECT_EQ(s.old_counts[x] + s.new_counts[x], 1u);
  EXPECT_THROW(unseen::sample(pop, SamplingModel::Hypergeometric, 12, 19, 4), unseen::InvalidArgument);
}

TEST(Sample, ModelPopulationMismatch) {
  const auto pop = Population::probabilistic({0.5, 0.5});
  EXPECT_THROW(unseen::sample(pop, SamplingModel::Hypergeometric, 1, 1, 0), unseen::InvalidArgument);
  EXPECT_THROW(unseen::sample(pop, SamplingModel::BernoulliProduct, 1, 1, 0), unseen::InvalidArgument);
}

TEST(Sample, BernoulliCountsBoundedByUnits) {
  const auto pop = Population::bernoulli_product(std::vector<double>(40, 0.3));
  const auto s = unseen::sample(pop, SamplingModel::BernoulliProduct, 7, 3, 2);
  for (std::size_t x = 0; x < 40; ++x) {
    EXPECT_LE(s.old_counts[x], 7u);
    EXPECT_LE(s.new_counts[x], 3u);
  }
}

TEST(Sample, PoissonTotalMean) {
  const auto pop = unseen::realize(PopulationSpec::parse("uniform:100"), 0);
  const int trials = 10'000;
  double sum = 0.0;
  double sum2 = 0.0;
  for (int s = 0; s < trials; ++s) {
    const auto d = unseen::sample(pop, SamplingModel::Poisson, 100, 100, unseen::derive_seed(77, s));
    const double total = static_cast<double>(std::accumulate(d.old_counts.begin(), d.old_counts.end(), std::uint64_t{0}));
    sum += total;
    sum2 += total * total;
  }
  const double mean = sum / trials;
  const double se = std::sqrt((sum2 / trials - mean * mean) / trials);
  EXPECT_LE(std::abs(mean - 100.0), 3.0 * se);
}

TEST(Sample, Deterministic) {
  const auto pop = unseen::realize(PopulationSpec::parse("uniform:50"), 0);
  for (auto model : {SamplingModel::Multinomial, SamplingModel::Poisson}) {
    const auto a = unseen::sample(pop, model, 80, 40, 5);
    const auto b = unseen::sample(pop, model, 80, 40, 5);
    EXPECT_EQ(a.old_counts, b.old_counts);
    EXPECT_EQ(a.new_counts, b.new_counts);
  }
}

TEST(TrueUnseen, BananasSonatas) {
  EXPECT_EQ(unseen::true_unseen(letters("bananas"), letters("sonatas")), 2u);
  EXPECT_EQ(unseen::true_unseen(letters("bananas"), letters("banana")), 0u);
  EXPECT_EQ(unseen::true_unseen(letters(""), letters("sonatas")), 5u);
}

TEST(ExpectedUnseen, Uniform) {
  const auto pop = unseen::realize(PopulationSpec::parse("uniform:100"), 0);
  const double closed = 100.0 * std::exp(-1.0) * (1.0 - std::exp(-1.0));
  EXPECT_NEAR(unseen::expected_unseen_poisson(pop, 100, 1.0), closed, 1e-12);
  EXPECT_NEAR(closed, 23.254, 1e-3);
  EXPECT_EQ(unseen::expected_unseen_poisson(pop, 100, 0.0), 0.0);
  const auto small = unseen::realize(PopulationSpec::parse("uniform:10"), 0);
  EXPECT_LE(unseen::expected_unseen_poisson(small, 200, 1.0), 10.0 * std::exp(-20.0));
}

TEST(ExpectedUnseen, MonteCarloAgrees) {
  const auto pop = unseen::realize(PopulationSpec::parse("uniform:100"), 0);
  const int trials = 100'000;
  double sum = 0.0;
  double sum2 = 0.0;
  for (int s = 0; s < trials; ++s) {
    const auto d = unseen::sample(pop, SamplingModel::Poisson, 100, 100, unseen::derive_seed(3, s));
    const double u = static_cast<double>(unseen::true_unseen(d.old_counts, d.new_counts));
    sum += u;
    sum2 += u * u;
  }
  const double mean = sum / trials;
  const double se = std::sqrt((sum2 / trials - mean * mean) / trials);
  EXPECT_LE(std::abs(mean - unseen::expected_unseen_poisson(pop, 100, 1.0)), 3.0 * se);
}

TEST(ExpectedBias, GtIsUnbiased) {
  const auto pop = unseen::realize(PopulationSpec::parse("zipf:1:0:200"), 0);
  const auto gt = unseen::sgt_coefficients(unseen::SmoothingDistribution::infinite(), 0.8, 60);
  EXPECT_NEAR(unseen::expected_bias_poisson(pop, 100, gt), 0.0, 1e-9);
}

TEST(ExpectedBias, ZeroEstimator) {
  const auto pop = unseen::realize(PopulationSpec::parse("uniform:100"), 0);
  const unseen::LinearEstimator zero({0.0}, 2.0);
  EXPECT_NEAR(unseen::expected_bias_poisson(pop, 100, zero),
              -unseen::expected_unseen_poisson(pop, 100, 2.0), 1e-12);
}

TEST(ExpectedBias, TruncatedGtFloor) {
  const std::uint64_t n = 300;
  const std::uint64_t l = 2;
  const double t = 2.0;
  const auto pop = Population::probabilistic(std::vector<double>(n / (l + 1), 1.0 / (n / (l + 1))));
  const auto est = unseen::sgt_coefficients(unseen::SmoothingDistribution::deterministic(l), t, l);
  const double bias = -unseen::expected_bias_poisson(pop, n, est);
  EXPECT_GT(bias, n * std::pow(t - 1.0, 2.5) / (6.05 * t));
}

TEST(Seeds, DeriveSeedSeparatesStreams) {
  EXPECT_EQ(unseen::derive_seed(1, 2, 3), unseen::derive_seed(1, 2, 3));
  EXPECT_NE(unseen::derive_seed(1, 2, 3), unseen::derive_seed(1, 3, 2));
  EXPECT_NE(unseen::derive_seed(1, 2), unseen::derive_seed(2, 2));
}
