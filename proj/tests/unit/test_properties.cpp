#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "unseen/estimators.hpp"
#include "unseen/harness.hpp"
#include "unseen/sampling.hpp"

using unseen::PrevalenceHistogram;
using unseen::SmoothingDistribution;

namespace {

PrevalenceHistogram random_histogram(std::mt19937_64& rng, std::uint64_t max_index) {
  std::uniform_int_distribution<std::uint64_t> count(0, 40);
  PrevalenceHistogram::Entries e;
  for (std::uint64_t i = 1; i <= max_index; ++i) {
    if (const auto c = count(rng); c > 0) e[i] = c;
  }
  if (e.empty()) e[1] = 1;
  return PrevalenceHistogram::from_prevalences(e);
}

PrevalenceHistogram scaled(const PrevalenceHistogram& h, std::uint64_t c) {
  PrevalenceHistogram::Entries e;
  for (const auto& [i, v] : h.entries()) e[i] = v * c;
  return PrevalenceHistogram::from_prevalences(e);
}

}  // namespace

TEST(Properties, SgtIsLinearInPrevalences) {
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 50; ++trial) {
    const auto a = random_histogram(rng, 25);
    const auto b = random_histogram(rng, 25);
    const auto law = SmoothingDistribution::poisson(2.0);
    const double sum = unseen::sgt_estimate(a, law, 3.0) + unseen::sgt_estimate(b, law, 3.0);
    EXPECT_NEAR(unseen::sgt_estimate(a.merged_with(b), law, 3.0), sum, 1e-9 * std::max(1.0, std::abs(sum)));
    const double one = unseen::sgt_estimate(a, law, 3.0);
    EXPECT_NEAR(unseen::sgt_estimate(scaled(a, 3), law, 3.0), 3.0 * one, 1e-9 * std::max(1.0, std::abs(one)));
  }
}

TEST(Properties, ClampedEstimateInRange) {
  std::mt19937_64 rng(202);
  std::uniform_real_distribution<double> t_pick(0.2, 12.0);
  for (int trial = 0; trial < 200; ++trial) {
    const auto h = random_histogram(rng, 30);
    const double t = t_pick(rng);
    const double n = static_cast<double>(h.sample_size());
    for (auto scheme : {unseen::SmoothingScheme::Poisson, unseen::SmoothingScheme::BinomialOpt}) {
      const double v = unseen::estimate_unseen(h, t, scheme, true).value;
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, t * n);
    }
  }
}

TEST(Properties, GtCoefficientMagnitudeShrinksUnderSmoothing) {
  for (double t : {1.5, 3.0, 8.0}) {
    const auto gt = unseen::sgt_coefficients(SmoothingDistribution::infinite(), t, 40);
    const auto sgt = unseen::sgt_coefficients(SmoothingDistribution::binomial(6, 2.0 / (2.0 + t)), t, 40);
    for (std::uint64_t i = 1; i <= 40; ++i) {
      EXPECT_LE(std::abs(sgt.coefficient(i)), std::abs(gt.coefficient(i)) * (1.0 + 1e-12));
    }
  }
}

TEST(Properties, TrueUnseenBoundedBySupport) {
  const auto pop = unseen::realize(unseen::PopulationSpec::parse("zipf:1.2:0:150"), 0);
  for (std::uint64_t s = 0; s < 100; ++s) {
    const auto d = unseen::sample(pop, unseen::SamplingModel::Multinomial, 60, 90, s);
    const auto u = unseen::true_unseen(d.old_counts, d.new_counts);
    std::uint64_t observed = 0;
    for (auto c : d.old_counts) observed += c > 0;
    EXPECT_LE(u + observed, 150u);
    EXPECT_LE(u, 90u);
  }
}

TEST(Properties, CurveSharesOldSampleAcrossT) {
  unseen::CurveConfig c;
  c.population = "zipf:1:0:400";
  c.n = 150;
  c.t_grid = {0.0, 0.5, 3.0};
  c.estimators = {"empirical"};
  c.trials = 20;
  c.seed = 31;
  const auto samples = unseen::run_curve_trials(c);
  for (std::size_t r = 0; r < 20; ++r) {
    EXPECT_EQ(samples.prediction[0][0][r], samples.prediction[0][2][r]);
  }
}
