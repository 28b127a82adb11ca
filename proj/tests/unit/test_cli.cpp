#include <filesystem>
#include <sstream>

#include <gtest/gtest.h>
#include <json.hpp>

#include "helpers.hpp"
#include "unseen/estimators.hpp"
#include "unseen/harness.hpp"
#include "unseen/oracles.hpp"

using testing_support::data_path;
using testing_support::run_cli;

namespace {

std::string corbet_path() { return data_path("corbet.csv"); }
std::string empty_path() { return std::string(UNSEEN_TEST_DATA_DIR) + "/empty.csv"; }

}  // namespace

TEST(Cli, EstimateCorbetGt) {
  const auto r = run_cli("estimate --hist " + corbet_path() + " --t 1 --scheme gt --format json");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(nlohmann::json::parse(r.out)["estimates"][0]["value"], 75.0);
}

TEST(Cli, EstimateEmptyWarns) {
  const auto r = run_cli("estimate --hist " + empty_path() + " --t 2 --scheme binomial-opt --format json");
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["estimates"][0]["value"], 0.0);
  EXPECT_FALSE(j["estimates"][0]["warnings"].empty());
  EXPECT_NE(r.err.find("warning"), std::string::npos);
}

TEST(Cli, EstimateMatchesLibrary) {
  const auto h = testing_support::corbet();
  const auto law = unseen::auto_params(h.sample_size(), 2.0, unseen::SmoothingScheme::BinomialOpt);
  const auto report = unseen::run_estimate(h, corbet_path(), 2.0, "binomial-opt", true, {"chao-lee", "ace"});
  EXPECT_EQ(report.lines[0].value, unseen::sgt_estimate(h, law, 2.0));
  const auto json = run_cli("estimate --hist " + corbet_path() + " --t 2 --baselines chao-lee,ace --format json");
  ASSERT_EQ(json.code, 0) << json.err;
  EXPECT_EQ(json.out, unseen::estimate_json(report));
  const auto text = run_cli("estimate --hist " + corbet_path() + " --t 2 --baselines chao-lee,ace");
  EXPECT_EQ(text.out, unseen::estimate_text(report));
}

TEST(Cli, SimulateMatchesLibrary) {
  const auto r = run_cli("simulate --pop uniform:1 --model multinomial --n 5 --m 5 --seed 1 --format json");
  ASSERT_EQ(r.code, 0) << r.err;
  const auto report = unseen::run_simulation("uniform:1", unseen::SamplingModel::Multinomial, 5, 5, 1);
  EXPECT_EQ(r.out, unseen::simulation_json(report));
  EXPECT_EQ(nlohmann::json::parse(r.out)["unseen"], 0);
}

TEST(Cli, NmseMatchesLibrary) {
  const auto r = run_cli(
      "nmse --pop uniform:100 --model poisson --n 100 --t 2 --estimator const-half --trials 10000 --seed 1");
  ASSERT_EQ(r.code, 0) << r.err;
  unseen::ExperimentConfig c;
  c.model = unseen::SamplingModel::Poisson;
  c.population = "uniform:100";
  c.n = 100;
  c.t_grid = {2.0};
  c.estimators = {"const-half"};
  c.trials = 10'000;
  c.seed = 1;
  c.clamp = true;
  const auto rows = unseen::run_nmse(c).rows;
  std::ostringstream csv;
  unseen::write_nmse_csv(csv, rows);
  EXPECT_EQ(r.out, csv.str());
}

TEST(Cli, NmseJsonMatchesLibrary) {
  const auto r = run_cli("nmse --pop zipf:1:0:100 --n 50 --t 1,3 --estimator gt,ace --trials 20 --seed 4 --format json");
  ASSERT_EQ(r.code, 0) << r.err;
  unseen::ExperimentConfig c;
  c.population = "zipf:1:0:100";
  c.n = 50;
  c.t_grid = {1.0, 3.0};
  c.estimators = {"gt", "ace"};
  c.trials = 20;
  c.seed = 4;
  c.clamp = true;
  EXPECT_EQ(r.out, unseen::nmse_json(c, unseen::run_nmse(c).rows));
}

TEST(Cli, CurveMatchesLibrary) {
  const auto r = run_cli("curve --pop uniform:300 --n 100 --t 0,1,2 --estimators gt,jackknife1 --trials 10 --seed 2");
  ASSERT_EQ(r.code, 0) << r.err;
  unseen::CurveConfig c;
  c.population = "uniform:300";
  c.n = 100;
  c.t_grid = {0.0, 1.0, 2.0};
  c.estimators = {"gt", "jackknife1"};
  c.trials = 10;
  c.seed = 2;
  c.clamp = true;
  std::ostringstream csv;
  unseen::write_curve_csv(csv, unseen::discovery_curve(c).rows);
  EXPECT_EQ(r.out, csv.str());
}

TEST(Cli, IngestMatchesLibrary) {
  const auto r = run_cli("ingest --corpus " + data_path("hamlet.txt"));
  ASSERT_EQ(r.code, 0) << r.err;
  const auto corpus = unseen::ingest_corpus_file(data_path("hamlet.txt"), true);
  std::ostringstream csv;
  unseen::write_histogram_csv(csv, unseen::PrevalenceHistogram::from_counts(corpus.counts()));
  EXPECT_EQ(r.out, csv.str());
  EXPECT_NE(r.err.find("distinct\t4582"), std::string::npos);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run_cli("estimate --hist " + corbet_path() + " --t 1 --scheme poisson --strict-scheme").code, 3);
  EXPECT_EQ(run_cli("estimate --hist " + corbet_path() + " --t nope").code, 2);
  EXPECT_EQ(run_cli("estimate --hist /nonexistent/file.csv --t 2").code, 2);
  EXPECT_EQ(run_cli("estimate --t 2").code, 2);
  EXPECT_EQ(run_cli("simulate --pop uniform:5 --n 5").code, 2);
  EXPECT_EQ(run_cli("nmse --pop uniform:10 --n 1 --t 1 --estimator jackknife1 --trials 20 --seed 1").code, 4);
  EXPECT_EQ(run_cli("").code, 2);
  EXPECT_EQ(run_cli("--help").code, 0);
}

TEST(Cli, SchemeErrorNamesFallback) {
  const auto r = run_cli("estimate --hist " + corbet_path() + " --t 0.5 --scheme binomial-opt --strict-scheme");
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("gt"), std::string::npos);
}

TEST(Cli, HelpListsDefaults) {
  const auto nmse = run_cli("nmse --help");
  ASSERT_EQ(nmse.code, 0);
  for (const char* flag : {"--pop", "--model", "--n", "--t", "--estimator", "--trials", "--seed", "--clamp",
                           "--threads", "--format", "--out"}) {
    EXPECT_NE(nmse.out.find(flag), std::string::npos) << flag;
  }
  EXPECT_NE(nmse.out.find("100"), std::string::npos);
  const auto estimate = run_cli("estimate --help");
  EXPECT_NE(estimate.out.find("binomial-opt"), std::string::npos);
  for (const char* sub : {"simulate", "curve", "ingest", "verify"}) {
    EXPECT_EQ(run_cli(std::string(sub) + " --help").code, 0) << sub;
  }
}

TEST(Cli, NmseDeterministicAcrossThreads) {
  const std::string base = "nmse --pop zipf:1:0:500 --n 300 --t 1,2,5 --estimator gt,binomial-opt,chao-lee --trials 60 --seed 9";
  const auto a = run_cli(base + " --threads 1");
  const auto b = run_cli(base + " --threads 3");
  const auto c = run_cli(base + " --threads 1");
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.out, c.out);
}
