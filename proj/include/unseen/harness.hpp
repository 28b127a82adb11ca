#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "unseen/baselines.hpp"
#include "unseen/estimators.hpp"
#include "unseen/prevalence.hpp"
#include "unseen/sampling.hpp"

namespace unseen {

inline constexpr std::string_view kVersion = "1.0.0";

/// Identifiers accepted wherever an estimator list is configured:
///   gt, poisson, binomial-et, binomial-opt, hyper-poisson    (SGT family)
///   chao-lee, ace, jackknife1..jackknife5, scl, empirical    (baselines + SCL)
///   const-half   the trivial prediction n t / 2
///   oracle       returns the true unseen count
struct EstimatorId {
  enum class Family { GoodToulmin, Scheme, Baseline, ConstHalf, Oracle };

  Family family = Family::GoodToulmin;
  SmoothingScheme scheme = SmoothingScheme::BinomialOpt;
  BaselineKind baseline;

  std::string name() const;
  static EstimatorId parse(std::string_view name);
};

struct EstimatorOutput {
  double value = 0.0;
  std::optional<std::string> warning;
};

/// Runs one estimator on one histogram. `n` is the nominal sample size used
/// by const-half; `truth` feeds the oracle. SGT schemes and GT honour clamp.
EstimatorOutput evaluate_estimator(const EstimatorId& id, const PrevalenceHistogram& hist, double t,
                                   bool clamp, std::uint64_t n, double truth);

struct ExperimentConfig {
  SamplingModel model = SamplingModel::Multinomial;
  std::string population;  // PopulationSpec text
  std::uint64_t n = 0;
  std::vector<double> t_grid;
  std::vector<std::string> estimators;
  std::uint64_t trials = 100;
  std::uint64_t seed = 0;
  bool clamp = false;
  unsigned threads = 0;       // 0: hardware concurrency
  bool keep_records = false;  // fill NmseTable::records
};

struct TrialRecord {
  std::uint64_t trial = 0;
  double t = 0.0;
  std::string estimator;
  double estimate = 0.0;
  double truth = 0.0;
  double squared_error = 0.0;
  double seconds = 0.0;
};

struct NmseRow {
  std::string estimator;
  std::string model;
  std::string population;
  std::uint64_t n = 0;
  double t = 0.0;
  std::uint64_t trials = 0;
  double nmse = 0.0;
  double nmse_se = 0.0;

  friend bool operator==(const NmseRow&, const NmseRow&) = default;
};

struct NmseTable {
  std::vector<NmseRow> rows;
  std::vector<std::string> warnings;
  std::vector<TrialRecord> records;
};

/// Empirical NMSE, mean over trials of ((U-hat - U) / (n t))^2, per estimator
/// and t, with its standard error. Under the Bernoulli-product model the
/// normalizer is n t p_S. Every estimator sees the same sample in a given
/// (trial, t). Estimator exceptions are recorded; more than 10% failed trials
/// for any (estimator, t) throws TrialFailure. Output is independent of the
/// thread count.
NmseTable run_nmse(const ExperimentConfig& config);

struct Corpus {
  std::vector<std::string> vocabulary;
  std::vector<std::uint32_t> tokens;  // indices into vocabulary, in text order

  std::vector<std::uint64_t> counts() const;
};

/// Tokens are maximal runs of alphanumeric characters: ASCII letters and
/// digits, Latin-1 and Latin Extended letters (U+00C0..U+024F except U+00D7
/// and U+00F7), Greek, Cyrillic, kana, CJK ideographs and Hangul syllables.
/// Lowercasing affects ASCII only. Throws InvalidArgument on invalid UTF-8.
Corpus ingest_corpus(std::string_view text, bool lowercase);
Corpus ingest_corpus_file(const std::string& path, bool lowercase);

/// Expands a count table into a corpus (symbols in map order, each repeated).
Corpus corpus_from_counts(const std::map<std::string, std::uint64_t>& counts);

enum class SubsampleMode { WithoutReplacement, Consecutive };

std::string_view subsample_mode_name(SubsampleMode mode);
SubsampleMode parse_subsample_mode(std::string_view name);

struct Subsample {
  std::vector<std::uint64_t> old_counts;  // per vocabulary entry
  std::vector<std::uint32_t> remainder;   // held-out tokens in draw order
};

/// WithoutReplacement: a uniformly random n-subset, the remainder in random
/// order. Consecutive: the first n tokens, the remainder in text order.
Subsample subsample(const Corpus& corpus, std::uint64_t n, SubsampleMode mode, std::uint64_t seed);

struct CurveConfig {
  enum class Source { Synthetic, Corpus };

  Source source = Source::Synthetic;
  // Synthetic
  SamplingModel model = SamplingModel::Multinomial;
  std::string population;
  // Corpus
  std::string corpus_path;  // echoed only
  const Corpus* corpus = nullptr;
  SubsampleMode mode = SubsampleMode::WithoutReplacement;

  std::uint64_t n = 0;
  std::vector<double> t_grid;
  std::vector<std::string> estimators;
  std::uint64_t trials = 100;
  std::uint64_t seed = 0;
  bool clamp = false;
  unsigned threads = 0;
};

/// Per-trial curve data: prediction[e][t][trial] = observed distinct +
/// predicted unseen; truth[t][trial] = observed distinct + true unseen, or
/// nullopt when t n exceeds the held-out data.
struct CurveSamples {
  std::vector<std::string> estimators;
  std::vector<double> t_grid;
  std::vector<std::vector<std::vector<std::optional<double>>>> prediction;
  std::vector<std::vector<std::optional<double>>> truth;
  std::vector<std::string> warnings;
};

CurveSamples run_curve_trials(const CurveConfig& config);

struct CurveRow {
  std::string estimator;
  double t = 0.0;
  double mean_prediction = 0.0;
  double stddev = 0.0;
  std::optional<double> true_value;  // empty when unvalidatable

  friend bool operator==(const CurveRow&, const CurveRow&) = default;
};

struct CurveTable {
  std::vector<CurveRow> rows;
  std::vector<std::string> warnings;
};

CurveTable summarize_curve(const CurveSamples& samples);
CurveTable discovery_curve(const CurveConfig& config);

void write_nmse_csv(std::ostream& out, const std::vector<NmseRow>& rows);
std::vector<NmseRow> read_nmse_csv(std::istream& in);
void write_curve_csv(std::ostream& out, const std::vector<CurveRow>& rows);
std::vector<CurveRow> read_curve_csv(std::istream& in);

std::string nmse_json(const ExperimentConfig& config, const std::vector<NmseRow>& rows);
std::string curve_json(const CurveConfig& config, const std::vector<CurveRow>& rows);

struct EstimateLine {
  std::string estimator;
  double value = 0.0;
  std::string smoothing;  // describe() of the law used, empty for baselines
  std::vector<std::string> warnings;
};

struct EstimateReport {
  std::string source;
  std::uint64_t n = 0;
  std::uint64_t observed = 0;
  double t = 0.0;
  bool clamp = true;
  std::vector<EstimateLine> lines;
};

/// One line for the scheme (gt, a scheme name, or `custom` when a smoothing
/// law is given) followed by one per baseline. With strict_scheme a scheme
/// at t <= 1 raises SchemeError instead of falling back to GT.
EstimateReport run_estimate(const PrevalenceHistogram& hist, const std::string& source, double t,
                            const std::string& scheme, bool clamp,
                            const std::vector<std::string>& baselines, bool strict_scheme = false,
                            const std::optional<SmoothingDistribution>& custom = std::nullopt);

std::string estimate_text(const EstimateReport& report);
std::string estimate_json(const EstimateReport& report);

struct SimulationReport {
  std::string population;
  std::string model;
  std::uint64_t n = 0;
  std::uint64_t m = 0;
  std::uint64_t seed = 0;
  std::uint64_t old_size = 0;
  std::uint64_t new_size = 0;
  std::uint64_t observed = 0;
  std::uint64_t unseen = 0;
  PrevalenceHistogram histogram;
};

SimulationReport run_simulation(const std::string& population, SamplingModel model, std::uint64_t n,
                                std::uint64_t m, std::uint64_t seed);

std::string simulation_text(const SimulationReport& report);
std::string simulation_json(const SimulationReport& report);

}  // namespace unseen
