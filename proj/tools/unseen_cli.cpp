#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "unseen/error.hpp"
#include "unseen/harness.hpp"
#include "unseen/numeric.hpp"
#include "unseen/oracles.hpp"
#include "unseen/prevalence.hpp"
#include "unseen/smoothing.hpp"

namespace {

constexpr int kExitInput = 2;
constexpr int kExitScheme = 3;
constexpr int kExitTrials = 4;
constexpr int kExitVerify = 5;

unsigned thread_count(int flag) {
  if (flag > 0) return static_cast<unsigned>(flag);
  if (const char* env = std::getenv("UNSEEN_THREADS"); env != nullptr && *env != '\0') {
    return static_cast<unsigned>(unseen::parse_uint(env));
  }
  return 0;
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw unseen::InvalidArgument("cannot write '" + path + "'");
  }
  out << text;
}

void check_format(const std::string& format, std::initializer_list<const char*> allowed) {
  for (const char* a : allowed) {
    if (format == a) return;
  }
  throw unseen::InvalidArgument("unsupported --format '" + format + "'");
}

void print_warnings(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
}

struct EstimateArgs {
  std::string hist;
  std::string corpus;
  bool lowercase = true;
  double t = 0.0;
  std::string scheme = "binomial-opt";
  bool clamp = true;
  std::vector<std::string> baselines;
  std::string smoothing;
  bool strict_scheme = false;
  std::string format = "text";
  std::string out;
};

int run_estimate_command(const EstimateArgs& a) {
  check_format(a.format, {"text", "json"});
  if (a.hist.empty() == a.corpus.empty()) {
    throw unseen::InvalidArgument("give exactly one of --hist or --corpus");
  }
  unseen::PrevalenceHistogram hist;
  std::string source;
  if (!a.hist.empty()) {
    hist = unseen::read_histogram_csv_file(a.hist);
    source = a.hist;
  } else {
    hist = unseen::PrevalenceHistogram::from_counts(
        unseen::ingest_corpus_file(a.corpus, a.lowercase).counts());
    source = a.corpus;
  }
  std::optional<unseen::SmoothingDistribution> custom;
  if (!a.smoothing.empty()) custom = unseen::read_custom_pmf_csv_file(a.smoothing);
  const unseen::EstimateReport report = unseen::run_estimate(
      hist, source, a.t, a.scheme, a.clamp, a.baselines, a.strict_scheme, custom);
  for (const auto& line : report.lines) {
    for (const auto& w : line.warnings) std::cerr << "warning: " << line.estimator << ": " << w << '\n';
  }
  emit(a.format == "json" ? unseen::estimate_json(report) : unseen::estimate_text(report), a.out);
  return 0;
}

struct SimulateArgs {
  std::string pop;
  std::string model = "multinomial";
  std::uint64_t n = 0;
  std::uint64_t m = 0;
  std::uint64_t seed = 0;
  std::string format = "text";
  std::string out;
  std::string hist_out;
};

int run_simulate_command(const SimulateArgs& a) {
  check_format(a.format, {"text", "json"});
  const unseen::SimulationReport report =
      unseen::run_simulation(a.pop, unseen::parse_model(a.model), a.n, a.m, a.seed);
  if (!a.hist_out.empty()) {
    std::ostringstream csv;
    unseen::write_histogram_csv(csv, report.histogram);
    emit(csv.str(), a.hist_out);
  }
  emit(a.format == "json" ? unseen::simulation_json(report) : unseen::simulation_text(report), a.out);
  return 0;
}

struct NmseArgs {
  std::string pop;
  std::string model = "multinomial";
  std::uint64_t n = 0;
  std::vector<double> t_grid;
  std::vector<std::string> estimators{"binomial-opt"};
  std::uint64_t trials = 100;
  std::uint64_t seed = 0;
  bool clamp = true;
  int threads = 0;
  std::string format = "csv";
  std::string out;
};

int run_nmse_command(const NmseArgs& a) {
  check_format(a.format, {"csv", "json"});
  unseen::ExperimentConfig config;
  config.model = unseen::parse_model(a.model);
  config.population = a.pop;
  config.n = a.n;
  config.t_grid = a.t_grid;
  config.estimators = a.estimators;
  config.trials = a.trials;
  config.seed = a.seed;
  config.clamp = a.clamp;
  config.threads = thread_count(a.threads);
  const unseen::NmseTable table = unseen::run_nmse(config);
  print_warnings(table.warnings);
  if (a.format == "json") {
    emit(unseen::nmse_json(config, table.rows), a.out);
  } else {
    std::ostringstream csv;
    unseen::write_nmse_csv(csv, table.rows);
    emit(csv.str(), a.out);
  }
  return 0;
}

struct CurveArgs {
  std::string pop;
  std::string model = "multinomial";
  std::string corpus;
  bool lowercase = true;
  std::string mode = "random";
  std::uint64_t n = 0;
  double fraction = 0.0;
  std::vector<double> t_grid;
  std::vector<std::string> estimators{"binomial-opt", "jackknife1"};
  std::uint64_t trials = 100;
  std::uint64_t seed = 0;
  bool clamp = true;
  int threads = 0;
  std::string format = "csv";
  std::string out;
};

int run_curve_command(const CurveArgs& a) {
  check_format(a.format, {"csv", "json"});
  if (a.pop.empty() == a.corpus.empty()) {
    throw unseen::InvalidArgument("give exactly one of --pop or --corpus");
  }
  unseen::CurveConfig config;
  config.t_grid = a.t_grid;
  config.estimators = a.estimators;
  config.trials = a.trials;
  config.seed = a.seed;
  config.clamp = a.clamp;
  config.threads = thread_count(a.threads);
  unseen::Corpus corpus;
  if (!a.pop.empty()) {
    if (a.n == 0) throw unseen::InvalidArgument("--n is required with --pop");
    config.source = unseen::CurveConfig::Source::Synthetic;
    config.model = unseen::parse_model(a.model);
    config.population = a.pop;
    config.n = a.n;
  } else {
    corpus = unseen::ingest_corpus_file(a.corpus, a.lowercase);
    config.source = unseen::CurveConfig::Source::Corpus;
    config.corpus = &corpus;
    config.corpus_path = a.corpus;
    config.mode = unseen::parse_subsample_mode(a.mode);
    if ((a.n > 0) == (a.fraction > 0.0)) {
      throw unseen::InvalidArgument("give exactly one of --n or --fraction with --corpus");
    }
    if (a.fraction > 1.0) throw unseen::InvalidArgument("--fraction must lie in (0, 1]");
    config.n = a.n > 0 ? a.n
                       : static_cast<std::uint64_t>(
                             std::llround(a.fraction * static_cast<double>(corpus.tokens.size())));
  }
  const unseen::CurveTable table = unseen::discovery_curve(config);
  print_warnings(table.warnings);
  if (a.format == "json") {
    emit(unseen::curve_json(config, table.rows), a.out);
  } else {
    std::ostringstream csv;
    unseen::write_curve_csv(csv, table.rows);
    emit(csv.str(), a.out);
  }
  return 0;
}

struct IngestArgs {
  std::string corpus;
  bool lowercase = true;
  std::string out;
  std::string counts_out;
};

int run_ingest_command(const IngestArgs& a) {
  const unseen::Corpus corpus = unseen::ingest_corpus_file(a.corpus, a.lowercase);
  const auto counts = corpus.counts();
  const auto hist = unseen::PrevalenceHistogram::from_counts(counts);
  if (!a.counts_out.empty()) {
    std::ostringstream csv;
    csv << "symbol,weight\n";
    for (std::size_t i = 0; i < counts.size(); ++i) {
      csv << corpus.vocabulary[i] << ',' << counts[i] << '\n';
    }
    emit(csv.str(), a.counts_out);
  }
  std::ostringstream csv;
  unseen::write_histogram_csv(csv, hist);
  emit(csv.str(), a.out);
  std::ostream& summary = a.out.empty() ? std::cerr : std::cout;
  summary << "tokens\t" << corpus.tokens.size() << "\ndistinct\t" << corpus.vocabulary.size()
          << '\n';
  return 0;
}

struct VerifyArgs {
  bool all = false;
  std::uint64_t seed = 0;
  int threads = 0;
  std::string json;
};

int run_verify_command(const VerifyArgs& a) {
  const auto reports = unseen::verify_all(a.seed, thread_count(a.threads));
  std::cout << unseen::verification_table(reports);
  const std::string json = unseen::verification_json(reports, a.seed);
  if (!a.json.empty()) emit(json, a.json);
  for (const auto& r : reports) {
    if (!r.pass) return kExitVerify;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Predict the number of unseen species in a future sample"};
  app.set_version_flag("--version", std::string(unseen::kVersion));
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();

  EstimateArgs est;
  auto* estimate = app.add_subcommand("estimate", "Predict unseen species from a histogram or corpus");
  estimate->add_option("--hist", est.hist, "Histogram CSV (frequency,count)");
  estimate->add_option("--corpus", est.corpus, "Text corpus to tokenize");
  estimate->add_option("--lowercase", est.lowercase, "Lowercase corpus tokens");
  estimate->add_option("--t", est.t, "Extrapolation ratio m/n")->required();
  estimate->add_option("--scheme", est.scheme, "gt, poisson, binomial-et, binomial-opt, hyper-poisson");
  estimate->add_option("--clamp", est.clamp, "Clip the prediction to [0, t n]");
  estimate->add_option("--baselines", est.baselines,
                       "Comma-separated baselines: chao-lee, ace, jackknife1..5, scl, empirical")
      ->delimiter(',');
  estimate->add_option("--smoothing", est.smoothing, "Custom smoothing pmf CSV (ell,prob)");
  estimate->add_flag("--strict-scheme", est.strict_scheme, "Fail instead of falling back to GT at t <= 1");
  estimate->add_option("--format", est.format, "text or json");
  estimate->add_option("--out", est.out, "Output file (stdout when empty)");

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Draw one old/new sample pair and count unseen");
  simulate->add_option("--pop", sim.pop, "Population recipe, e.g. uniform:100")->required();
  simulate->add_option("--model", sim.model, "multinomial, poisson, hypergeometric, bernoulli");
  simulate->add_option("--n", sim.n, "Old sample size")->required();
  simulate->add_option("--m", sim.m, "New sample size");
  simulate->add_option("--seed", sim.seed, "Random seed")->required();
  simulate->add_option("--format", sim.format, "text or json");
  simulate->add_option("--out", sim.out, "Output file (stdout when empty)");
  simulate->add_option("--hist-out", sim.hist_out, "Write the old-sample histogram CSV here");

  NmseArgs nm;
  auto* nmse = app.add_subcommand("nmse", "Monte-Carlo NMSE of estimators");
  nmse->add_option("--pop", nm.pop, "Population recipe")->required();
  nmse->add_option("--model", nm.model, "multinomial, poisson, hypergeometric, bernoulli");
  nmse->add_option("--n", nm.n, "Sample size")->required();
  nmse->add_option("--t", nm.t_grid, "Comma-separated t grid")->required()->delimiter(',');
  nmse->add_option("--estimator,--estimators", nm.estimators, "Comma-separated estimator ids")
      ->delimiter(',');
  nmse->add_option("--trials", nm.trials, "Monte-Carlo trials");
  nmse->add_option("--seed", nm.seed, "Master seed")->required();
  nmse->add_option("--clamp", nm.clamp, "Clip SGT/GT predictions to [0, t n]");
  nmse->add_option("--threads", nm.threads, "Worker threads (0: UNSEEN_THREADS or all cores)");
  nmse->add_option("--format", nm.format, "csv or json");
  nmse->add_option("--out", nm.out, "Output file (stdout when empty)");

  CurveArgs cv;
  auto* curve = app.add_subcommand("curve", "Species discovery curve");
  curve->add_option("--pop", cv.pop, "Population recipe (synthetic source)");
  curve->add_option("--model", cv.model, "Sampling model for --pop");
  curve->add_option("--corpus", cv.corpus, "Text corpus (real-data source)");
  curve->add_option("--lowercase", cv.lowercase, "Lowercase corpus tokens");
  curve->add_option("--mode", cv.mode, "Corpus subsampling: random or consecutive");
  curve->add_option("--n", cv.n, "Observed sample size");
  curve->add_option("--fraction", cv.fraction, "Observed fraction of the corpus");
  curve->add_option("--t", cv.t_grid, "Comma-separated t grid")->required()->delimiter(',');
  curve->add_option("--estimator,--estimators", cv.estimators, "Comma-separated estimator ids")
      ->delimiter(',');
  curve->add_option("--trials", cv.trials, "Trials");
  curve->add_option("--seed", cv.seed, "Master seed")->required();
  curve->add_option("--clamp", cv.clamp, "Clip SGT/GT predictions to [0, t n]");
  curve->add_option("--threads", cv.threads, "Worker threads (0: UNSEEN_THREADS or all cores)");
  curve->add_option("--format", cv.format, "csv or json");
  curve->add_option("--out", cv.out, "Output file (stdout when empty)");

  IngestArgs ing;
  auto* ingest = app.add_subcommand("ingest", "Tokenize a corpus into a histogram");
  ingest->add_option("--corpus", ing.corpus, "Text corpus")->required();
  ingest->add_option("--lowercase", ing.lowercase, "Lowercase tokens");
  ingest->add_option("--out", ing.out, "Histogram CSV output (stdout when empty)");
  ingest->add_option("--counts-out", ing.counts_out, "Per-word counts CSV (symbol,weight)");

  VerifyArgs ver;
  auto* verify = app.add_subcommand("verify", "Run the numeric identity and bound checks");
  verify->add_flag("--all", ver.all, "Run the full grid (the only grid)");
  verify->add_option("--seed", ver.seed, "Master seed for Monte-Carlo checks")->required();
  verify->add_option("--threads", ver.threads, "Worker threads (0: UNSEEN_THREADS or all cores)");
  verify->add_option("--json", ver.json, "Write the JSON report here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  try {
    if (*estimate) return run_estimate_command(est);
    if (*simulate) return run_simulate_command(sim);
    if (*nmse) return run_nmse_command(nm);
    if (*curve) return run_curve_command(cv);
    if (*ingest) return run_ingest_command(ing);
    if (*verify) return run_verify_command(ver);
  } catch (const unseen::InvalidArgument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const unseen::SchemeError& e) {
    std::cerr << "error: " << e.what() << " (use --scheme gt, or drop --strict-scheme to fall back to GT)\n";
    return kExitScheme;
  } catch (const unseen::TrialFailure& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitTrials;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
