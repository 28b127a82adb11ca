#include "unseen/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iterator>
#include <map>
#include <numeric>
#include <random>
#include <unordered_map>

#include <json.hpp>

#include "csv_util.hpp"
#include "parallel.hpp"
#include "unseen/error.hpp"
#include "unseen/numeric.hpp"

namespace unseen {

namespace {

struct Moments {
  double mean = 0.0;
  double sd = 0.0;
  std::uint64_t count = 0;
};

// Welford in long double so means of 10^5 squared errors stay exact enough.
Moments moments(const std::vector<double>& values) {
  Moments m;
  long double mean = 0.0L;
  long double m2 = 0.0L;
  for (double v : values) {
    ++m.count;
    const long double delta = v - mean;
    mean += delta / static_cast<long double>(m.count);
    m2 += delta * (v - mean);
  }
  m.mean = static_cast<double>(mean);
  m.sd = m.count > 1 ? static_cast<double>(std::sqrt(m2 / static_cast<long double>(m.count - 1)))
                     : 0.0;
  return m;
}

void check_failure_rate(const std::string& estimator, double t, std::uint64_t failures,
                        std::uint64_t trials, const std::string& first_error) {
  if (failures * 10 > trials) {
    throw TrialFailure("estimator '" + estimator + "' failed in " + std::to_string(failures) +
                       " of " + std::to_string(trials) + " trials at t = " + format_double(t) +
                       (first_error.empty() ? "" : ": " + first_error));
  }
}

std::string warning_summary(const std::string& estimator, double t, const std::string& message,
                            std::uint64_t count, std::uint64_t trials) {
  return estimator + " at t = " + format_double(t) + ": " + message + " (" + std::to_string(count) +
         " of " + std::to_string(trials) + " trials)";
}

bool is_word_code_point(std::uint32_t cp) {
  if (cp < 0x80) {
    return (cp >= '0' && cp <= '9') || (cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z');
  }
  if (cp >= 0xC0 && cp <= 0x24F) return cp != 0xD7 && cp != 0xF7;
  if (cp >= 0x370 && cp <= 0x3FF) return cp != 0x37E && cp != 0x387;
  if (cp >= 0x400 && cp <= 0x52F) return cp < 0x482 || cp > 0x489;
  if (cp >= 0x3040 && cp <= 0x30FF) return cp != 0x30A0 && cp != 0x30FB;
  if (cp >= 0x3400 && cp <= 0x9FFF) return true;
  return cp >= 0xAC00 && cp <= 0xD7A3;
}

std::string json_string(const std::string& s) { return nlohmann::json(s).dump(); }

std::string json_number(double v) { return std::isfinite(v) ? format_double(v) : "null"; }

std::string json_number_list(const std::vector<double>& values) {
  std::string out = "[";
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out += ", ";
    out += json_number(values[i]);
  }
  return out + "]";
}

std::string json_string_list(const std::vector<std::string>& values) {
  std::string out = "[";
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out += ", ";
    out += json_string(values[i]);
  }
  return out + "]";
}

std::string json_document(const std::vector<std::pair<std::string, std::string>>& config,
                          const std::vector<std::string>& rows) {
  std::string out = "{\n  \"config\": {\n";
  for (std::size_t i = 0; i < config.size(); ++i) {
    out += "    " + json_string(config[i].first) + ": " + config[i].second;
    out += i + 1 < config.size() ? ",\n" : "\n";
  }
  out += "  },\n  \"rows\": [";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out += i == 0 ? "\n    " : ",\n    ";
    out += rows[i];
  }
  out += rows.empty() ? "]\n}\n" : "\n  ]\n}\n";
  return out;
}

void validate_grid(const std::vector<double>& t_grid, bool allow_zero) {
  if (t_grid.empty()) {
    throw InvalidArgument("t grid must not be empty");
  }
  for (double t : t_grid) {
    if (!std::isfinite(t) || t < 0.0 || (!allow_zero && t == 0.0)) {
      throw InvalidArgument(std::string("t values must be finite and ") +
                            (allow_zero ? ">= 0" : "> 0"));
    }
  }
}

std::vector<EstimatorId> parse_estimators(const std::vector<std::string>& names) {
  if (names.empty()) {
    throw InvalidArgument("estimator list must not be empty");
  }
  std::vector<EstimatorId> ids;
  for (const auto& name : names) ids.push_back(EstimatorId::parse(name));
  return ids;
}

}  // namespace

std::string EstimatorId::name() const {
  switch (family) {
    case Family::GoodToulmin:
      return "gt";
    case Family::Scheme:
      return std::string(scheme_name(scheme));
    case Family::Baseline:
      return baseline.name();
    case Family::ConstHalf:
      return "const-half";
    case Family::Oracle:
      return "oracle";
  }
  return "unknown";
}

EstimatorId EstimatorId::parse(std::string_view name) {
  EstimatorId id;
  if (name == "gt") {
    id.family = Family::GoodToulmin;
  } else if (name == "const-half") {
    id.family = Family::ConstHalf;
  } else if (name == "oracle") {
    id.family = Family::Oracle;
  } else if (name == "poisson" || name == "binomial-et" || name == "binomial-opt" ||
             name == "hyper-poisson") {
    id.family = Family::Scheme;
    id.scheme = parse_scheme(name);
  } else {
    try {
      id.baseline = BaselineKind::parse(name);
    } catch (const InvalidArgument&) {
      throw InvalidArgument("unknown estimator '" + std::string(name) + "'");
    }
    id.family = Family::Baseline;
  }
  return id;
}

EstimatorOutput evaluate_estimator(const EstimatorId& id, const PrevalenceHistogram& hist, double t,
                                   bool clamp, std::uint64_t n, double truth) {
  if (t == 0.0) {
    return {};
  }
  switch (id.family) {
    case EstimatorId::Family::GoodToulmin: {
      double v = good_toulmin(hist, t);
      if (clamp) v = std::clamp(v, 0.0, t * static_cast<double>(hist.sample_size()));
      return {v, std::nullopt};
    }
    case EstimatorId::Family::Scheme: {
      const UnseenEstimate e = estimate_unseen(hist, t, id.scheme, clamp);
      return {e.value, e.empty_input ? std::optional<std::string>("empty input") : std::nullopt};
    }
    case EstimatorId::Family::Baseline: {
      BaselineResult r = baseline_unseen(hist, t, id.baseline);
      return {r.value, std::move(r.warning)};
    }
    case EstimatorId::Family::ConstHalf:
      return {static_cast<double>(n) * t / 2.0, std::nullopt};
    case EstimatorId::Family::Oracle:
      return {truth, std::nullopt};
  }
  throw InvalidArgument("unhandled estimator");
}

NmseTable run_nmse(const ExperimentConfig& config) {
  if (config.n == 0) throw InvalidArgument("n must be >= 1");
  if (config.trials == 0) throw InvalidArgument("trials must be >= 1");
  validate_grid(config.t_grid, false);
  const std::vector<EstimatorId> ids = parse_estimators(config.estimators);
  const PopulationSpec spec = PopulationSpec::parse(config.population);
  const Population pop = realize(spec, config.seed, population_kind_for(config.model));
  const double mass = pop.mass();

  const std::size_t grid = config.t_grid.size();
  const std::size_t width = ids.size();
  const std::uint64_t cells = config.trials * grid;

  struct Cell {
    std::optional<double> squared_error;
    std::optional<std::string> message;  // warning, or error when squared_error is empty
    double estimate = 0.0;
    double truth = 0.0;
    double seconds = 0.0;
  };
  std::vector<Cell> results(cells * width);

  detail::parallel_for(cells, config.threads, [&](std::uint64_t cell) {
    const std::uint64_t trial = cell / grid;
    const std::size_t ti = cell % grid;
    const double t = config.t_grid[ti];
    const auto m = static_cast<std::uint64_t>(std::llround(t * static_cast<double>(config.n)));
    const SampledCounts counts =
        sample(pop, config.model, config.n, m, derive_seed(config.seed, trial, ti));
    const PrevalenceHistogram hist = PrevalenceHistogram::from_counts(counts.old_counts);
    const double truth = static_cast<double>(true_unseen(counts.old_counts, counts.new_counts));
    const double norm = static_cast<double>(config.n) * t * mass;
    for (std::size_t e = 0; e < width; ++e) {
      Cell& out = results[cell * width + e];
      out.truth = truth;
      const auto start = std::chrono::steady_clock::now();
      try {
        EstimatorOutput est = evaluate_estimator(ids[e], hist, t, config.clamp, config.n, truth);
        const double z = (est.value - truth) / norm;
        out.estimate = est.value;
        out.squared_error = z * z;
        out.message = std::move(est.warning);
      } catch (const Error& err) {
        out.message = err.what();
      }
      out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
  });

  NmseTable table;
  for (std::size_t e = 0; e < width; ++e) {
    const std::string name = ids[e].name();
    for (std::size_t ti = 0; ti < grid; ++ti) {
      std::vector<double> errors;
      errors.reserve(config.trials);
      std::uint64_t failures = 0;
      std::string first_error;
      std::map<std::string, std::uint64_t> warnings;
      for (std::uint64_t trial = 0; trial < config.trials; ++trial) {
        const Cell& c = results[(trial * grid + ti) * width + e];
        if (c.squared_error) {
          errors.push_back(*c.squared_error);
          if (c.message) ++warnings[*c.message];
        } else {
          ++failures;
          if (first_error.empty() && c.message) first_error = *c.message;
        }
      }
      const double t = config.t_grid[ti];
      check_failure_rate(name, t, failures, config.trials, first_error);
      if (failures > 0) {
        table.warnings.push_back(warning_summary(name, t, "failed: " + first_error, failures,
                                                 config.trials));
      }
      for (const auto& [message, count] : warnings) {
        table.warnings.push_back(warning_summary(name, t, message, count, config.trials));
      }
      const Moments mo = moments(errors);
      NmseRow row;
      row.estimator = name;
      row.model = std::string(model_name(config.model));
      row.population = config.population;
      row.n = config.n;
      row.t = t;
      row.trials = config.trials;
      row.nmse = mo.mean;
      row.nmse_se = mo.count > 0 ? mo.sd / std::sqrt(static_cast<double>(mo.count)) : 0.0;
      table.rows.push_back(std::move(row));
    }
  }
  if (config.keep_records) {
    for (std::uint64_t cell = 0; cell < cells; ++cell) {
      for (std::size_t e = 0; e < width; ++e) {
        const Cell& c = results[cell * width + e];
        if (!c.squared_error) continue;
        table.records.push_back({cell / grid, config.t_grid[cell % grid], ids[e].name(), c.estimate,
                                 c.truth, *c.squared_error, c.seconds});
      }
    }
  }
  return table;
}

std::vector<std::uint64_t> Corpus::counts() const {
  std::vector<std::uint64_t> out(vocabulary.size(), 0);
  for (std::uint32_t token : tokens) ++out[token];
  return out;
}

Corpus ingest_corpus(std::string_view text, bool lowercase) {
  Corpus corpus;
  std::unordered_map<std::string, std::uint32_t> index;
  std::string current;
  auto flush = [&]() {
    if (current.empty()) return;
    auto [it, inserted] = index.try_emplace(current, static_cast<std::uint32_t>(corpus.vocabulary.size()));
    if (inserted) corpus.vocabulary.push_back(current);
    corpus.tokens.push_back(it->second);
    current.clear();
  };
  const auto* bytes = reinterpret_cast<const unsigned char*>(text.data());
  std::size_t i = 0;
  while (i < text.size()) {
    const unsigned char lead = bytes[i];
    std::uint32_t cp = 0;
    std::size_t length = 1;
    std::uint32_t minimum = 0;
    if (lead < 0x80) {
      cp = lead;
    } else if ((lead >> 5) == 0x6) {
      cp = lead & 0x1F;
      length = 2;
      minimum = 0x80;
    } else if ((lead >> 4) == 0xE) {
      cp = lead & 0x0F;
      length = 3;
      minimum = 0x800;
    } else if ((lead >> 3) == 0x1E) {
      cp = lead & 0x07;
      length = 4;
      minimum = 0x10000;
    } else {
      throw InvalidArgument("invalid UTF-8 lead byte at offset " + std::to_string(i));
    }
    if (i + length > text.size()) {
      throw InvalidArgument("truncated UTF-8 sequence at offset " + std::to_string(i));
    }
    for (std::size_t k = 1; k < length; ++k) {
      if ((bytes[i + k] >> 6) != 0x2) {
        throw InvalidArgument("invalid UTF-8 continuation byte at offset " + std::to_string(i + k));
      }
      cp = (cp << 6) | (bytes[i + k] & 0x3F);
    }
    if (cp < minimum || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
      throw InvalidArgument("invalid UTF-8 code point at offset " + std::to_string(i));
    }
    if (is_word_code_point(cp)) {
      if (length == 1) {
        char c = static_cast<char>(lead);
        if (lowercase && c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
        current.push_back(c);
      } else {
        current.append(text.substr(i, length));
      }
    } else {
      flush();
    }
    i += length;
  }
  flush();
  return corpus;
}

Corpus ingest_corpus_file(const std::string& path, bool lowercase) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw InvalidArgument("cannot open corpus file '" + path + "'");
  }
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return ingest_corpus(text, lowercase);
}

Corpus corpus_from_counts(const std::map<std::string, std::uint64_t>& counts) {
  Corpus corpus;
  for (const auto& [symbol, count] : counts) {
    if (count == 0) continue;
    const auto id = static_cast<std::uint32_t>(corpus.vocabulary.size());
    corpus.vocabulary.push_back(symbol);
    corpus.tokens.insert(corpus.tokens.end(), count, id);
  }
  return corpus;
}

std::string_view subsample_mode_name(SubsampleMode mode) {
  return mode == SubsampleMode::WithoutReplacement ? "random" : "consecutive";
}

SubsampleMode parse_subsample_mode(std::string_view name) {
  if (name == "random") return SubsampleMode::WithoutReplacement;
  if (name == "consecutive") return SubsampleMode::Consecutive;
  throw InvalidArgument("unknown subsample mode '" + std::string(name) +
                        "', expected random or consecutive");
}

Subsample subsample(const Corpus& corpus, std::uint64_t n, SubsampleMode mode, std::uint64_t seed) {
  if (n > corpus.tokens.size()) {
    throw InvalidArgument("subsample size " + std::to_string(n) + " exceeds the " +
                          std::to_string(corpus.tokens.size()) + " available tokens");
  }
  std::vector<std::uint32_t> order = corpus.tokens;
  if (mode == SubsampleMode::WithoutReplacement) {
    std::mt19937_64 rng(seed);
    // Fisher-Yates written out so the permutation is fixed across standard libraries.
    for (std::size_t i = order.size(); i > 1; --i) {
      const std::uint64_t j = rng() % i;
      std::swap(order[i - 1], order[j]);
    }
  }
  Subsample out;
  out.old_counts.assign(corpus.vocabulary.size(), 0);
  for (std::uint64_t i = 0; i < n; ++i) ++out.old_counts[order[i]];
  out.remainder.assign(order.begin() + static_cast<std::ptrdiff_t>(n), order.end());
  return out;
}

CurveSamples run_curve_trials(const CurveConfig& config) {
  if (config.trials == 0) throw InvalidArgument("trials must be >= 1");
  validate_grid(config.t_grid, true);
  const std::vector<EstimatorId> ids = parse_estimators(config.estimators);

  std::optional<Population> pop;
  if (config.source == CurveConfig::Source::Synthetic) {
    if (config.n == 0) throw InvalidArgument("n must be >= 1");
    pop = realize(PopulationSpec::parse(config.population), config.seed,
                  population_kind_for(config.model));
  } else if (config.corpus == nullptr) {
    throw InvalidArgument("corpus curve needs an ingested corpus");
  } else if (config.n > config.corpus->tokens.size()) {
    throw InvalidArgument("n exceeds the corpus size");
  }

  const std::size_t grid = config.t_grid.size();
  CurveSamples out;
  out.estimators = config.estimators;
  out.t_grid = config.t_grid;
  out.prediction.assign(ids.size(), std::vector<std::vector<std::optional<double>>>(
                                        grid, std::vector<std::optional<double>>(config.trials)));
  out.truth.assign(grid, std::vector<std::optional<double>>(config.trials));
  std::vector<std::vector<std::optional<std::string>>> messages(
      ids.size() * grid, std::vector<std::optional<std::string>>(config.trials));

  std::vector<std::uint64_t> m_of(grid);
  for (std::size_t ti = 0; ti < grid; ++ti) {
    m_of[ti] = static_cast<std::uint64_t>(std::llround(config.t_grid[ti] * static_cast<double>(config.n)));
  }

  detail::parallel_for(config.trials, config.threads, [&](std::uint64_t trial) {
    const std::uint64_t seed = derive_seed(config.seed, trial);
    auto record = [&](std::size_t ti, const PrevalenceHistogram& hist, double observed,
                      std::optional<double> unseen) {
      out.truth[ti][trial] = unseen ? std::optional<double>(observed + *unseen) : std::nullopt;
      for (std::size_t e = 0; e < ids.size(); ++e) {
        auto& message = messages[e * grid + ti][trial];
        try {
          EstimatorOutput est = evaluate_estimator(ids[e], hist, config.t_grid[ti], config.clamp,
                                                   config.n, unseen.value_or(0.0));
          if (ids[e].family == EstimatorId::Family::Oracle && !unseen) {
            throw InvalidArgument("oracle undefined where the truth is unvalidatable");
          }
          out.prediction[e][ti][trial] = observed + est.value;
          message = std::move(est.warning);
        } catch (const Error& err) {
          message = std::string("error: ") + err.what();
        }
      }
    };

    if (pop) {
      // The same seed for every t: the old sample is drawn first and is identical.
      for (std::size_t ti = 0; ti < grid; ++ti) {
        const SampledCounts counts = sample(*pop, config.model, config.n, m_of[ti], seed);
        const PrevalenceHistogram hist = PrevalenceHistogram::from_counts(counts.old_counts);
        record(ti, hist, static_cast<double>(hist.observed_count()),
               static_cast<double>(true_unseen(counts.old_counts, counts.new_counts)));
      }
      return;
    }

    const Subsample sub = subsample(*config.corpus, config.n, config.mode, seed);
    const PrevalenceHistogram hist = PrevalenceHistogram::from_counts(sub.old_counts);
    const double observed = static_cast<double>(hist.observed_count());
    // Walk the held-out stream once, reading off the unseen count at each m.
    std::vector<std::size_t> by_m(grid);
    std::iota(by_m.begin(), by_m.end(), 0);
    std::sort(by_m.begin(), by_m.end(), [&](std::size_t a, std::size_t b) { return m_of[a] < m_of[b]; });
    std::vector<char> fresh(config.corpus->vocabulary.size(), 0);
    std::uint64_t position = 0;
    std::uint64_t unseen = 0;
    for (std::size_t ti : by_m) {
      if (m_of[ti] > sub.remainder.size()) {
        record(ti, hist, observed, std::nullopt);
        continue;
      }
      for (; position < m_of[ti]; ++position) {
        const std::uint32_t token = sub.remainder[position];
        if (sub.old_counts[token] == 0 && !fresh[token]) {
          fresh[token] = 1;
          ++unseen;
        }
      }
      record(ti, hist, observed, static_cast<double>(unseen));
    }
  });

  for (std::size_t e = 0; e < ids.size(); ++e) {
    for (std::size_t ti = 0; ti < grid; ++ti) {
      std::map<std::string, std::uint64_t> counts;
      for (const auto& message : messages[e * grid + ti]) {
        if (message) ++counts[*message];
      }
      for (const auto& [message, count] : counts) {
        out.warnings.push_back(
            warning_summary(config.estimators[e], config.t_grid[ti], message, count, config.trials));
      }
    }
  }
  return out;
}

CurveTable summarize_curve(const CurveSamples& samples) {
  CurveTable table;
  table.warnings = samples.warnings;
  for (std::size_t e = 0; e < samples.estimators.size(); ++e) {
    for (std::size_t ti = 0; ti < samples.t_grid.size(); ++ti) {
      const auto& cells = samples.prediction[e][ti];
      std::vector<double> values;
      for (const auto& v : cells) {
        if (v) values.push_back(*v);
      }
      check_failure_rate(samples.estimators[e], samples.t_grid[ti], cells.size() - values.size(),
                         cells.size(), "");
      const Moments mo = moments(values);
      CurveRow row;
      row.estimator = samples.estimators[e];
      row.t = samples.t_grid[ti];
      row.mean_prediction = mo.mean;
      row.stddev = mo.sd;
      const auto& truths = samples.truth[ti];
      if (std::all_of(truths.begin(), truths.end(), [](const auto& v) { return v.has_value(); })) {
        std::vector<double> tv;
        for (const auto& v : truths) tv.push_back(*v);
        row.true_value = moments(tv).mean;
      }
      table.rows.push_back(std::move(row));
    }
  }
  return table;
}

CurveTable discovery_curve(const CurveConfig& config) {
  return summarize_curve(run_curve_trials(config));
}

void write_nmse_csv(std::ostream& out, const std::vector<NmseRow>& rows) {
  out << "estimator,model,population,n,t,trials,nmse,nmse_se\n";
  for (const auto& r : rows) {
    out << detail::quote_field(r.estimator) << ',' << detail::quote_field(r.model) << ','
        << detail::quote_field(r.population) << ',' << r.n << ',' << format_double(r.t) << ','
        << r.trials << ',' << format_double(r.nmse) << ',' << format_double(r.nmse_se) << '\n';
  }
}

std::vector<NmseRow> read_nmse_csv(std::istream& in) {
  detail::expect_header(in, "estimator,model,population,n,t,trials,nmse,nmse_se");
  std::vector<NmseRow> rows;
  std::string line;
  while (detail::next_line(in, line)) {
    if (line.empty()) continue;
    const auto f = detail::split_quoted_fields(line);
    if (f.size() != 8) {
      throw InvalidArgument("NMSE CSV row has " + std::to_string(f.size()) + " fields, expected 8");
    }
    rows.push_back({f[0], f[1], f[2], parse_uint(f[3]), parse_double(f[4]), parse_uint(f[5]),
                    parse_double(f[6]), parse_double(f[7])});
  }
  return rows;
}

void write_curve_csv(std::ostream& out, const std::vector<CurveRow>& rows) {
  out << "estimator,t,mean_prediction,stddev,true_value\n";
  for (const auto& r : rows) {
    out << detail::quote_field(r.estimator) << ',' << format_double(r.t) << ','
        << format_double(r.mean_prediction) << ',' << format_double(r.stddev) << ','
        << (r.true_value ? format_double(*r.true_value) : "") << '\n';
  }
}

std::vector<CurveRow> read_curve_csv(std::istream& in) {
  detail::expect_header(in, "estimator,t,mean_prediction,stddev,true_value");
  std::vector<CurveRow> rows;
  std::string line;
  while (detail::next_line(in, line)) {
    if (line.empty()) continue;
    const auto f = detail::split_quoted_fields(line);
    if (f.size() != 5) {
      throw InvalidArgument("curve CSV row has " + std::to_string(f.size()) + " fields, expected 5");
    }
    CurveRow row{f[0], parse_double(f[1]), parse_double(f[2]), parse_double(f[3]), std::nullopt};
    if (!f[4].empty()) row.true_value = parse_double(f[4]);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string nmse_json(const ExperimentConfig& config, const std::vector<NmseRow>& rows) {
  const std::vector<std::pair<std::string, std::string>> echo = {
      {"tool", json_string("unseen")},
      {"version", json_string(std::string(kVersion))},
      {"command", json_string("nmse")},
      {"model", json_string(std::string(model_name(config.model)))},
      {"population", json_string(config.population)},
      {"n", std::to_string(config.n)},
      {"t_grid", json_number_list(config.t_grid)},
      {"estimators", json_string_list(config.estimators)},
      {"trials", std::to_string(config.trials)},
      {"seed", std::to_string(config.seed)},
      {"clamp", config.clamp ? "true" : "false"},
  };
  std::vector<std::string> lines;
  for (const auto& r : rows) {
    lines.push_back("{\"estimator\": " + json_string(r.estimator) + ", \"model\": " +
                    json_string(r.model) + ", \"population\": " + json_string(r.population) +
                    ", \"n\": " + std::to_string(r.n) + ", \"t\": " + json_number(r.t) +
                    ", \"trials\": " + std::to_string(r.trials) + ", \"nmse\": " +
                    json_number(r.nmse) + ", \"nmse_se\": " + json_number(r.nmse_se) + "}");
  }
  return json_document(echo, lines);
}

std::string curve_json(const CurveConfig& config, const std::vector<CurveRow>& rows) {
  std::vector<std::pair<std::string, std::string>> echo = {
      {"tool", json_string("unseen")},
      {"version", json_string(std::string(kVersion))},
      {"command", json_string("curve")},
  };
  if (config.source == CurveConfig::Source::Synthetic) {
    echo.emplace_back("source", json_string("synthetic"));
    echo.emplace_back("model", json_string(std::string(model_name(config.model))));
    echo.emplace_back("population", json_string(config.population));
  } else {
    echo.emplace_back("source", json_string("corpus"));
    echo.emplace_back("corpus", json_string(config.corpus_path));
    echo.emplace_back("mode", json_string(std::string(subsample_mode_name(config.mode))));
  }
  echo.emplace_back("n", std::to_string(config.n));
  echo.emplace_back("t_grid", json_number_list(config.t_grid));
  echo.emplace_back("estimators", json_string_list(config.estimators));
  echo.emplace_back("trials", std::to_string(config.trials));
  echo.emplace_back("seed", std::to_string(config.seed));
  echo.emplace_back("clamp", config.clamp ? "true" : "false");
  std::vector<std::string> lines;
  for (const auto& r : rows) {
    lines.push_back("{\"estimator\": " + json_string(r.estimator) + ", \"t\": " + json_number(r.t) +
                    ", \"mean_prediction\": " + json_number(r.mean_prediction) + ", \"stddev\": " +
                    json_number(r.stddev) + ", \"true_value\": " +
                    (r.true_value ? json_number(*r.true_value) : "null") + "}");
  }
  return json_document(echo, lines);
}

EstimateReport run_estimate(const PrevalenceHistogram& hist, const std::string& source, double t,
                            const std::string& scheme, bool clamp,
                            const std::vector<std::string>& baselines, bool strict_scheme,
                            const std::optional<SmoothingDistribution>& custom) {
  if (!(t > 0.0) || !std::isfinite(t)) {
    throw InvalidArgument("t must be a finite value > 0");
  }
  EstimateReport report;
  report.source = source;
  report.n = hist.sample_size();
  report.observed = hist.observed_count();
  report.t = t;
  report.clamp = clamp;
  const double ceiling = t * static_cast<double>(report.n);

  EstimateLine main;
  if (custom) {
    main.estimator = "custom";
    main.smoothing = custom->describe();
    main.value = sgt_estimate(hist, *custom, t);
    if (clamp) main.value = std::clamp(main.value, 0.0, ceiling);
  } else if (scheme == "gt") {
    main.estimator = "gt";
    main.smoothing = SmoothingDistribution::infinite().describe();
    main.value = good_toulmin(hist, t);
    if (clamp) main.value = std::clamp(main.value, 0.0, ceiling);
  } else {
    const SmoothingScheme parsed = parse_scheme(scheme);
    main.estimator = scheme;
    if (strict_scheme && !hist.empty()) {
      auto_params(report.n, t, parsed);
    }
    const UnseenEstimate e = estimate_unseen(hist, t, parsed, clamp);
    main.value = e.value;
    if (e.smoothing) main.smoothing = e.smoothing->describe();
    if (e.used_good_toulmin) {
      main.smoothing = SmoothingDistribution::infinite().describe();
      main.warnings.push_back("t <= 1: smoothing undefined, Good-Toulmin used");
    }
  }
  if (hist.empty()) {
    main.warnings.push_back("empty input: no samples observed");
  }
  report.lines.push_back(std::move(main));

  for (const auto& name : baselines) {
    const BaselineKind kind = BaselineKind::parse(name);
    EstimateLine line;
    line.estimator = kind.name();
    const BaselineResult r = baseline_unseen(hist, t, kind);
    line.value = r.value;
    if (r.warning) line.warnings.push_back(*r.warning);
    report.lines.push_back(std::move(line));
  }
  return report;
}

std::string estimate_text(const EstimateReport& report) {
  std::string out;
  out += "n\t" + std::to_string(report.n) + "\n";
  out += "observed\t" + std::to_string(report.observed) + "\n";
  out += "t\t" + format_double(report.t) + "\n";
  for (const auto& line : report.lines) {
    out += line.estimator + "\t" + format_double(line.value);
    if (!line.smoothing.empty()) out += "\t" + line.smoothing;
    out += "\n";
    for (const auto& w : line.warnings) out += "warning\t" + line.estimator + ": " + w + "\n";
  }
  return out;
}

std::string estimate_json(const EstimateReport& report) {
  std::string out = "{\n  \"tool\": \"unseen\",\n  \"version\": " +
                    json_string(std::string(kVersion)) + ",\n  \"command\": \"estimate\",\n";
  out += "  \"source\": " + json_string(report.source) + ",\n";
  out += "  \"n\": " + std::to_string(report.n) + ",\n";
  out += "  \"observed\": " + std::to_string(report.observed) + ",\n";
  out += "  \"t\": " + json_number(report.t) + ",\n";
  out += "  \"clamp\": " + std::string(report.clamp ? "true" : "false") + ",\n";
  out += "  \"estimates\": [";
  for (std::size_t i = 0; i < report.lines.size(); ++i) {
    const auto& line = report.lines[i];
    out += i == 0 ? "\n    " : ",\n    ";
    out += "{\"estimator\": " + json_string(line.estimator) + ", \"value\": " +
           json_number(line.value) + ", \"smoothing\": " +
           (line.smoothing.empty() ? std::string("null") : json_string(line.smoothing)) +
           ", \"warnings\": " + json_string_list(line.warnings) + "}";
  }
  out += report.lines.empty() ? "]\n}\n" : "\n  ]\n}\n";
  return out;
}

SimulationReport run_simulation(const std::string& population, SamplingModel model, std::uint64_t n,
                                std::uint64_t m, std::uint64_t seed) {
  const Population pop = realize(PopulationSpec::parse(population), seed, population_kind_for(model));
  const SampledCounts counts = sample(pop, model, n, m, derive_seed(seed, 0));
  SimulationReport report;
  report.population = population;
  report.model = std::string(model_name(model));
  report.n = n;
  report.m = m;
  report.seed = seed;
  report.histogram = PrevalenceHistogram::from_counts(counts.old_counts);
  report.old_size = report.histogram.sample_size();
  report.observed = report.histogram.observed_count();
  for (std::uint64_t c : counts.new_counts) report.new_size += c;
  report.unseen = true_unseen(counts.old_counts, counts.new_counts);
  return report;
}

std::string simulation_text(const SimulationReport& report) {
  return "old_size\t" + std::to_string(report.old_size) + "\nnew_size\t" +
         std::to_string(report.new_size) + "\nobserved\t" + std::to_string(report.observed) +
         "\nunseen\t" + std::to_string(report.unseen) + "\n";
}

std::string simulation_json(const SimulationReport& report) {
  return "{\n  \"tool\": \"unseen\",\n  \"version\": " + json_string(std::string(kVersion)) +
         ",\n  \"command\": \"simulate\",\n  \"population\": " + json_string(report.population) +
         ",\n  \"model\": " + json_string(report.model) + ",\n  \"n\": " + std::to_string(report.n) +
         ",\n  \"m\": " + std::to_string(report.m) + ",\n  \"seed\": " + std::to_string(report.seed) +
         ",\n  \"old_size\": " + std::to_string(report.old_size) + ",\n  \"new_size\": " +
         std::to_string(report.new_size) + ",\n  \"observed\": " + std::to_string(report.observed) +
         ",\n  \"unseen\": " + std::to_string(report.unseen) + "\n}\n";
}

}  // namespace unseen
