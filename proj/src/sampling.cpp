#include "unseen/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>

#include "csv_util.hpp"
#include "unseen/error.hpp"
#include "unseen/numeric.hpp"

namespace unseen {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::vector<std::string> split_colon(std::string_view text) {
  std::vector<std::string> parts;
  std::string part;
  for (char c : text) {
    if (c == ':') {
      parts.push_back(part);
      part.clear();
    } else {
      part.push_back(c);
    }
  }
  parts.push_back(part);
  return parts;
}

// Fenwick tree over urn capacities supporting "find the ball at rank u".
class Urn {
 public:
  explicit Urn(const std::vector<std::uint64_t>& capacities) : tree_(capacities.size() + 1, 0) {
    for (std::size_t i = 0; i < capacities.size(); ++i) {
      add(i, static_cast<std::int64_t>(capacities[i]));
    }
    top_ = 1;
    while (top_ * 2 <= capacities.size()) top_ *= 2;
  }

  void add(std::size_t index, std::int64_t delta) {
    for (std::size_t i = index + 1; i < tree_.size(); i += i & (~i + 1)) {
      tree_[i] = static_cast<std::uint64_t>(static_cast<std::int64_t>(tree_[i]) + delta);
    }
  }

  // Symbol holding the rank-th remaining ball, 0-based.
  std::size_t find(std::uint64_t rank) const {
    std::size_t pos = 0;
    for (std::size_t step = top_; step > 0; step >>= 1) {
      if (pos + step < tree_.size() && tree_[pos + step] <= rank) {
        pos += step;
        rank -= tree_[pos];
      }
    }
    return pos;
  }

 private:
  std::vector<std::uint64_t> tree_;
  std::size_t top_ = 1;
};

void multinomial_counts(const std::vector<double>& p, std::uint64_t draws, std::mt19937_64& rng,
                        std::vector<std::uint64_t>& out) {
  std::uint64_t remaining = draws;
  double remaining_mass = 1.0;
  for (std::size_t x = 0; x < p.size() && remaining > 0; ++x) {
    if (x + 1 == p.size()) {
      out[x] = remaining;
      break;
    }
    const double share = remaining_mass > 0.0 ? std::clamp(p[x] / remaining_mass, 0.0, 1.0) : 1.0;
    std::binomial_distribution<std::uint64_t> bin(remaining, share);
    out[x] = bin(rng);
    remaining -= out[x];
    remaining_mass -= p[x];
  }
}

void poisson_counts(const std::vector<double>& p, double mean, std::mt19937_64& rng,
                    std::vector<std::uint64_t>& out) {
  if (mean <= 0.0) return;
  for (std::size_t x = 0; x < p.size(); ++x) {
    std::poisson_distribution<std::uint64_t> poi(mean * p[x]);
    out[x] = poi(rng);
  }
}

void bernoulli_counts(const std::vector<double>& p, std::uint64_t units, std::mt19937_64& rng,
                      std::vector<std::uint64_t>& out) {
  if (units == 0) return;
  for (std::size_t x = 0; x < p.size(); ++x) {
    std::binomial_distribution<std::uint64_t> bin(units, p[x]);
    out[x] = bin(rng);
  }
}

struct WeightedRows {
  std::vector<std::string> names;
  std::vector<double> weights;
};

WeightedRows read_population_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw InvalidArgument("cannot open population file '" + path + "'");
  }
  detail::expect_header(in, "symbol,weight");
  WeightedRows rows;
  std::string line;
  std::size_t line_no = 1;
  while (detail::next_line(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = detail::split_fields(line);
    if (fields.size() != 2) {
      throw InvalidArgument(path + ":" + std::to_string(line_no) + ": expected 2 fields");
    }
    const double w = parse_double(fields[1]);
    if (!(w > 0.0) || !std::isfinite(w)) {
      throw InvalidArgument(path + ":" + std::to_string(line_no) + ": weight must be > 0");
    }
    rows.names.push_back(fields[0]);
    rows.weights.push_back(w);
  }
  if (rows.weights.empty()) {
    throw InvalidArgument("population file '" + path + "' has no rows");
  }
  return rows;
}

std::vector<double> normalized(std::vector<double> w) {
  CompensatedSum<double> total;
  for (double v : w) total += v;
  for (double& v : w) v /= total.value();
  return w;
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b) {
  return splitmix64(splitmix64(splitmix64(master) ^ a) ^ (b * 0xD1B54A32D192ED03ULL));
}

std::string_view model_name(SamplingModel model) {
  switch (model) {
    case SamplingModel::Multinomial:
      return "multinomial";
    case SamplingModel::Poisson:
      return "poisson";
    case SamplingModel::Hypergeometric:
      return "hypergeometric";
    case SamplingModel::BernoulliProduct:
      return "bernoulli";
  }
  return "unknown";
}

SamplingModel parse_model(std::string_view name) {
  for (auto model : {SamplingModel::Multinomial, SamplingModel::Poisson,
                     SamplingModel::Hypergeometric, SamplingModel::BernoulliProduct}) {
    if (model_name(model) == name) return model;
  }
  throw InvalidArgument("unknown sampling model '" + std::string(name) + "'");
}

Population Population::probabilistic(std::vector<double> p) {
  if (p.empty()) {
    throw InvalidArgument("population must have at least one symbol");
  }
  CompensatedSum<double> total;
  for (double v : p) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw InvalidArgument("probabilities must be finite and > 0");
    }
    total += v;
  }
  if (std::abs(total.value() - 1.0) > 1e-12) {
    throw InvalidArgument("probabilities sum to " + format_double(total.value()) +
                          ", expected 1 within 1e-12");
  }
  Population pop;
  pop.kind_ = PopulationKind::Probabilistic;
  pop.probabilities_ = std::move(p);
  return pop;
}

Population Population::bernoulli_product(std::vector<double> p) {
  if (p.empty()) {
    throw InvalidArgument("population must have at least one species");
  }
  for (double v : p) {
    if (!(v > 0.0 && v <= 1.0)) {
      throw InvalidArgument("presence probabilities must lie in (0, 1]");
    }
  }
  Population pop;
  pop.kind_ = PopulationKind::BernoulliProduct;
  pop.probabilities_ = std::move(p);
  return pop;
}

Population Population::urn(std::vector<std::uint64_t> capacities) {
  if (capacities.empty()) {
    throw InvalidArgument("urn must have at least one symbol");
  }
  Population pop;
  pop.kind_ = PopulationKind::HypergeometricUrn;
  for (std::uint64_t r : capacities) {
    if (r == 0) {
      throw InvalidArgument("urn capacities must be >= 1");
    }
    pop.total_capacity_ += r;
  }
  pop.capacities_ = std::move(capacities);
  return pop;
}

std::size_t Population::size() const {
  return kind_ == PopulationKind::HypergeometricUrn ? capacities_.size() : probabilities_.size();
}

double Population::mass() const {
  if (kind_ != PopulationKind::BernoulliProduct) return 1.0;
  CompensatedSum<double> total;
  for (double v : probabilities_) total += v;
  return total.value();
}

void Population::set_names(std::vector<std::string> names) {
  if (names.size() != size()) {
    throw InvalidArgument("symbol name count does not match population size");
  }
  names_ = std::move(names);
}

PopulationSpec PopulationSpec::parse(std::string_view text) {
  PopulationSpec spec;
  spec.text = std::string(text);
  const auto colon = text.find(':');
  const std::string family(text.substr(0, colon));
  if (family == "file") {
    if (colon == std::string_view::npos || colon + 1 == text.size()) {
      throw InvalidArgument("population 'file:' needs a path");
    }
    spec.family = Family::File;
    spec.path = std::string(text.substr(colon + 1));
    return spec;
  }
  const auto parts = split_colon(text);
  auto arity = [&](std::size_t expected, const char* usage) {
    if (parts.size() != expected) {
      throw InvalidArgument("bad population '" + spec.text + "', expected " + usage);
    }
  };
  try {
    if (family == "uniform") {
      arity(2, "uniform:K");
      spec.family = Family::Uniform;
      spec.k = parse_uint(parts[1]);
    } else if (family == "twostep") {
      arity(2, "twostep:K");
      spec.family = Family::TwoStep;
      spec.k = parse_uint(parts[1]);
      if (spec.k % 2 != 0) throw InvalidArgument("twostep needs an even K");
    } else if (family == "zipf") {
      if (parts.size() == 3) {
        spec.exponent = parse_double(parts[1]);
        spec.k = parse_uint(parts[2]);
      } else {
        arity(4, "zipf:S:SHIFT:K");
        spec.exponent = parse_double(parts[1]);
        spec.shift = parse_double(parts[2]);
        spec.k = parse_uint(parts[3]);
      }
      spec.family = Family::Zipf;
      if (!(spec.exponent > 0.0)) throw InvalidArgument("zipf exponent must be > 0");
      if (!(spec.shift >= 0.0)) throw InvalidArgument("zipf shift must be >= 0");
    } else if (family == "dirichlet") {
      arity(3, "dirichlet:ALPHA:K");
      spec.family = Family::Dirichlet;
      spec.alpha = parse_double(parts[1]);
      spec.k = parse_uint(parts[2]);
      if (!(spec.alpha > 0.0)) throw InvalidArgument("dirichlet alpha must be > 0");
    } else if (family == "urn") {
      arity(3, "urn:R:K");
      spec.family = Family::Urn;
      spec.capacity = parse_uint(parts[1]);
      spec.k = parse_uint(parts[2]);
      if (spec.capacity == 0) throw InvalidArgument("urn capacity must be >= 1");
    } else if (family == "incidence") {
      arity(3, "incidence:P:K");
      spec.family = Family::Incidence;
      spec.presence = parse_double(parts[1]);
      spec.k = parse_uint(parts[2]);
      if (!(spec.presence > 0.0 && spec.presence <= 1.0)) {
        throw InvalidArgument("incidence probability must lie in (0, 1]");
      }
    } else {
      throw InvalidArgument("unknown population family '" + family + "'");
    }
  } catch (const InvalidArgument& e) {
    throw InvalidArgument("bad population '" + spec.text + "': " + e.what());
  }
  if (spec.k == 0) {
    throw InvalidArgument("bad population '" + spec.text + "': K must be >= 1");
  }
  return spec;
}

PopulationKind population_kind_for(SamplingModel model) {
  switch (model) {
    case SamplingModel::Hypergeometric:
      return PopulationKind::HypergeometricUrn;
    case SamplingModel::BernoulliProduct:
      return PopulationKind::BernoulliProduct;
    default:
      return PopulationKind::Probabilistic;
  }
}

Population realize(const PopulationSpec& spec, std::uint64_t seed, PopulationKind kind) {
  using Family = PopulationSpec::Family;
  auto mismatch = [&]() {
    return InvalidArgument("population '" + spec.text + "' cannot be used by this sampling model");
  };
  if (spec.family == Family::File) {
    WeightedRows rows = read_population_file(spec.path);
    Population pop;
    if (kind == PopulationKind::Probabilistic) {
      pop = Population::probabilistic(normalized(std::move(rows.weights)));
    } else if (kind == PopulationKind::BernoulliProduct) {
      pop = Population::bernoulli_product(std::move(rows.weights));
    } else {
      std::vector<std::uint64_t> capacities;
      for (double w : rows.weights) {
        if (w != std::floor(w)) {
          throw InvalidArgument("urn capacities in '" + spec.path + "' must be integers");
        }
        capacities.push_back(static_cast<std::uint64_t>(w));
      }
      pop = Population::urn(std::move(capacities));
    }
    pop.set_names(std::move(rows.names));
    return pop;
  }
  if (spec.family == Family::Urn) {
    if (kind != PopulationKind::HypergeometricUrn) throw mismatch();
    return Population::urn(std::vector<std::uint64_t>(spec.k, spec.capacity));
  }
  if (spec.family == Family::Incidence) {
    if (kind != PopulationKind::BernoulliProduct) throw mismatch();
    return Population::bernoulli_product(std::vector<double>(spec.k, spec.presence));
  }
  if (kind != PopulationKind::Probabilistic) throw mismatch();

  const std::size_t k = spec.k;
  std::vector<double> weights(k);
  switch (spec.family) {
    case Family::Uniform:
      std::fill(weights.begin(), weights.end(), 1.0);
      break;
    case Family::TwoStep:
      for (std::size_t i = 0; i < k; ++i) weights[i] = i < k / 2 ? 1.0 : 3.0;
      break;
    case Family::Zipf:
      for (std::size_t i = 0; i < k; ++i) {
        weights[i] = std::pow(static_cast<double>(i + 1) + spec.shift, -spec.exponent);
      }
      break;
    case Family::Dirichlet: {
      std::mt19937_64 rng(derive_seed(seed, 0x0D1E));
      std::gamma_distribution<double> gamma(spec.alpha, 1.0);
      for (double& w : weights) w = gamma(rng);
      std::erase(weights, 0.0);
      if (weights.empty()) {
        throw NumericError("dirichlet draw underflowed for every symbol");
      }
      break;
    }
    default:
      throw mismatch();
  }
  return Population::probabilistic(normalized(std::move(weights)));
}

SampledCounts sample(const Population& pop, SamplingModel model, std::uint64_t n, std::uint64_t m,
                     std::uint64_t seed) {
  if (pop.kind() != population_kind_for(model)) {
    throw InvalidArgument("sampling model '" + std::string(model_name(model)) +
                          "' does not match the population kind");
  }
  SampledCounts out;
  out.old_counts.assign(pop.size(), 0);
  out.new_counts.assign(pop.size(), 0);
  std::mt19937_64 rng(seed);
  switch (model) {
    case SamplingModel::Multinomial:
      multinomial_counts(pop.probabilities(), n, rng, out.old_counts);
      multinomial_counts(pop.probabilities(), m, rng, out.new_counts);
      break;
    case SamplingModel::Poisson:
      poisson_counts(pop.probabilities(), static_cast<double>(n), rng, out.old_counts);
      poisson_counts(pop.probabilities(), static_cast<double>(m), rng, out.new_counts);
      break;
    case SamplingModel::BernoulliProduct:
      bernoulli_counts(pop.probabilities(), n, rng, out.old_counts);
      bernoulli_counts(pop.probabilities(), m, rng, out.new_counts);
      break;
    case SamplingModel::Hypergeometric: {
      if (n + m > pop.total_capacity()) {
        throw InvalidArgument("hypergeometric sample n + m = " + std::to_string(n + m) +
                              " exceeds urn size R = " + std::to_string(pop.total_capacity()));
      }
      Urn urn(pop.capacities());
      std::uint64_t remaining = pop.total_capacity();
      for (std::uint64_t d = 0; d < n + m; ++d, --remaining) {
        std::uniform_int_distribution<std::uint64_t> pick(0, remaining - 1);
        const std::size_t x = urn.find(pick(rng));
        urn.add(x, -1);
        ++(d < n ? out.old_counts[x] : out.new_counts[x]);
      }
      break;
    }
  }
  return out;
}

std::uint64_t true_unseen(const std::vector<std::uint64_t>& old_counts,
                          const std::vector<std::uint64_t>& new_counts) {
  if (old_counts.size() != new_counts.size()) {
    throw InvalidArgument("old and new count vectors differ in length");
  }
  std::uint64_t unseen = 0;
  for (std::size_t x = 0; x < old_counts.size(); ++x) {
    if (new_counts[x] > 0 && old_counts[x] == 0) ++unseen;
  }
  return unseen;
}

std::uint64_t true_unseen(const std::map<std::string, std::uint64_t>& old_counts,
                          const std::map<std::string, std::uint64_t>& new_counts) {
  std::uint64_t unseen = 0;
  for (const auto& [symbol, count] : new_counts) {
    if (count == 0) continue;
    const auto it = old_counts.find(symbol);
    if (it == old_counts.end() || it->second == 0) ++unseen;
  }
  return unseen;
}

namespace {

const std::vector<double>& require_probabilistic(const Population& pop) {
  if (pop.kind() != PopulationKind::Probabilistic) {
    throw InvalidArgument("Poisson-model oracles need a probabilistic population");
  }
  return pop.probabilities();
}

// Identical probabilities grouped.
std::map<double, std::uint64_t> grouped(const std::vector<double>& p) {
  std::map<double, std::uint64_t> groups;
  for (double v : p) ++groups[v];
  return groups;
}

}  // namespace

double expected_unseen_poisson(const Population& pop, std::uint64_t n, double t) {
  const auto& p = require_probabilistic(pop);
  if (!(t >= 0.0)) throw InvalidArgument("t must be >= 0");
  CompensatedSum<double> sum;
  for (const auto& [px, count] : grouped(p)) {
    const double lambda = static_cast<double>(n) * px;
    sum += static_cast<double>(count) * std::exp(-lambda) * -std::expm1(-t * lambda);
  }
  return sum.value();
}

double expected_observed_poisson(const Population& pop, std::uint64_t n) {
  const auto& p = require_probabilistic(pop);
  CompensatedSum<double> sum;
  for (const auto& [px, count] : grouped(p)) {
    sum += static_cast<double>(count) * -std::expm1(-static_cast<double>(n) * px);
  }
  return sum.value();
}

double expected_bias_poisson(const Population& pop, std::uint64_t n, const LinearEstimator& est) {
  const auto& p = require_probabilistic(pop);
  CompensatedSum<double> sum;
  for (const auto& [px, count] : grouped(p)) {
    const double lambda = static_cast<double>(n) * px;
    const double gap = est.power_series(lambda) + std::expm1(-est.t() * lambda);
    sum += static_cast<double>(count) * std::exp(-lambda) * gap;
  }
  return sum.value();
}

}  // namespace unseen
