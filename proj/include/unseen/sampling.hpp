#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "unseen/estimators.hpp"

namespace unseen {

enum class SamplingModel { Multinomial, Poisson, Hypergeometric, BernoulliProduct };

/// "multinomial", "poisson", "hypergeometric", "bernoulli".
std::string_view model_name(SamplingModel model);
SamplingModel parse_model(std::string_view name);

enum class PopulationKind { Probabilistic, BernoulliProduct, HypergeometricUrn };

class Population {
 public:
  /// p_x > 0 summing to 1 within 1e-12.
  static Population probabilistic(std::vector<double> p);
  /// Presence probabilities in (0, 1]; their sum p_S is unconstrained.
  static Population bernoulli_product(std::vector<double> p);
  /// Capacities r_x >= 1.
  static Population urn(std::vector<std::uint64_t> capacities);

  PopulationKind kind() const { return kind_; }
  std::size_t size() const;

  /// Probabilities (Probabilistic) or presence probabilities (BernoulliProduct).
  const std::vector<double>& probabilities() const { return probabilities_; }
  const std::vector<std::uint64_t>& capacities() const { return capacities_; }
  std::uint64_t total_capacity() const { return total_capacity_; }
  /// Sum of presence probabilities, 1 for Probabilistic.
  double mass() const;

  /// Optional symbol names, set when read from a file.
  const std::vector<std::string>& names() const { return names_; }
  void set_names(std::vector<std::string> names);

 private:
  PopulationKind kind_ = PopulationKind::Probabilistic;
  std::vector<double> probabilities_;
  std::vector<std::uint64_t> capacities_;
  std::uint64_t total_capacity_ = 0;
  std::vector<std::string> names_;
};

/// Textual population recipes:
///   uniform:K            K equiprobable symbols
///   twostep:K            K/2 symbols at 1/(2K), K/2 at 3/(2K); K even
///   zipf:S:SHIFT:K       p_i proportional to 1/(i+SHIFT)^S, i = 1..K
///   dirichlet:ALPHA:K    one draw from the symmetric Dirichlet(ALPHA)
///   urn:R:K              K symbols with capacity R each
///   incidence:P:K        K species each present with probability P
///   file:PATH            CSV `symbol,weight`
struct PopulationSpec {
  enum class Family { Uniform, TwoStep, Zipf, Dirichlet, Urn, Incidence, File };

  Family family = Family::Uniform;
  std::uint64_t k = 0;
  double exponent = 1.0;  // zipf S
  double shift = 0.0;     // zipf SHIFT
  double alpha = 1.0;     // dirichlet
  double presence = 0.0;  // incidence P
  std::uint64_t capacity = 0;
  std::string path;
  std::string text;  // the original recipe, echoed in outputs

  static PopulationSpec parse(std::string_view text);
};

/// The population kind the model samples from.
PopulationKind population_kind_for(SamplingModel model);

/// Materializes a spec as a population of the given kind. Deterministic in
/// seed (only dirichlet consumes randomness). File weights are normalized
/// for Probabilistic, taken as presence probabilities for BernoulliProduct
/// and as integer capacities for HypergeometricUrn.
Population realize(const PopulationSpec& spec, std::uint64_t seed,
                   PopulationKind kind = PopulationKind::Probabilistic);

/// Per-symbol counts in the observed (old) and future (new) samples.
struct SampledCounts {
  std::vector<std::uint64_t> old_counts;
  std::vector<std::uint64_t> new_counts;
};

/// Draws n old and m new samples (sampling units under BernoulliProduct;
/// Poisson means under the Poisson model). Throws InvalidArgument on a
/// model/population mismatch or n + m > R for the urn.
SampledCounts sample(const Population& pop, SamplingModel model, std::uint64_t n, std::uint64_t m,
                     std::uint64_t seed);

/// Symbols with a positive new count and a zero old count.
std::uint64_t true_unseen(const std::vector<std::uint64_t>& old_counts,
                          const std::vector<std::uint64_t>& new_counts);
std::uint64_t true_unseen(const std::map<std::string, std::uint64_t>& old_counts,
                          const std::map<std::string, std::uint64_t>& new_counts);

/// E[U] = sum_x e^{-n p_x} (1 - e^{-t n p_x}).
double expected_unseen_poisson(const Population& pop, std::uint64_t n, double t);

/// E[Phi_+] = sum_x (1 - e^{-n p_x}).
double expected_observed_poisson(const Population& pop, std::uint64_t n);

/// E[U^h - U] = sum_x e^{-lambda_x} (h(lambda_x) - (1 - e^{-t lambda_x})),
/// lambda_x = n p_x, t taken from the estimator.
double expected_bias_poisson(const Population& pop, std::uint64_t n, const LinearEstimator& est);

/// splitmix64 mix of a master seed with two stream indices.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0);

}  // namespace unseen
