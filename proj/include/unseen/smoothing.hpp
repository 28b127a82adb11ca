#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace unseen {

struct PoissonSmoothing {
  double rate = 0.0;
};

struct BinomialSmoothing {
  std::uint32_t trials = 0;
  double success = 0.0;
};

struct DeterministicSmoothing {
  std::uint64_t cutoff = 0;
};

/// L = infinity: no attenuation, the plain Good-Toulmin coefficients.
struct NoSmoothing {};

struct CustomSmoothing {
  std::vector<double> pmf;  // pmf[l] = P(L = l)
};

/// A law for the random truncation point L over the nonnegative integers.
///
/// Tails, P(L >= i), are what attenuate the Good-Toulmin coefficients;
/// E[t^L] bounds the coefficient magnitude and E[(-s)^L / L!] drives the
/// bias bound.
class SmoothingDistribution {
 public:
  using Kind = std::variant<PoissonSmoothing, BinomialSmoothing, DeterministicSmoothing,
                            NoSmoothing, CustomSmoothing>;

  static constexpr std::size_t kMaxCustomSupport = 10'000;

  /// rate == 0 is the degenerate law at 0 and is stored as deterministic(0).
  static SmoothingDistribution poisson(double rate);
  static SmoothingDistribution binomial(std::uint32_t trials, double success);
  static SmoothingDistribution deterministic(std::uint64_t cutoff);
  static SmoothingDistribution infinite();
  /// pmf must sum to 1 within 1e-9; it is renormalized exactly.
  static SmoothingDistribution custom(std::vector<double> pmf);

  const Kind& kind() const { return kind_; }
  bool is_infinite() const { return std::holds_alternative<NoSmoothing>(kind_); }

  /// Largest l with P(L = l) > 0; nullopt for unbounded support.
  std::optional<std::uint64_t> support_max() const;

  double pmf(std::uint64_t l) const;

  /// P(L >= i).
  double tail(std::uint64_t i) const;

  /// P(L >= i) for i = 0 .. imax.
  std::vector<double> tails(std::uint64_t imax) const;

  /// E[t^L] for t >= 1. Throws NumericError for L = infinity.
  double expected_t_power(double t) const;

  /// E[(-s)^L / L!] for s >= 0. Throws NumericError for L = infinity.
  double signed_moment(double s) const;

  /// Upper bound on max_s |E[(-s)^L / L!]| e^{-s/t}.
  ///
  /// Poisson(r) gives e^{-r} and Binomial(k, q) gives (1-q)^k, the latter
  /// only valid for q <= 2/(2+t) (SchemeError otherwise). Deterministic(l)
  /// returns the exact maximum (l t / e)^l / l!. Custom laws are maximized
  /// numerically on a log grid over [0, 100 t] refined by golden section.
  double xi_bound(double t) const;

  std::string describe() const;

  friend bool operator==(const SmoothingDistribution& a, const SmoothingDistribution& b);

 private:
  explicit SmoothingDistribution(Kind kind) : kind_(std::move(kind)) {}
  Kind kind_;
};

/// Laguerre polynomial L_k(y) by the three-term recurrence.
double laguerre(std::uint32_t k, double y);

/// Bessel function of the first kind, order zero: power series for
/// |x| <= 12, Hankel asymptotic expansion beyond.
double bessel_j0(double x);

/// Reads an `ell,prob` CSV into a custom smoothing law.
SmoothingDistribution read_custom_pmf_csv(std::istream& in);
SmoothingDistribution read_custom_pmf_csv_file(const std::string& path);

}  // namespace unseen
