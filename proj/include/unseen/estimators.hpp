#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "unseen/prevalence.hpp"
#include "unseen/smoothing.hpp"

namespace unseen {

/// Parameter rules mapping (n, t) to a smoothing distribution.
enum class SmoothingScheme {
  Poisson,                // L ~ poi(r), r = ln(n (t+1)^2 / (t-1)) / (2t)
  BinomialEt,             // L ~ Bin(k, 1/(1+t)), k = ceil(log2(n t^2 / (t-1)) / 2)
  BinomialOpt,            // L ~ Bin(k, 2/(2+t)), k = ceil(log3(n t^2 / (t-1)) / 2)
  HypergeometricPoisson,  // L ~ poi(r), r = ln(n t^2) / (2t - 1)
};

/// "poisson", "binomial-et", "binomial-opt", "hyper-poisson".
std::string_view scheme_name(SmoothingScheme scheme);
SmoothingScheme parse_scheme(std::string_view name);

/// -sum_i (-t)^i Phi_i.
double good_toulmin(const PrevalenceHistogram& hist, double t);

/// -sum_{i<=ell} (-t)^i Phi_i.
double truncated_gt(const PrevalenceHistogram& hist, double t, std::uint64_t ell);

/// U^h = sum_i h_i Phi_i with h_1 .. h_imax stored. When built from a
/// smoothing law the law is kept so coefficients past imax can be produced
/// on demand; otherwise they are zero.
class LinearEstimator {
 public:
  LinearEstimator(std::vector<double> coefficients, double t,
                  std::optional<SmoothingDistribution> rule = std::nullopt);

  double t() const { return t_; }
  std::uint64_t imax() const { return coefficients_.size(); }
  const std::vector<double>& coefficients() const { return coefficients_; }
  const std::optional<SmoothingDistribution>& rule() const { return rule_; }

  /// h_i for i >= 1.
  double coefficient(std::uint64_t i) const;

  double apply(const PrevalenceHistogram& hist) const;

  /// h(y) = sum_i h_i y^i / i!, summed until the remaining terms are below
  /// 1e-12 of the running magnitude. Throws NumericError after 10^4 terms.
  double power_series(double y) const;

 private:
  std::vector<double> coefficients_;
  double t_;
  std::optional<SmoothingDistribution> rule_;
};

/// h_i = -(-t)^i P(L >= i) for i = 1..imax. Throws NumericError on overflow.
LinearEstimator sgt_coefficients(const SmoothingDistribution& law, double t, std::uint64_t imax);

double sgt_estimate(const PrevalenceHistogram& hist, const SmoothingDistribution& law, double t);

/// Throws SchemeError for t <= 1 under the first three schemes and t < 1
/// under HypergeometricPoisson.
SmoothingDistribution auto_params(std::uint64_t n, double t, SmoothingScheme scheme);

struct UnseenEstimate {
  double value = 0.0;
  bool used_good_toulmin = false;
  bool empty_input = false;  // warning: nothing observed, value is 0
  std::optional<SmoothingDistribution> smoothing;
};

/// GT for t <= 1, otherwise SGT with auto_params(n, t, scheme) where n is
/// the histogram's sample size. With clamp the value is clipped to [0, t n].
UnseenEstimate estimate_unseen(const PrevalenceHistogram& hist, double t, SmoothingScheme scheme,
                               bool clamp);

}  // namespace unseen
