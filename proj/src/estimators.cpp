#include "unseen/estimators.hpp"

#include <algorithm>
#include <cmath>

#include "unseen/error.hpp"
#include "unseen/numeric.hpp"

namespace unseen {

namespace {

constexpr std::uint64_t kMaxSeriesTerms = 10'000;

void require_positive_t(double t) {
  if (!(t > 0.0) || !std::isfinite(t)) {
    throw InvalidArgument("t must be a finite value > 0");
  }
}

double gt_sum(const PrevalenceHistogram& hist, double t, std::uint64_t last) {
  CompensatedSum<double> sum;
  for (const auto& [i, count] : hist.entries()) {
    if (i > last) {
      break;
    }
    const double magnitude = std::pow(t, static_cast<double>(i));
    const double h = (i % 2 == 1) ? magnitude : -magnitude;
    sum += h * static_cast<double>(count);
  }
  return sum.value();
}

// Smallest integer >= log_base(x) / 2, exact when x is a power of base.
std::uint32_t literal_ceil_half_log(double x, double base) {
  const double v = 0.5 * std::log(x) / std::log(base);
  const double nearest = std::round(v);
  if (std::abs(v - nearest) < 1e-9 && nearest >= 0.0) {
    const double power = std::pow(base, 2.0 * nearest);
    if (x == power) return static_cast<std::uint32_t>(nearest);
    return static_cast<std::uint32_t>(x > power ? nearest + 1.0 : nearest);
  }
  return static_cast<std::uint32_t>(std::ceil(v));
}

}  // namespace

std::string_view scheme_name(SmoothingScheme scheme) {
  switch (scheme) {
    case SmoothingScheme::Poisson:
      return "poisson";
    case SmoothingScheme::BinomialEt:
      return "binomial-et";
    case SmoothingScheme::BinomialOpt:
      return "binomial-opt";
    case SmoothingScheme::HypergeometricPoisson:
      return "hyper-poisson";
  }
  return "unknown";
}

SmoothingScheme parse_scheme(std::string_view name) {
  for (auto scheme : {SmoothingScheme::Poisson, SmoothingScheme::BinomialEt,
                      SmoothingScheme::BinomialOpt, SmoothingScheme::HypergeometricPoisson}) {
    if (scheme_name(scheme) == name) {
      return scheme;
    }
  }
  throw InvalidArgument("unknown smoothing scheme '" + std::string(name) + "'");
}

double good_toulmin(const PrevalenceHistogram& hist, double t) {
  require_positive_t(t);
  return gt_sum(hist, t, hist.max_index());
}

double truncated_gt(const PrevalenceHistogram& hist, double t, std::uint64_t ell) {
  require_positive_t(t);
  return gt_sum(hist, t, ell);
}

LinearEstimator::LinearEstimator(std::vector<double> coefficients, double t,
                                 std::optional<SmoothingDistribution> rule)
    : coefficients_(std::move(coefficients)), t_(t), rule_(std::move(rule)) {
  require_positive_t(t);
}

double LinearEstimator::coefficient(std::uint64_t i) const {
  if (i == 0) {
    throw InvalidArgument("coefficients are indexed from 1");
  }
  if (i <= coefficients_.size()) {
    return coefficients_[i - 1];
  }
  if (!rule_) {
    return 0.0;
  }
  return sgt_coefficients(*rule_, t_, i).coefficients().back();
}

double LinearEstimator::apply(const PrevalenceHistogram& hist) const {
  if (rule_ && hist.max_index() > coefficients_.size()) {
    return sgt_coefficients(*rule_, t_, hist.max_index()).apply(hist);
  }
  CompensatedSum<double> sum;
  for (const auto& [i, count] : hist.entries()) {
    if (i > coefficients_.size()) {
      break;
    }
    sum += coefficients_[i - 1] * static_cast<double>(count);
  }
  return sum.value();
}

double LinearEstimator::power_series(double y) const {
  if (!(y >= 0.0)) {
    throw InvalidArgument("power series argument must be >= 0");
  }
  if (y == 0.0) {
    return 0.0;
  }
  const std::uint64_t finite_terms = rule_ ? kMaxSeriesTerms : coefficients_.size();
  std::vector<double> extended;
  if (rule_) {
    extended = sgt_coefficients(*rule_, t_, std::min<std::uint64_t>(
                                                std::max<std::uint64_t>(coefficients_.size(), 64),
                                                kMaxSeriesTerms))
                   .coefficients();
  }
  CompensatedSum<long double> sum;
  long double y_power = 1.0L;  // y^i / i!
  long double peak = 0.0L;
  for (std::uint64_t i = 1; i <= finite_terms; ++i) {
    y_power *= static_cast<long double>(y) / static_cast<long double>(i);
    double h;
    if (i <= coefficients_.size()) {
      h = coefficients_[i - 1];
    } else {
      if (i > extended.size()) {
        extended = sgt_coefficients(*rule_, t_, std::min(2 * extended.size(), kMaxSeriesTerms))
                       .coefficients();
      }
      h = extended[i - 1];
    }
    const long double term = static_cast<long double>(h) * y_power;
    sum += term;
    peak = std::max(peak, std::abs(term));
    if (rule_ && static_cast<double>(i) > y * t_ && std::abs(term) < 1e-17L * peak) {
      // terms past the peak shrink geometrically; the remainder is negligible
      return static_cast<double>(sum.value());
    }
  }
  if (rule_) {
    throw NumericError("power series did not converge within 10^4 terms");
  }
  return static_cast<double>(sum.value());
}

LinearEstimator sgt_coefficients(const SmoothingDistribution& law, double t, std::uint64_t imax) {
  require_positive_t(t);
  const std::vector<double> tails = law.tails(imax);
  std::vector<double> h(imax, 0.0);
  double magnitude = 1.0;  // t^{i-1} P(L >= i-1)
  for (std::uint64_t i = 1; i <= imax; ++i) {
    if (tails[i] == 0.0) {
      magnitude = 0.0;
    } else if (tails[i - 1] > 0.0 && magnitude > 0.0) {
      magnitude = t * magnitude * (tails[i] / tails[i - 1]);
    } else {
      magnitude = std::pow(t, static_cast<double>(i)) * tails[i];
    }
    if (!std::isfinite(magnitude)) {
      throw NumericError("coefficient overflow at i = " + std::to_string(i) + " for t = " +
                         format_double(t) + " with " + law.describe() + " smoothing");
    }
    h[i - 1] = (i % 2 == 1) ? magnitude : -magnitude;
  }
  return LinearEstimator(std::move(h), t, law);
}

double sgt_estimate(const PrevalenceHistogram& hist, const SmoothingDistribution& law, double t) {
  if (hist.empty()) {
    return 0.0;
  }
  return sgt_coefficients(law, t, hist.max_index()).apply(hist);
}

SmoothingDistribution auto_params(std::uint64_t n, double t, SmoothingScheme scheme) {
  if (n == 0) {
    throw InvalidArgument("sample size n must be >= 1");
  }
  require_positive_t(t);
  const double nn = static_cast<double>(n);
  if (scheme == SmoothingScheme::HypergeometricPoisson) {
    if (t < 1.0) {
      throw SchemeError("hyper-poisson smoothing undefined at t < 1; use GT");
    }
    return SmoothingDistribution::poisson(std::log(nn * t * t) / (2.0 * t - 1.0));
  }
  if (t <= 1.0) {
    throw SchemeError("smoothing undefined at t <= 1; use GT");
  }
  switch (scheme) {
    case SmoothingScheme::Poisson:
      return SmoothingDistribution::poisson(std::log(nn * (t + 1.0) * (t + 1.0) / (t - 1.0)) /
                                            (2.0 * t));
    case SmoothingScheme::BinomialEt:
      return SmoothingDistribution::binomial(literal_ceil_half_log(nn * t * t / (t - 1.0), 2.0),
                                             1.0 / (t + 1.0));
    case SmoothingScheme::BinomialOpt:
      return SmoothingDistribution::binomial(literal_ceil_half_log(nn * t * t / (t - 1.0), 3.0),
                                             2.0 / (t + 2.0));
    case SmoothingScheme::HypergeometricPoisson:
      break;
  }
  throw InvalidArgument("unhandled smoothing scheme");
}

UnseenEstimate estimate_unseen(const PrevalenceHistogram& hist, double t, SmoothingScheme scheme,
                               bool clamp) {
  require_positive_t(t);
  UnseenEstimate result;
  if (hist.empty()) {
    result.empty_input = true;
    return result;
  }
  const std::uint64_t n = hist.sample_size();
  if (t <= 1.0) {
    result.used_good_toulmin = true;
    result.value = good_toulmin(hist, t);
  } else {
    result.smoothing = auto_params(n, t, scheme);
    result.value = sgt_estimate(hist, *result.smoothing, t);
  }
  if (clamp) {
    result.value = std::clamp(result.value, 0.0, t * static_cast<double>(n));
  }
  return result;
}

}  // namespace unseen
