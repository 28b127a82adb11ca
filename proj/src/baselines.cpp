#include "unseen/baselines.hpp"

#include <algorithm>
#include <cmath>

#include "unseen/error.hpp"
#include "unseen/numeric.hpp"

namespace unseen {

namespace {

constexpr const char* kAllSingletons = "all-singletons: coverage undefined";

double f(const PrevalenceHistogram& hist, std::uint64_t i) {
  return static_cast<double>(hist.prevalence(i));
}

double jackknife_support(const PrevalenceHistogram& hist, std::uint32_t order) {
  const std::uint64_t n = hist.sample_size();
  if (n <= order) {
    throw InvalidArgument("jackknife order " + std::to_string(order) +
                          " needs more than that many samples");
  }
  const long double nn = static_cast<long double>(n);
  const long double d = static_cast<long double>(hist.observed_count());
  // Mean distinct count after leaving out j samples, for j = 0..order.
  std::vector<long double> left_out(order + 1, d);
  for (std::uint32_t j = 1; j <= order; ++j) {
    for (std::uint64_t i = 1; i <= j; ++i) {
      long double ratio = 1.0L;  // C(n-i, j-i) / C(n, j)
      for (std::uint64_t a = 0; a < i; ++a) {
        ratio *= static_cast<long double>(j - a) / (nn - static_cast<long double>(a));
      }
      left_out[j] -= static_cast<long double>(hist.prevalence(i)) * ratio;
    }
  }
  CompensatedSum<long double> total;
  long double factorial_j = 1.0L;
  for (std::uint32_t j = 0; j <= order; ++j) {
    if (j > 0) factorial_j *= j;
    long double factorial_rest = 1.0L;
    for (std::uint32_t a = 2; a <= order - j; ++a) factorial_rest *= a;
    const long double weight = std::pow(nn - j, static_cast<long double>(order)) /
                               (factorial_j * factorial_rest);
    total += (j % 2 == 0 ? weight : -weight) * left_out[j];
  }
  return static_cast<double>(total.value());
}

double chao_lee_support(const PrevalenceHistogram& hist) {
  const double n = static_cast<double>(hist.sample_size());
  const double d = static_cast<double>(hist.observed_count());
  const double coverage = 1.0 - f(hist, 1) / n;
  CompensatedSum<double> pairs;
  for (const auto& [i, count] : hist.entries()) {
    pairs += static_cast<double>(i) * static_cast<double>(i - 1) * static_cast<double>(count);
  }
  const double base = d / coverage;
  const double cv2 = std::max(base * pairs.value() / (n * (n - 1.0)) - 1.0, 0.0);
  return base + f(hist, 1) / coverage * cv2;
}

// Returns nullopt when the rare-group coverage is zero.
std::optional<double> ace_support(const PrevalenceHistogram& hist, std::uint64_t cutoff) {
  double rare_species = 0.0;
  double rare_samples = 0.0;
  double abundant_species = 0.0;
  double pairs = 0.0;
  for (const auto& [i, count] : hist.entries()) {
    const double c = static_cast<double>(count);
    if (i <= cutoff) {
      rare_species += c;
      rare_samples += static_cast<double>(i) * c;
      pairs += static_cast<double>(i) * static_cast<double>(i - 1) * c;
    } else {
      abundant_species += c;
    }
  }
  if (rare_species == 0.0) {
    return abundant_species;
  }
  const double coverage = 1.0 - f(hist, 1) / rare_samples;
  if (coverage <= 0.0) {
    return std::nullopt;
  }
  const double cv2 =
      std::max(rare_species / coverage * pairs / (rare_samples * (rare_samples - 1.0)) - 1.0, 0.0);
  return abundant_species + rare_species / coverage + f(hist, 1) / coverage * cv2;
}

double chao1_support(const PrevalenceHistogram& hist) {
  const double n = static_cast<double>(hist.sample_size());
  const double f1 = f(hist, 1);
  return static_cast<double>(hist.observed_count()) +
         (n - 1.0) / n * f1 * (f1 - 1.0) / (2.0 * (f(hist, 2) + 1.0));
}

}  // namespace

BaselineKind BaselineKind::jackknife(std::uint32_t order) {
  if (order < 1 || order > 5) {
    throw InvalidArgument("jackknife order must be in 1..5");
  }
  return {Family::Jackknife, order};
}

std::string BaselineKind::name() const {
  switch (family) {
    case Family::ChaoLee:
      return "chao-lee";
    case Family::Ace:
      return "ace";
    case Family::Jackknife:
      return "jackknife" + std::to_string(jackknife_order);
    case Family::ShenChaoLin:
      return "scl";
    case Family::Empirical:
      return "empirical";
  }
  return "unknown";
}

BaselineKind BaselineKind::parse(std::string_view name) {
  if (name == "chao-lee") return chao_lee();
  if (name == "ace") return ace();
  if (name == "scl") return shen_chao_lin();
  if (name == "empirical") return empirical();
  if (name.size() == 10 && name.substr(0, 9) == "jackknife" && name[9] >= '1' && name[9] <= '5') {
    return jackknife(static_cast<std::uint32_t>(name[9] - '0'));
  }
  throw InvalidArgument("unknown baseline '" + std::string(name) + "'");
}

BaselineResult baseline_support(const PrevalenceHistogram& hist, const BaselineKind& kind) {
  if (hist.empty()) {
    return {0.0, "empty input"};
  }
  const std::uint64_t n = hist.sample_size();
  const bool all_singletons = hist.prevalence(1) == n;
  switch (kind.family) {
    case BaselineKind::Family::ChaoLee:
      if (all_singletons) return {jackknife_support(hist, 1), kAllSingletons};
      return {chao_lee_support(hist), std::nullopt};
    case BaselineKind::Family::Ace: {
      const auto s = all_singletons ? std::nullopt : ace_support(hist, kind.ace_cutoff);
      if (!s) return {jackknife_support(hist, 1), kAllSingletons};
      return {*s, std::nullopt};
    }
    case BaselineKind::Family::Jackknife:
      return {jackknife_support(hist, kind.jackknife_order), std::nullopt};
    case BaselineKind::Family::ShenChaoLin:
      return {chao1_support(hist), std::nullopt};
    case BaselineKind::Family::Empirical:
      return {static_cast<double>(hist.observed_count()), std::nullopt};
  }
  throw InvalidArgument("unhandled baseline kind");
}

double shen_chao_lin_extrapolation(const PrevalenceHistogram& hist, double f0, double t) {
  if (!(t >= 0.0)) {
    throw InvalidArgument("t must be >= 0");
  }
  const double f1 = f(hist, 1);
  if (f1 == 0.0 || !(f0 > 0.0)) {
    return 0.0;
  }
  const double n = static_cast<double>(hist.sample_size());
  const double m = t * n;
  const double step = std::clamp(f1 / (n * f0), 0.0, 1.0);
  if (step == 1.0) {
    return m > 0.0 ? f0 : 0.0;
  }
  return f0 * -std::expm1(m * std::log1p(-step));
}

BaselineResult baseline_unseen(const PrevalenceHistogram& hist, double t, const BaselineKind& kind) {
  if (kind.family == BaselineKind::Family::Empirical) {
    return {0.0, std::nullopt};
  }
  BaselineResult support = baseline_support(hist, kind);
  if (hist.empty()) {
    return support;
  }
  const double f0 = support.value - static_cast<double>(hist.observed_count());
  return {shen_chao_lin_extrapolation(hist, f0, t), support.warning};
}

}  // namespace unseen
