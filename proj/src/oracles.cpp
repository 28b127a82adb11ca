#include "unseen/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <json.hpp>

#include "parallel.hpp"
#include "unseen/error.hpp"
#include "unseen/estimators.hpp"
#include "unseen/harness.hpp"
#include "unseen/numeric.hpp"

namespace unseen {

namespace {

constexpr double kQuadratureRelTol = 1e-12;
constexpr double kBiasIntegralTol = 1e-8;
constexpr double kHyperTol = 1e-9;

double relative_gap(double lhs, double rhs) {
  return std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs));
}

// Largest |f| on a coarse grid, used to scale the quadrature tolerance.
double sampled_peak(const std::function<double(double)>& f, double a, double b) {
  double peak = 0.0;
  constexpr int kSamples = 64;
  for (int i = 0; i <= kSamples; ++i) {
    peak = std::max(peak, std::abs(f(a + (b - a) * i / kSamples)));
  }
  return peak;
}

double integrate(const std::function<double(double)>& f, double a, double b, const char* what) {
  const double tol = kQuadratureRelTol * std::max(1.0, sampled_peak(f, a, b));
  const QuadratureResult q = adaptive_simpson(f, a, b, tol, 40);
  if (!q.converged) {
    throw NumericError(std::string("quadrature did not converge for ") + what);
  }
  return q.value;
}

// Exact for the k <= 60 used here.
long double choose(std::uint32_t k, std::uint32_t i) {
  long double c = 1.0L;
  for (std::uint32_t j = 1; j <= i; ++j) {
    c = c * static_cast<long double>(k - i + j) / static_cast<long double>(j);
  }
  return c;
}

// sum_l P(L = l) C(k-1, l) (-s)^l over l <= k-1.
double binomial_weighted_moment(const SmoothingDistribution& law, std::uint32_t k, double s) {
  CompensatedSum<long double> sum;
  for (std::uint32_t l = 0; l < k; ++l) {
    const double p = law.pmf(l);
    if (p == 0.0) continue;
    const long double term = static_cast<long double>(p) * choose(k - 1, l) *
                             std::pow(static_cast<long double>(s), static_cast<long double>(l));
    sum += (l % 2 == 0) ? term : -term;
  }
  return static_cast<double>(sum.value());
}

long double hyper_lhs(const SmoothingDistribution& law, std::uint32_t k, double y) {
  CompensatedSum<long double> sum;
  long double below = 0.0L;  // P(L < i)
  for (std::uint32_t i = 1; i <= k; ++i) {
    below += law.pmf(i - 1);
    const long double term =
        choose(k, i) * std::pow(static_cast<long double>(y), static_cast<long double>(i)) * below;
    sum += (i % 2 == 0) ? term : -term;
  }
  return sum.value();
}

// Tails P(L >= i), i = 0..count-1, summed from the far end in long double.
std::vector<long double> oracle_tails(const SmoothingDistribution& law, std::uint64_t count) {
  std::vector<long double> pmf;
  if (const auto* b = std::get_if<BinomialSmoothing>(&law.kind())) {
    const long double q = b->success;
    for (std::uint32_t l = 0; l <= b->trials; ++l) {
      pmf.push_back(choose(b->trials, l) * std::pow(q, static_cast<long double>(l)) *
                    std::pow(1.0L - q, static_cast<long double>(b->trials - l)));
    }
  } else if (const auto* p = std::get_if<PoissonSmoothing>(&law.kind())) {
    const long double r = p->rate;
    const std::uint64_t len = std::max<std::uint64_t>(count, static_cast<std::uint64_t>(r) + 200);
    long double term = std::exp(-r);
    for (std::uint64_t l = 0; l < len; ++l) {
      pmf.push_back(term);
      term *= r / static_cast<long double>(l + 1);
    }
  } else {
    std::vector<long double> out(count);
    for (std::uint64_t i = 0; i < count; ++i) out[i] = law.tail(i);
    return out;
  }
  std::vector<long double> out(std::max<std::size_t>(count, pmf.size() + 1), 0.0L);
  long double acc = 0.0L;
  for (std::size_t l = pmf.size(); l-- > 0;) {
    acc += pmf[l];
    out[l] = acc;
  }
  out.resize(count);
  return out;
}

std::string law_grid_name(const SmoothingDistribution& law) { return law.describe(); }

VerificationReport finish(VerificationReport r) {
  r.pass = r.strict ? r.deviation < r.tolerance : r.deviation <= r.tolerance;
  return r;
}

struct MonteCarloStats {
  double mean = 0.0;
  double variance = 0.0;
  double mean_se = 0.0;
  double variance_se = 0.0;
};

MonteCarloStats summarize(const std::vector<double>& values) {
  const long double count = static_cast<long double>(values.size());
  CompensatedSum<long double> s1;
  for (double v : values) s1 += v;
  const long double mean = s1.value() / count;
  CompensatedSum<long double> s2;
  CompensatedSum<long double> s4;
  for (double v : values) {
    const long double d = v - mean;
    s2 += d * d;
    s4 += d * d * d * d;
  }
  MonteCarloStats out;
  out.mean = static_cast<double>(mean);
  const long double variance = s2.value() / (count - 1.0L);
  out.variance = static_cast<double>(variance);
  out.mean_se = static_cast<double>(std::sqrt(variance / count));
  const long double m4 = s4.value() / count;
  out.variance_se = static_cast<double>(std::sqrt(std::max(0.0L, m4 - variance * variance) / count));
  return out;
}

// One Poisson-model draw per trial; returns U-hat - U for each trial.
template <class Estimate>
std::vector<double> poisson_errors(const Population& pop, std::uint64_t n, double t,
                                   std::uint64_t trials, std::uint64_t seed, unsigned threads,
                                   Estimate estimate) {
  const auto m = static_cast<std::uint64_t>(std::llround(t * static_cast<double>(n)));
  std::vector<double> errors(trials);
  detail::parallel_for(trials, threads, [&](std::uint64_t trial) {
    const SampledCounts counts = sample(pop, SamplingModel::Poisson, n, m, derive_seed(seed, trial));
    const PrevalenceHistogram hist = PrevalenceHistogram::from_counts(counts.old_counts);
    errors[trial] = estimate(hist) - static_cast<double>(true_unseen(counts.old_counts, counts.new_counts));
  });
  return errors;
}

std::string population_label(const Population& pop) {
  return "population of " + std::to_string(pop.size()) + " symbols";
}

}  // namespace

IdentitySides check_bias_integral(const SmoothingDistribution& law, double y) {
  if (!(y >= 0.0)) {
    throw InvalidArgument("bias integral needs y >= 0");
  }
  IdentitySides out;
  if (y == 0.0) {
    return out;
  }
  // Left: g(y) - (1 - e^{-y}), g(y) = sum_i P(L >= i) (-1)^{i+1} y^i / i!.
  CompensatedSum<long double> g;
  long double power = 1.0L;  // y^i / i!
  long double peak = 0.0L;
  const std::optional<std::uint64_t> top = law.support_max();
  const std::uint64_t span = top ? *top + 1 : static_cast<std::uint64_t>(4.0 * y) + 400;
  const std::vector<long double> tails = oracle_tails(law, span + 1);
  for (std::uint64_t i = 1;; ++i) {
    if (top && i > *top) break;
    if (i > span) throw NumericError("bias integral series did not converge");
    power *= static_cast<long double>(y) / static_cast<long double>(i);
    const long double term = power * tails[i];
    g += (i % 2 == 1) ? term : -term;
    peak = std::max(peak, term);
    if (static_cast<double>(i) > y && term <= 1e-14L * peak) break;
  }
  out.lhs = static_cast<double>(g.value() + std::expm1(-static_cast<long double>(y)));
  // Right: -int_0^y E[(-s)^L / L!] e^{s-y} ds.
  const auto integrand = [&](double s) { return law.signed_moment(s) * std::exp(s - y); };
  out.rhs = -integrate(integrand, 0.0, y, "the bias integral");
  out.deviation = relative_gap(out.lhs, out.rhs);
  return out;
}

IdentitySides check_hyper_identity(const SmoothingDistribution& law, std::uint32_t k, double y) {
  if (k == 0) throw InvalidArgument("hyper identity needs k >= 1");
  if (!(y >= 0.0 && y < 1.0)) throw InvalidArgument("hyper identity needs 0 <= y < 1");
  IdentitySides out;
  if (y == 0.0) {
    return out;
  }
  out.lhs = static_cast<double>(hyper_lhs(law, k, y));
  // -k (1-y)^k (1-s)^{-k-1} rewritten as -k ((1-y)/(1-s))^k / (1-s).
  const auto integrand = [&](double s) {
    return binomial_weighted_moment(law, k, s) * std::pow((1.0 - y) / (1.0 - s), k) / (1.0 - s);
  };
  out.rhs = -static_cast<double>(k) * integrate(integrand, 0.0, y, "the hypergeometric identity");
  out.deviation = relative_gap(out.lhs, out.rhs);
  return out;
}

IdentitySides check_hyper_limit(const SmoothingDistribution& law, std::uint32_t k) {
  if (k == 0) throw InvalidArgument("hyper identity needs k >= 1");
  IdentitySides out;
  out.lhs = static_cast<double>(hyper_lhs(law, k, 1.0));
  out.rhs = -binomial_weighted_moment(law, k, 1.0);
  out.deviation = relative_gap(out.lhs, out.rhs);
  return out;
}

VerificationReport check_variance_bound(const Population& pop, std::uint64_t n, double t,
                                        const SmoothingDistribution& law, std::uint64_t trials,
                                        std::uint64_t seed, unsigned threads) {
  if (trials < 2) throw InvalidArgument("variance check needs at least 2 trials");
  const double moment = law.expected_t_power(t);
  const double bound = expected_observed_poisson(pop, n) * moment * moment +
                       expected_unseen_poisson(pop, n, t);
  const auto m = static_cast<double>(std::llround(t * static_cast<double>(n)));
  const double t_eff = m / static_cast<double>(n);
  const std::vector<double> errors =
      poisson_errors(pop, n, t_eff, trials, seed, threads, [&](const PrevalenceHistogram& hist) {
        return sgt_estimate(hist, law, t_eff);
      });
  const MonteCarloStats stats = summarize(errors);
  VerificationReport r;
  r.check = "variance_bound";
  r.grid = population_label(pop) + ", n=" + std::to_string(n) + ", t=" + format_double(t) + ", " +
           law.describe() + ", " + std::to_string(trials) + " trials";
  r.deviation = stats.variance;
  r.tolerance = bound + 3.0 * stats.variance_se;
  r.worst = "bound " + format_double(bound) + ", SE " + format_double(stats.variance_se);
  return finish(r);
}

VerificationReport check_unbiasedness_gt(const Population& pop, std::uint64_t n, double t,
                                         std::uint64_t trials, std::uint64_t seed, unsigned threads) {
  if (trials < 2) throw InvalidArgument("unbiasedness check needs at least 2 trials");
  const auto m = static_cast<double>(std::llround(t * static_cast<double>(n)));
  const double t_eff = m / static_cast<double>(n);
  const std::vector<double> errors =
      poisson_errors(pop, n, t_eff, trials, seed, threads,
                     [&](const PrevalenceHistogram& hist) { return good_toulmin(hist, t_eff); });
  const MonteCarloStats stats = summarize(errors);
  VerificationReport r;
  r.check = "gt_unbiasedness";
  r.grid = population_label(pop) + ", n=" + std::to_string(n) + ", t=" + format_double(t) + ", " +
           std::to_string(trials) + " trials";
  r.deviation = std::abs(stats.mean);
  r.tolerance = 3.0 * stats.mean_se;
  r.worst = "mean " + format_double(stats.mean) + ", SE " + format_double(stats.mean_se);
  return finish(r);
}

VerificationReport check_laguerre_bound(std::uint64_t points, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::uint32_t> degree(0, 200);
  std::uniform_real_distribution<double> argument(0.0, 50.0);
  VerificationReport r;
  r.check = "laguerre_bound";
  r.grid = std::to_string(points) + " random points, k <= 200, y in [0, 50]";
  r.tolerance = 1.0;
  for (std::uint64_t p = 0; p < points; ++p) {
    const std::uint32_t k = degree(rng);
    const double y = argument(rng);
    const double ratio = std::abs(laguerre(k, y)) * std::exp(-y / 2.0);
    if (ratio > r.deviation) {
      r.deviation = ratio;
      r.worst = "k=" + std::to_string(k) + ", y=" + format_double(y);
    }
  }
  return finish(r);
}

VerificationReport check_truncated_gt_floor() {
  VerificationReport r;
  r.check = "truncated_gt_bias_floor";
  r.grid = "l in {2,4}, t in {1.5,2,3}, n in {300,3000}, uniform over n/(l+1) symbols";
  r.tolerance = 1.0;
  r.strict = true;
  for (std::uint64_t ell : {2, 4}) {
    for (double t : {1.5, 2.0, 3.0}) {
      for (std::uint64_t n : {300, 3000}) {
        const std::uint64_t support = n / (ell + 1);
        const Population pop =
            Population::probabilistic(std::vector<double>(support, 1.0 / static_cast<double>(support)));
        std::vector<double> h(ell);
        for (std::uint64_t i = 1; i <= ell; ++i) {
          const double magnitude = std::pow(t, static_cast<double>(i));
          h[i - 1] = (i % 2 == 1) ? magnitude : -magnitude;
        }
        const double gap = -expected_bias_poisson(pop, n, LinearEstimator(std::move(h), t));
        const double floor = static_cast<double>(n) * std::pow(t - 1.0, 2.5) / (6.05 * t);
        const double ratio = floor / gap;
        if (!(gap > 0.0) || ratio > r.deviation) {
          r.deviation = gap > 0.0 ? ratio : INFINITY;
          r.worst = "l=" + std::to_string(ell) + ", t=" + format_double(t) +
                    ", n=" + std::to_string(n) + ": E[U-U^l]=" + format_double(gap) +
                    " vs " + format_double(floor);
        }
      }
    }
  }
  return finish(r);
}

VerificationReport check_bias_integral_grid() {
  std::vector<SmoothingDistribution> laws;
  for (double r : {0.5, 1.0, 2.0, 5.0}) laws.push_back(SmoothingDistribution::poisson(r));
  for (std::uint32_t k : {1u, 3u, 5u, 10u, 20u}) {
    for (double q : {0.1, 0.5, 0.9}) laws.push_back(SmoothingDistribution::binomial(k, q));
  }
  laws.push_back(SmoothingDistribution::deterministic(0));
  VerificationReport r;
  r.check = "bias_integral";
  r.grid = "poisson(r in {0.5,1,2,5}), binomial(k in {1,3,5,10,20}, q in {0.1,0.5,0.9}), "
           "deterministic(0); y in {0,0.1,1,5,10,30}";
  r.tolerance = kBiasIntegralTol;
  for (const auto& law : laws) {
    for (double y : {0.0, 0.1, 1.0, 5.0, 10.0, 30.0}) {
      const IdentitySides s = check_bias_integral(law, y);
      if (s.deviation >= r.deviation) {
        r.deviation = s.deviation;
        r.worst = law_grid_name(law) + ", y=" + format_double(y);
      }
    }
  }
  return finish(r);
}

VerificationReport check_hyper_identity_grid() {
  std::vector<SmoothingDistribution> laws;
  for (std::uint64_t l = 0; l <= 3; ++l) laws.push_back(SmoothingDistribution::deterministic(l));
  laws.push_back(SmoothingDistribution::binomial(3, 0.5));
  laws.push_back(SmoothingDistribution::poisson(1.0));
  VerificationReport r;
  r.check = "hyper_identity";
  r.grid = "deterministic(0..3), binomial(3,0.5), poisson(1); k in 1..20; y in {0,0.1,0.3,0.5,0.7,0.9}";
  r.tolerance = kHyperTol;
  for (const auto& law : laws) {
    for (std::uint32_t k = 1; k <= 20; ++k) {
      for (double y : {0.0, 0.1, 0.3, 0.5, 0.7, 0.9}) {
        const IdentitySides s = check_hyper_identity(law, k, y);
        if (s.deviation >= r.deviation) {
          r.deviation = s.deviation;
          r.worst = law_grid_name(law) + ", k=" + std::to_string(k) + ", y=" + format_double(y);
        }
      }
    }
  }
  return finish(r);
}

VerificationReport check_hyper_limit_grid() {
  std::vector<SmoothingDistribution> laws;
  for (std::uint64_t l = 0; l <= 3; ++l) laws.push_back(SmoothingDistribution::deterministic(l));
  laws.push_back(SmoothingDistribution::binomial(3, 0.5));
  laws.push_back(SmoothingDistribution::poisson(1.0));
  VerificationReport r;
  r.check = "hyper_identity_limit";
  r.grid = "deterministic(0..3), binomial(3,0.5), poisson(1); k in 1..20; y = 1";
  r.tolerance = kHyperTol;
  for (const auto& law : laws) {
    for (std::uint32_t k = 1; k <= 20; ++k) {
      const IdentitySides s = check_hyper_limit(law, k);
      if (s.deviation >= r.deviation) {
        r.deviation = s.deviation;
        r.worst = law_grid_name(law) + ", k=" + std::to_string(k);
      }
    }
  }
  return finish(r);
}

std::vector<VerificationReport> verify_all(std::uint64_t seed, unsigned threads) {
  std::vector<VerificationReport> reports;
  reports.push_back(check_bias_integral_grid());
  reports.push_back(check_hyper_identity_grid());
  reports.push_back(check_hyper_limit_grid());
  reports.push_back(check_laguerre_bound(10'000, derive_seed(seed, 1)));
  reports.push_back(check_truncated_gt_floor());

  const Population uniform100 = Population::probabilistic(std::vector<double>(100, 0.01));
  for (double t : {0.5, 2.0}) {
    reports.push_back(check_unbiasedness_gt(uniform100, 100, t, 100'000,
                                            derive_seed(seed, 2, static_cast<std::uint64_t>(t * 2)),
                                            threads));
  }
  const Population single = Population::probabilistic({1.0});
  reports.push_back(check_unbiasedness_gt(single, 50, 1.0, 10'000, derive_seed(seed, 3), threads));

  reports.push_back(check_variance_bound(single, 2, 1.0, SmoothingDistribution::deterministic(1),
                                         10'000, derive_seed(seed, 4), threads));
  reports.push_back(check_variance_bound(uniform100, 100, 2.0,
                                         auto_params(100, 2.0, SmoothingScheme::Poisson), 10'000,
                                         derive_seed(seed, 5), threads));
  reports.push_back(check_variance_bound(uniform100, 100, 2.0,
                                         auto_params(100, 2.0, SmoothingScheme::BinomialOpt), 10'000,
                                         derive_seed(seed, 6), threads));
  return reports;
}

std::string verification_table(const std::vector<VerificationReport>& reports) {
  std::string out;
  char line[512];
  std::snprintf(line, sizeof line, "%-26s %-6s %-24s %-24s %s\n", "check", "result", "deviation",
                "tolerance", "worst");
  out += line;
  for (const auto& r : reports) {
    std::snprintf(line, sizeof line, "%-26s %-6s %-24s %-24s %s\n", r.check.c_str(),
                  r.pass ? "PASS" : "FAIL", format_double(r.deviation).c_str(),
                  ((r.strict ? "< " : "<= ") + format_double(r.tolerance)).c_str(), r.worst.c_str());
    out += line;
  }
  return out;
}

std::string verification_json(const std::vector<VerificationReport>& reports, std::uint64_t seed) {
  auto number = [](double v) { return std::isfinite(v) ? format_double(v) : std::string("null"); };
  bool all = true;
  std::string checks;
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const auto& r = reports[i];
    all = all && r.pass;
    checks += i == 0 ? "\n    " : ",\n    ";
    checks += "{\"check\": " + nlohmann::json(r.check).dump() +
              ", \"grid\": " + nlohmann::json(r.grid).dump() + ", \"deviation\": " +
              number(r.deviation) + ", \"tolerance\": " + number(r.tolerance) +
              ", \"strict\": " + (r.strict ? "true" : "false") +
              ", \"pass\": " + (r.pass ? "true" : "false") +
              ", \"worst\": " + nlohmann::json(r.worst).dump() + "}";
  }
  return "{\n  \"tool\": \"unseen\",\n  \"version\": " + nlohmann::json(std::string(kVersion)).dump() +
         ",\n  \"command\": \"verify\",\n  \"seed\": " + std::to_string(seed) +
         ",\n  \"pass\": " + (all ? "true" : "false") + ",\n  \"checks\": [" + checks +
         (reports.empty() ? "]\n}\n" : "\n  ]\n}\n");
}

}  // namespace unseen
