#include "unseen/smoothing.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

#include "csv_util.hpp"
#include "unseen/error.hpp"
#include "unseen/numeric.hpp"

namespace unseen {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

// Relative cutoff for the upward Poisson tail sum.
constexpr double kPoissonTailCutoff = 1e-18;

double poisson_pmf(double rate, std::uint64_t l) {
  const double x = static_cast<double>(l);
  return std::exp(-rate + x * std::log(rate) - std::lgamma(x + 1.0));
}

double poisson_tail(double rate, std::uint64_t i) {
  if (i == 0) {
    return 1.0;
  }
  double term = poisson_pmf(rate, i);
  if (term == 0.0 && static_cast<double>(i) > rate) {
    return 0.0;
  }
  CompensatedSum<double> sum;
  for (std::uint64_t j = i;; ++j) {
    sum += term;
    term *= rate / static_cast<double>(j + 1);
    if (term == 0.0 || (static_cast<double>(j) > rate && term < kPoissonTailCutoff * sum.value())) {
      break;
    }
  }
  return std::min(1.0, sum.value());
}

double binomial_pmf(std::uint32_t k, double q, std::uint64_t l) {
  if (l > k) {
    return 0.0;
  }
  if (q == 0.0) {
    return l == 0 ? 1.0 : 0.0;
  }
  if (q == 1.0) {
    return l == k ? 1.0 : 0.0;
  }
  const double kk = k;
  const double x = static_cast<double>(l);
  const double log_choose = std::lgamma(kk + 1.0) - std::lgamma(x + 1.0) - std::lgamma(kk - x + 1.0);
  return std::exp(log_choose + x * std::log(q) + (kk - x) * std::log1p(-q));
}

// Sum of pmf[j] for j >= i over a finite pmf, smallest terms first.
double finite_tail(const std::vector<double>& pmf, std::uint64_t i) {
  if (i == 0) {
    return 1.0;
  }
  CompensatedSum<double> sum;
  for (std::uint64_t j = pmf.size(); j > i; --j) {
    sum += pmf[j - 1];
  }
  return std::min(1.0, sum.value());
}

std::vector<double> binomial_pmf_vector(std::uint32_t k, double q) {
  std::vector<double> pmf(static_cast<std::size_t>(k) + 1);
  for (std::uint32_t l = 0; l <= k; ++l) {
    pmf[l] = binomial_pmf(k, q, l);
  }
  return pmf;
}

// (-s)^l / l! without overflow in the intermediate power.
double signed_power_over_factorial(double s, std::uint64_t l) {
  if (l == 0) {
    return 1.0;
  }
  if (s == 0.0) {
    return 0.0;
  }
  const double x = static_cast<double>(l);
  const double magnitude = std::exp(x * std::log(s) - std::lgamma(x + 1.0));
  return (l % 2 == 0) ? magnitude : -magnitude;
}

void require_probability(double q, const char* what) {
  if (!(q >= 0.0 && q <= 1.0)) {
    throw InvalidArgument(std::string(what) + " must lie in [0, 1]");
  }
}

}  // namespace

SmoothingDistribution SmoothingDistribution::poisson(double rate) {
  if (!(rate >= 0.0) || !std::isfinite(rate)) {
    throw InvalidArgument("poisson smoothing rate must be a finite value >= 0");
  }
  if (rate == 0.0) {
    return deterministic(0);
  }
  return SmoothingDistribution(PoissonSmoothing{rate});
}

SmoothingDistribution SmoothingDistribution::binomial(std::uint32_t trials, double success) {
  require_probability(success, "binomial smoothing q");
  return SmoothingDistribution(BinomialSmoothing{trials, success});
}

SmoothingDistribution SmoothingDistribution::deterministic(std::uint64_t cutoff) {
  return SmoothingDistribution(DeterministicSmoothing{cutoff});
}

SmoothingDistribution SmoothingDistribution::infinite() {
  return SmoothingDistribution(NoSmoothing{});
}

SmoothingDistribution SmoothingDistribution::custom(std::vector<double> pmf) {
  while (!pmf.empty() && pmf.back() == 0.0) {
    pmf.pop_back();
  }
  if (pmf.empty()) {
    throw InvalidArgument("custom smoothing pmf is empty");
  }
  if (pmf.size() > kMaxCustomSupport) {
    throw InvalidArgument("custom smoothing support exceeds " +
                          std::to_string(kMaxCustomSupport) + " entries");
  }
  CompensatedSum<double> total;
  for (double p : pmf) {
    if (!(p >= 0.0) || !std::isfinite(p)) {
      throw InvalidArgument("custom smoothing probabilities must be finite and >= 0");
    }
    total += p;
  }
  if (std::abs(total.value() - 1.0) > 1e-9) {
    throw InvalidArgument("custom smoothing pmf sums to " + format_double(total.value()) +
                          ", expected 1 within 1e-9");
  }
  for (double& p : pmf) {
    p /= total.value();
  }
  return SmoothingDistribution(CustomSmoothing{std::move(pmf)});
}

std::optional<std::uint64_t> SmoothingDistribution::support_max() const {
  return std::visit(
      Overloaded{
          [](const PoissonSmoothing&) -> std::optional<std::uint64_t> { return std::nullopt; },
          [](const BinomialSmoothing& b) -> std::optional<std::uint64_t> {
            if (b.success == 0.0) return 0;
            return b.trials;
          },
          [](const DeterministicSmoothing& d) -> std::optional<std::uint64_t> { return d.cutoff; },
          [](const NoSmoothing&) -> std::optional<std::uint64_t> { return std::nullopt; },
          [](const CustomSmoothing& c) -> std::optional<std::uint64_t> {
            return c.pmf.size() - 1;
          },
      },
      kind_);
}

double SmoothingDistribution::pmf(std::uint64_t l) const {
  return std::visit(
      Overloaded{
          [&](const PoissonSmoothing& p) { return poisson_pmf(p.rate, l); },
          [&](const BinomialSmoothing& b) { return binomial_pmf(b.trials, b.success, l); },
          [&](const DeterministicSmoothing& d) { return l == d.cutoff ? 1.0 : 0.0; },
          [](const NoSmoothing&) { return 0.0; },
          [&](const CustomSmoothing& c) { return l < c.pmf.size() ? c.pmf[l] : 0.0; },
      },
      kind_);
}

double SmoothingDistribution::tail(std::uint64_t i) const {
  if (i == 0) {
    return 1.0;
  }
  return std::visit(
      Overloaded{
          [&](const PoissonSmoothing& p) { return poisson_tail(p.rate, i); },
          [&](const BinomialSmoothing& b) {
            if (i > b.trials) return 0.0;
            return finite_tail(binomial_pmf_vector(b.trials, b.success), i);
          },
          [&](const DeterministicSmoothing& d) { return i <= d.cutoff ? 1.0 : 0.0; },
          [](const NoSmoothing&) { return 1.0; },
          [&](const CustomSmoothing& c) { return finite_tail(c.pmf, i); },
      },
      kind_);
}

std::vector<double> SmoothingDistribution::tails(std::uint64_t imax) const {
  std::vector<double> out(static_cast<std::size_t>(imax) + 1, 0.0);
  out[0] = 1.0;
  auto from_pmf = [&](const std::vector<double>& pmf) {
    // Suffix sums from the top.
    CompensatedSum<double> running;
    for (std::uint64_t j = pmf.size(); j > 0; --j) {
      running += pmf[j - 1];
      if (j - 1 <= imax && j - 1 > 0) {
        out[j - 1] = std::min(1.0, running.value());
      }
    }
  };
  std::visit(Overloaded{
                 [&](const PoissonSmoothing& p) {
                   for (std::uint64_t i = 1; i <= imax; ++i) {
                     out[i] = poisson_tail(p.rate, i);
                     if (out[i] == 0.0) break;
                   }
                 },
                 [&](const BinomialSmoothing& b) {
                   from_pmf(binomial_pmf_vector(b.trials, b.success));
                 },
                 [&](const DeterministicSmoothing& d) {
                   for (std::uint64_t i = 1; i <= std::min(imax, d.cutoff); ++i) out[i] = 1.0;
                 },
                 [&](const NoSmoothing&) { std::fill(out.begin(), out.end(), 1.0); },
                 [&](const CustomSmoothing& c) { from_pmf(c.pmf); },
             },
             kind_);
  return out;
}

double SmoothingDistribution::expected_t_power(double t) const {
  if (!(t >= 1.0)) {
    throw InvalidArgument("E[t^L] requires t >= 1");
  }
  return std::visit(
      Overloaded{
          [&](const PoissonSmoothing& p) { return std::exp(p.rate * (t - 1.0)); },
          [&](const BinomialSmoothing& b) {
            return std::pow(1.0 + b.success * (t - 1.0), static_cast<double>(b.trials));
          },
          [&](const DeterministicSmoothing& d) {
            return std::pow(t, static_cast<double>(d.cutoff));
          },
          [](const NoSmoothing&) -> double { throw NumericError("unbounded moment: E[t^L] with L = infinity"); },
          [&](const CustomSmoothing& c) {
            CompensatedSum<double> sum;
            for (std::size_t l = 0; l < c.pmf.size(); ++l) {
              if (c.pmf[l] > 0.0) sum += c.pmf[l] * std::pow(t, static_cast<double>(l));
            }
            return sum.value();
          },
      },
      kind_);
}

double SmoothingDistribution::signed_moment(double s) const {
  if (!(s >= 0.0)) {
    throw InvalidArgument("signed moment requires s >= 0");
  }
  return std::visit(
      Overloaded{
          [&](const PoissonSmoothing& p) {
            return std::exp(-p.rate) * bessel_j0(2.0 * std::sqrt(s * p.rate));
          },
          [&](const BinomialSmoothing& b) {
            if (b.success == 1.0) return signed_power_over_factorial(s, b.trials);
            const double q = b.success;
            return std::pow(1.0 - q, static_cast<double>(b.trials)) *
                   laguerre(b.trials, q * s / (1.0 - q));
          },
          [&](const DeterministicSmoothing& d) { return signed_power_over_factorial(s, d.cutoff); },
          [](const NoSmoothing&) -> double {
            throw NumericError("unbounded moment: E[(-s)^L/L!] with L = infinity");
          },
          [&](const CustomSmoothing& c) {
            CompensatedSum<double> sum;
            for (std::size_t l = 0; l < c.pmf.size(); ++l) {
              if (c.pmf[l] > 0.0) sum += c.pmf[l] * signed_power_over_factorial(s, l);
            }
            return sum.value();
          },
      },
      kind_);
}

double SmoothingDistribution::xi_bound(double t) const {
  if (!(t >= 1.0)) {
    throw InvalidArgument("xi bound requires t >= 1");
  }
  return std::visit(
      Overloaded{
          [](const PoissonSmoothing& p) { return std::exp(-p.rate); },
          [&](const BinomialSmoothing& b) {
            if (b.success > 2.0 / (2.0 + t) * (1.0 + 1e-15)) {
              throw SchemeError("smoothing too aggressive for bias bound: q > 2/(2+t)");
            }
            return std::pow(1.0 - b.success, static_cast<double>(b.trials));
          },
          [&](const DeterministicSmoothing& d) {
            if (d.cutoff == 0) return 1.0;
            const double l = static_cast<double>(d.cutoff);
            return std::exp(l * std::log(l * t) - l - std::lgamma(l + 1.0));
          },
          [](const NoSmoothing&) -> double {
            throw NumericError("unbounded moment: xi_L(t) with L = infinity");
          },
          [&](const CustomSmoothing&) {
            auto objective = [&](double s) { return std::abs(signed_moment(s)) * std::exp(-s / t); };
            constexpr int kGrid = 400;
            const double lo = 1e-4 * t;
            const double hi = 100.0 * t;
            std::vector<double> grid{0.0};
            for (int g = 0; g < kGrid; ++g) {
              grid.push_back(lo * std::pow(hi / lo, static_cast<double>(g) / (kGrid - 1)));
            }
            std::size_t best = 0;
            double best_value = objective(0.0);
            for (std::size_t g = 1; g < grid.size(); ++g) {
              const double v = objective(grid[g]);
              if (v > best_value) {
                best_value = v;
                best = g;
              }
            }
            const double left = grid[best == 0 ? 0 : best - 1];
            const double right = grid[std::min(best + 1, grid.size() - 1)];
            if (right > left) {
              best_value = std::max(best_value, objective(golden_section_max(objective, left, right)));
            }
            return best_value;
          },
      },
      kind_);
}

std::string SmoothingDistribution::describe() const {
  return std::visit(
      Overloaded{
          [](const PoissonSmoothing& p) { return "poisson(r=" + format_double(p.rate) + ")"; },
          [](const BinomialSmoothing& b) {
            return "binomial(k=" + std::to_string(b.trials) + ",q=" + format_double(b.success) + ")";
          },
          [](const DeterministicSmoothing& d) {
            return "deterministic(l=" + std::to_string(d.cutoff) + ")";
          },
          [](const NoSmoothing&) { return std::string("infinite"); },
          [](const CustomSmoothing& c) {
            return "custom(support=" + std::to_string(c.pmf.size()) + ")";
          },
      },
      kind_);
}

bool operator==(const SmoothingDistribution& a, const SmoothingDistribution& b) {
  return std::visit(
      Overloaded{
          [](const PoissonSmoothing& x, const PoissonSmoothing& y) { return x.rate == y.rate; },
          [](const BinomialSmoothing& x, const BinomialSmoothing& y) {
            return x.trials == y.trials && x.success == y.success;
          },
          [](const DeterministicSmoothing& x, const DeterministicSmoothing& y) {
            return x.cutoff == y.cutoff;
          },
          [](const NoSmoothing&, const NoSmoothing&) { return true; },
          [](const CustomSmoothing& x, const CustomSmoothing& y) { return x.pmf == y.pmf; },
          [](const auto&, const auto&) { return false; },
      },
      a.kind_, b.kind_);
}

double laguerre(std::uint32_t k, double y) {
  if (k == 0) {
    return 1.0;
  }
  double previous = 1.0;
  double current = 1.0 - y;
  for (std::uint32_t n = 1; n < k; ++n) {
    const double nn = n;
    const double next = ((2.0 * nn + 1.0 - y) * current - nn * previous) / (nn + 1.0);
    previous = current;
    current = next;
  }
  return current;
}

double bessel_j0(double x) {
  x = std::abs(x);
  if (x <= 12.0) {
    const long double quarter_sq = -0.25L * static_cast<long double>(x) * x;
    long double term = 1.0L;
    long double sum = 1.0L;
    for (int j = 1; j < 200; ++j) {
      term *= quarter_sq / (static_cast<long double>(j) * j);
      sum += term;
      if (std::abs(term) < 1e-21L * std::max(1.0L, std::abs(sum))) {
        break;
      }
    }
    return static_cast<double>(sum);
  }
  // Hankel expansion: J0(x) = sqrt(2/(pi x)) (P cos chi - Q sin chi).
  const double eight_x = 8.0 * x;
  double p = 1.0;
  double q = 0.0;
  double c = 1.0;
  double last_magnitude = 1.0;
  for (int k = 1; k < 60; ++k) {
    const double odd = 2.0 * k - 1.0;
    const double next = c * (-(odd * odd)) / (k * eight_x);
    if (std::abs(next) > last_magnitude) {
      break;  // asymptotic series started to diverge
    }
    c = next;
    last_magnitude = std::abs(c);
    const double sign = ((k / 2) % 2 == 0) ? 1.0 : -1.0;
    if (k % 2 == 0) {
      p += sign * c;
    } else {
      q += sign * c;
    }
    if (last_magnitude < 1e-17) {
      break;
    }
  }
  const double chi = x - std::numbers::pi / 4.0;
  return std::sqrt(2.0 / (std::numbers::pi * x)) * (p * std::cos(chi) - q * std::sin(chi));
}

SmoothingDistribution read_custom_pmf_csv(std::istream& in) {
  detail::expect_header(in, "ell,prob");
  std::map<std::uint64_t, double> entries;
  std::string line;
  std::size_t line_no = 1;
  while (detail::next_line(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = detail::split_fields(line);
    if (fields.size() != 2) {
      throw InvalidArgument("line " + std::to_string(line_no) + ": expected 2 fields");
    }
    const std::uint64_t ell = parse_uint(fields[0]);
    const double prob = parse_double(fields[1]);
    if (ell >= SmoothingDistribution::kMaxCustomSupport) {
      throw InvalidArgument("line " + std::to_string(line_no) + ": ell beyond support cap");
    }
    if (!entries.emplace(ell, prob).second) {
      throw InvalidArgument("line " + std::to_string(line_no) + ": duplicate ell");
    }
  }
  if (entries.empty()) {
    throw InvalidArgument("custom pmf file has no rows");
  }
  std::vector<double> pmf(entries.rbegin()->first + 1, 0.0);
  for (const auto& [ell, prob] : entries) {
    pmf[ell] = prob;
  }
  return SmoothingDistribution::custom(std::move(pmf));
}

SmoothingDistribution read_custom_pmf_csv_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw InvalidArgument("cannot open smoothing file '" + path + "'");
  }
  return read_custom_pmf_csv(in);
}

}  // namespace unseen
