#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "unseen/sampling.hpp"
#include "unseen/smoothing.hpp"

namespace unseen {

struct VerificationReport {
  std::string check;
  std::string grid;
  double deviation = 0.0;  // worst value over the grid
  double tolerance = 0.0;
  bool strict = false;     // pass iff deviation < tolerance instead of <=
  bool pass = false;
  std::string worst;       // parameters at the worst grid point
};

/// Both sides of an identity and their deviation |lhs - rhs| / max(1, |lhs|).
struct IdentitySides {
  double lhs = 0.0;
  double rhs = 0.0;
  double deviation = 0.0;
};

/// g(y) - (1 - e^{-y}) against -e^{-y} int_0^y E[(-s)^L / L!] e^s ds, with
/// g(y) = -sum_i P(L >= i) (-y)^i / i!. Series on the left, adaptive
/// Simpson on the right. Throws NumericError if quadrature fails.
IdentitySides check_bias_integral(const SmoothingDistribution& law, double y);

/// sum_{i=1..k} C(k,i) (-y)^i P(L < i) against
/// -k (1-y)^k int_0^y E[C(k-1,L) (-s)^L] (1-s)^{-k-1} ds, for 0 <= y < 1.
IdentitySides check_hyper_identity(const SmoothingDistribution& law, std::uint32_t k, double y);

/// The y = 1 limit: the left side at y = 1 against -E[C(k-1,L) (-1)^L].
IdentitySides check_hyper_limit(const SmoothingDistribution& law, std::uint32_t k);

/// Monte-Carlo Var(U^L - U) under the Poisson model against
/// E[Phi_+] E[t^L]^2 + E[U]; pass if the empirical variance is at most the
/// bound plus 3 standard errors. Throws NumericError for L = infinity.
VerificationReport check_variance_bound(const Population& pop, std::uint64_t n, double t,
                                        const SmoothingDistribution& law, std::uint64_t trials,
                                        std::uint64_t seed, unsigned threads = 0);

/// Monte-Carlo mean of U^GT - U under the Poisson model; pass if
/// |mean| <= 3 SE. The deviation is |mean| and the tolerance 3 SE.
VerificationReport check_unbiasedness_gt(const Population& pop, std::uint64_t n, double t,
                                         std::uint64_t trials, std::uint64_t seed,
                                         unsigned threads = 0);

/// max |L_k(y)| e^{-y/2} over random k <= 200, y in [0, 50]; passes at <= 1.
VerificationReport check_laguerre_bound(std::uint64_t points, std::uint64_t seed);

/// E[U - U^l] against n (t-1)^{5/2} / (6.05 t) on the uniform distribution
/// over n/(l+1) symbols, l in {2, 4}, t in {1.5, 2, 3}, n in {300, 3000}.
/// The deviation is max(bound / bias); strict pass below 1.
VerificationReport check_truncated_gt_floor();

VerificationReport check_bias_integral_grid();
VerificationReport check_hyper_identity_grid();
VerificationReport check_hyper_limit_grid();

/// Every check above over its full grid.
std::vector<VerificationReport> verify_all(std::uint64_t seed, unsigned threads = 0);

std::string verification_table(const std::vector<VerificationReport>& reports);
std::string verification_json(const std::vector<VerificationReport>& reports, std::uint64_t seed);

}  // namespace unseen
