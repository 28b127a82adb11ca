#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "unseen/prevalence.hpp"

namespace unseen {

struct BaselineKind {
  enum class Family { ChaoLee, Ace, Jackknife, ShenChaoLin, Empirical };

  Family family = Family::ChaoLee;
  std::uint32_t jackknife_order = 1;  // 1..5, Jackknife only
  std::uint64_t ace_cutoff = 10;      // rare-abundance cutoff, Ace only

  static BaselineKind chao_lee() { return {Family::ChaoLee}; }
  static BaselineKind ace(std::uint64_t cutoff = 10) { return {Family::Ace, 1, cutoff}; }
  static BaselineKind jackknife(std::uint32_t order);
  static BaselineKind shen_chao_lin() { return {Family::ShenChaoLin}; }
  static BaselineKind empirical() { return {Family::Empirical}; }

  /// "chao-lee", "ace", "jackknife1".."jackknife5", "scl", "empirical".
  std::string name() const;
  static BaselineKind parse(std::string_view name);
};

struct BaselineResult {
  double value = 0.0;
  std::optional<std::string> warning;
};

/// Support size S-hat. ShenChaoLin uses the bias-corrected Chao1 estimate;
/// Empirical returns the observed count.
///
///   ChaoLee (CL92):  C = 1 - f1/n,  S0 = D/C,
///                    g2 = max(S0 sum i(i-1) f_i / (n(n-1)) - 1, 0),
///                    S = S0 + f1 g2 / C
///   ACE (cutoff c):  rare = frequencies <= c, C = 1 - f1/n_rare,
///                    g2 = max(S_rare/C sum_{i<=c} i(i-1) f_i / (n_rare(n_rare-1)) - 1, 0),
///                    S = S_abund + S_rare/C + f1 g2 / C
///   Jackknife(m):    S = sum_{j=0..m} (-1)^j (n-j)^m / (j! (m-j)!) S_(j), where
///                    S_(j) = D - sum_{i<=j} f_i C(n-i, j-i)/C(n, j) is the mean
///                    distinct count with j samples left out; m = 1 gives
///                    D + f1 (n-1)/n
///   Chao1 (bc):      S = D + (n-1)/n f1 (f1-1) / (2 (f2+1))
///
/// Coverage-based kinds with f1 = n fall back to Jackknife(1) with the
/// warning "all-singletons: coverage undefined".
BaselineResult baseline_support(const PrevalenceHistogram& hist, const BaselineKind& kind);

/// Number of new species in m = t n further samples (SCL03):
///   U = f0 (1 - (1 - f1/(n f0))^m),  f0 = S - D,
/// with the base clamped to [0, 1] and U = 0 when f1 = 0 or f0 = 0.
double shen_chao_lin_extrapolation(const PrevalenceHistogram& hist, double f0, double t);

/// Unseen prediction: baseline_support then the SCL extrapolation.
/// Empirical always returns 0.
BaselineResult baseline_unseen(const PrevalenceHistogram& hist, double t, const BaselineKind& kind);

}  // namespace unseen
