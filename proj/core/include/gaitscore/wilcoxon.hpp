#pragma once

#include <span>

namespace gaitscore {

/// Largest number of non-zero differences handled by the exact null.
inline constexpr int kWilcoxonExactMax = 25;

struct WilcoxonResult {
  double statistic = 0.0;  // min(W+, W-)
  double w_plus = 0.0;
  double w_minus = 0.0;
  double p_value = 1.0;    // two-sided
  int n = 0;               // non-zero differences
  bool exact = false;
};

/// Paired two-sided signed-rank test on a - b. Zero differences are
/// dropped; tied |differences| get mid-ranks. For n <= kWilcoxonExactMax the
/// null distribution of W+ is enumerated exactly over all 2^n sign
/// patterns of the observed ranks; above that a normal approximation with
/// tie and continuity corrections is used. All-zero differences give p = 1.
WilcoxonResult wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b);

/// Force the exact or the approximate branch (for cross-checking).
WilcoxonResult wilcoxon_signed_rank_exact(std::span<const double> a, std::span<const double> b);
WilcoxonResult wilcoxon_signed_rank_normal(std::span<const double> a, std::span<const double> b);

}  // namespace gaitscore
