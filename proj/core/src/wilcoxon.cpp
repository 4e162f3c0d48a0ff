#include "gaitscore/wilcoxon.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "gaitscore/error.hpp"

namespace gaitscore {

namespace {

struct SignedRanks {
  std::vector<double> ranks;  // mid-ranks of |d|
  std::vector<bool> positive;
  double tie_term = 0.0;      // sum over tie groups of (t^3 - t)
};

SignedRanks rank_differences(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw InputError("wilcoxon: samples must have equal length");
  std::vector<double> d;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double diff = a[i] - b[i];
    if (!std::isfinite(diff)) throw InputError("wilcoxon: non-finite sample");
    if (diff != 0.0) d.push_back(diff);
  }
  const std::size_t n = d.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t x, std::size_t y) { return std::abs(d[x]) < std::abs(d[y]); });

  SignedRanks out;
  out.ranks.resize(n);
  out.positive.resize(n);
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j + 1 < n && std::abs(d[order[j + 1]]) == std::abs(d[order[i]])) ++j;
    const double mid = 0.5 * static_cast<double>(i + j) + 1.0;
    const double t = static_cast<double>(j - i + 1);
    out.tie_term += t * t * t - t;
    for (std::size_t k = i; k <= j; ++k) out.ranks[order[k]] = mid;
    i = j + 1;
  }
  for (std::size_t i = 0; i < n; ++i) out.positive[i] = d[i] > 0.0;
  return out;
}

WilcoxonResult base_result(const SignedRanks& sr) {
  WilcoxonResult r;
  r.n = static_cast<int>(sr.ranks.size());
  for (std::size_t i = 0; i < sr.ranks.size(); ++i) {
    (sr.positive[i] ? r.w_plus : r.w_minus) += sr.ranks[i];
  }
  r.statistic = std::min(r.w_plus, r.w_minus);
  return r;
}

// Mid-ranks are multiples of 1/2, so doubled ranks are integers and the
// null distribution of 2*W+ is a subset-sum count over them.
WilcoxonResult exact_test(const SignedRanks& sr) {
  WilcoxonResult r = base_result(sr);
  r.exact = true;
  if (r.n == 0) return r;
  std::vector<long> doubled;
  long total = 0;
  for (double rank : sr.ranks) {
    doubled.push_back(std::lround(2.0 * rank));
    total += doubled.back();
  }
  std::vector<double> counts(static_cast<std::size_t>(total) + 1, 0.0);
  counts[0] = 1.0;
  long reach = 0;
  for (long v : doubled) {
    for (long s = reach; s >= 0; --s) {
      if (counts[static_cast<std::size_t>(s)] != 0.0) counts[static_cast<std::size_t>(s + v)] += counts[static_cast<std::size_t>(s)];
    }
    reach += v;
  }
  const long observed = std::lround(2.0 * r.statistic);
  double tail = 0.0;
  for (long s = 0; s <= observed; ++s) tail += counts[static_cast<std::size_t>(s)];
  const double patterns = std::ldexp(1.0, r.n);
  r.p_value = std::min(1.0, 2.0 * tail / patterns);
  return r;
}

WilcoxonResult normal_test(const SignedRanks& sr) {
  WilcoxonResult r = base_result(sr);
  if (r.n == 0) return r;
  const double n = r.n;
  const double mean = n * (n + 1.0) / 4.0;
  const double var = n * (n + 1.0) * (2.0 * n + 1.0) / 24.0 - sr.tie_term / 48.0;
  if (var <= 0.0) return r;
  const double z = std::max(0.0, std::abs(r.w_plus - mean) - 0.5) / std::sqrt(var);
  r.p_value = std::min(1.0, std::erfc(z / std::sqrt(2.0)));
  return r;
}

}  // namespace

WilcoxonResult wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b) {
  const SignedRanks sr = rank_differences(a, b);
  return static_cast<int>(sr.ranks.size()) <= kWilcoxonExactMax ? exact_test(sr) : normal_test(sr);
}

WilcoxonResult wilcoxon_signed_rank_exact(std::span<const double> a, std::span<const double> b) {
  const SignedRanks sr = rank_differences(a, b);
  if (sr.ranks.size() > 62) throw InputError("wilcoxon: exact test limited to 62 differences");
  return exact_test(sr);
}

WilcoxonResult wilcoxon_signed_rank_normal(std::span<const double> a, std::span<const double> b) {
  return normal_test(rank_differences(a, b));
}

}  // namespace gaitscore
