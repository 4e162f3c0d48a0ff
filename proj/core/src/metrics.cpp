#include "gaitscore/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numeric>

#include "gaitscore/error.hpp"
#include "gaitscore/losses.hpp"

namespace gaitscore {

VoteResult vote(std::span<const Eigen::VectorXd> clip_probs) {
  if (clip_probs.empty()) throw InputError("vote: no clips");
  const Eigen::Index C = clip_probs.front().size();
  std::vector<int> counts(static_cast<std::size_t>(C), 0);
  Eigen::VectorXd summed = Eigen::VectorXd::Zero(C);
  for (const auto& p : clip_probs) {
    if (p.size() != C) throw InputError("vote: clip probability vectors differ in length");
    ++counts[static_cast<std::size_t>(argmax(std::span<const double>(p.data(), p.size())))];
    summed += p;
  }
  int best = 0;
  for (int c = 1; c < C; ++c) {
    const auto uc = static_cast<std::size_t>(c);
    const auto ub = static_cast<std::size_t>(best);
    if (counts[uc] > counts[ub] || (counts[uc] == counts[ub] && summed[c] > summed[best])) best = c;
  }
  return {best, summed / static_cast<double>(clip_probs.size())};
}

double rank_auc(std::span<const double> scores, std::span<const bool> positive) {
  if (scores.size() != positive.size()) throw InputError("rank_auc: size mismatch");
  const std::size_t n = scores.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  // Mid-ranks (1-based) over tie groups.
  std::vector<double> rank(n);
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j + 1 < n && scores[order[j + 1]] == scores[order[i]]) ++j;
    const double mid = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) rank[order[k]] = mid;
    i = j + 1;
  }
  double n_pos = 0.0, rank_sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (positive[i]) {
      n_pos += 1.0;
      rank_sum += rank[i];
    }
  }
  const double n_neg = static_cast<double>(n) - n_pos;
  if (n_pos == 0.0 || n_neg == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return (rank_sum - n_pos * (n_pos + 1.0) / 2.0) / (n_pos * n_neg);
}

EvalReport compute_metrics(std::span<const FoldResult> folds, int num_classes) {
  EvalReport report;
  report.n_exams = static_cast<int>(folds.size());
  report.confusion = Eigen::MatrixXi::Zero(num_classes, num_classes);
  for (const auto& f : folds) {
    if (f.truth < 0 || f.truth >= num_classes || f.predicted < 0 || f.predicted >= num_classes) {
      throw InputError("metrics: label outside class range for subject " + f.subject_id);
    }
    ++report.confusion(f.truth, f.predicted);
  }

  report.per_class.resize(static_cast<std::size_t>(num_classes));
  std::vector<double> scores(folds.size());
  std::unique_ptr<bool[]> positive(new bool[folds.size()]);
  int present = 0;
  for (int c = 0; c < num_classes; ++c) {
    ClassMetrics& m = report.per_class[static_cast<std::size_t>(c)];
    const double tp = report.confusion(c, c);
    const double predicted = report.confusion.col(c).sum();
    m.support = report.confusion.row(c).sum();
    m.precision = predicted > 0 ? tp / predicted : 0.0;
    m.recall = m.support > 0 ? tp / m.support : 0.0;
    m.f1 = (m.precision + m.recall) > 0 ? 2.0 * m.precision * m.recall / (m.precision + m.recall) : 0.0;

    for (std::size_t i = 0; i < folds.size(); ++i) {
      scores[i] = folds[i].exam_probs.size() > c ? folds[i].exam_probs[c] : 0.0;
      positive[i] = folds[i].truth == c;
    }
    m.auc = rank_auc(scores, std::span<const bool>(positive.get(), folds.size()));

    if (m.support > 0) {
      ++present;
      report.macro.f1 += m.f1;
      report.macro.precision += m.precision;
      report.macro.recall += m.recall;
    }
  }
  if (present > 0) {
    report.macro.f1 /= present;
    report.macro.precision /= present;
    report.macro.recall /= present;
  }
  double auc_sum = 0.0;
  int auc_count = 0;
  for (const auto& m : report.per_class) {
    if (m.support > 0 && std::isfinite(m.auc)) {
      auc_sum += m.auc;
      ++auc_count;
    }
  }
  report.macro.auc = auc_count > 0 ? auc_sum / auc_count : std::numeric_limits<double>::quiet_NaN();
  report.macro.support = report.n_exams;
  report.balanced_accuracy = report.macro.recall;
  return report;
}

PairingUnit parse_pairing_unit(const std::string& name) {
  if (name == "correct") return PairingUnit::Correctness;
  if (name == "prob") return PairingUnit::TrueClassProbability;
  throw InputError("unknown pairing unit '" + name + "' (expected correct or prob)");
}

std::vector<double> paired_scores(std::span<const FoldResult> folds, PairingUnit unit) {
  std::vector<double> out;
  out.reserve(folds.size());
  for (const auto& f : folds) {
    if (unit == PairingUnit::Correctness) {
      out.push_back(f.predicted == f.truth ? 1.0 : 0.0);
    } else {
      out.push_back(f.exam_probs[f.truth]);
    }
  }
  return out;
}

}  // namespace gaitscore
