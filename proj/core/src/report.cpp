#include "gaitscore/report.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "gaitscore/detail/atomic_write.hpp"

namespace gaitscore {

namespace {

std::string cell(double v) {
  if (!std::isfinite(v)) return "  n/a";
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%5.2f", v);
  return buf;
}

nlohmann::json number_or_null(double v) {
  return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
}

nlohmann::json metrics_json(const ClassMetrics& m) {
  return {{"f1", number_or_null(m.f1)},
          {"auc", number_or_null(m.auc)},
          {"precision", number_or_null(m.precision)},
          {"recall", number_or_null(m.recall)},
          {"support", m.support}};
}

nlohmann::json report_object(const EvalReport& report) {
  nlohmann::json j;
  j["n_exams"] = report.n_exams;
  j["balanced_accuracy"] = number_or_null(report.balanced_accuracy);
  j["macro"] = metrics_json(report.macro);
  j["per_class"] = nlohmann::json::array();
  for (std::size_t c = 0; c < report.per_class.size(); ++c) {
    auto m = metrics_json(report.per_class[c]);
    m["class"] = c;
    j["per_class"].push_back(m);
  }
  j["confusion"] = nlohmann::json::array();
  for (Eigen::Index r = 0; r < report.confusion.rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index c = 0; c < report.confusion.cols(); ++c) row.push_back(report.confusion(r, c));
    j["confusion"].push_back(row);
  }
  return j;
}

}  // namespace

void write_report_table(std::ostream& out, const EvalReport& report) {
  out << "Gait Score        F1    AUC    Pre    Rec\n";
  out << "-----------------------------------------\n";
  for (std::size_t c = 0; c < report.per_class.size(); ++c) {
    const auto& m = report.per_class[c];
    char label[32];
    std::snprintf(label, sizeof(label), "%-13zu", c);
    out << label << "  " << cell(m.f1) << "  " << cell(m.auc) << "  " << cell(m.precision) << "  "
        << cell(m.recall) << '\n';
  }
  out << "-----------------------------------------\n";
  out << "Macro Average  " << cell(report.macro.f1) << "  " << cell(report.macro.auc) << "  "
      << cell(report.macro.precision) << "  " << cell(report.macro.recall) << '\n';
  out << "Balanced accuracy: " << cell(report.balanced_accuracy) << " (" << report.n_exams
      << " exams)\n";
}

std::string report_json(const EvalReport& report, std::span<const FoldResult> folds,
                        const std::optional<Comparison>& comparison) {
  nlohmann::json j = report_object(report);
  j["folds"] = nlohmann::json::array();
  for (const auto& f : folds) {
    nlohmann::json fold{{"subject_id", f.subject_id},
                        {"truth", f.truth},
                        {"predicted", f.predicted},
                        {"n_clips", f.clip_probs.size()}};
    fold["probabilities"] = std::vector<double>(f.exam_probs.data(), f.exam_probs.data() + f.exam_probs.size());
    if (!f.warnings.empty()) fold["warnings"] = f.warnings;
    j["folds"].push_back(fold);
  }
  if (comparison) {
    j["comparison"] = {{"baseline", comparison->baseline},
                       {"pairing", comparison->pairing},
                       {"wilcoxon_statistic", comparison->test.statistic},
                       {"wilcoxon_p", comparison->test.p_value},
                       {"wilcoxon_n", comparison->test.n},
                       {"exact", comparison->test.exact},
                       {"baseline_report", report_object(comparison->baseline_report)}};
  }
  return j.dump(2) + "\n";
}

void write_confusion_csv(std::ostream& out, const EvalReport& report) {
  out << "true\\pred";
  for (Eigen::Index c = 0; c < report.confusion.cols(); ++c) out << ',' << c;
  out << '\n';
  for (Eigen::Index r = 0; r < report.confusion.rows(); ++r) {
    out << r;
    for (Eigen::Index c = 0; c < report.confusion.cols(); ++c) out << ',' << report.confusion(r, c);
    out << '\n';
  }
}

void write_fold_csv(std::ostream& out, std::span<const FoldResult> folds) {
  out << "subject_id,truth,predicted";
  const Eigen::Index C = folds.empty() ? 0 : folds.front().exam_probs.size();
  for (Eigen::Index c = 0; c < C; ++c) out << ",p" << c;
  out << '\n';
  char buf[32];
  for (const auto& f : folds) {
    out << f.subject_id << ',' << f.truth << ',' << f.predicted;
    for (Eigen::Index c = 0; c < f.exam_probs.size(); ++c) {
      std::snprintf(buf, sizeof(buf), ",%.17g", f.exam_probs[c]);
      out << buf;
    }
    out << '\n';
  }
}

void write_report_files(const std::filesystem::path& dir, const EvalReport& report,
                        std::span<const FoldResult> folds,
                        const std::optional<Comparison>& comparison) {
  std::filesystem::create_directories(dir);
  write_atomically(dir / "report.txt", [&](std::ostream& out) { write_report_table(out, report); });
  write_atomically(dir / "report.json",
                   [&](std::ostream& out) { out << report_json(report, folds, comparison); });
  write_atomically(dir / "confusion.csv", [&](std::ostream& out) { write_confusion_csv(out, report); });
  write_atomically(dir / "folds.csv", [&](std::ostream& out) { write_fold_csv(out, folds); });
}

}  // namespace gaitscore
