#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>

#include "gaitscore/metrics.hpp"
#include "gaitscore/wilcoxon.hpp"

namespace gaitscore {

/// Rows = gait score 0..3 then "Macro Average"; columns F1, AUC, Pre, Rec.
void write_report_table(std::ostream& out, const EvalReport& report);

/// JSON document with per-class and macro metrics, balanced accuracy,
/// confusion matrix and (optionally) a paired Wilcoxon comparison.
struct Comparison {
  std::string baseline;
  std::string pairing;
  WilcoxonResult test;
  EvalReport baseline_report;
};
std::string report_json(const EvalReport& report, std::span<const FoldResult> folds,
                        const std::optional<Comparison>& comparison = {});

/// Confusion matrix as CSV with a header row of predicted classes.
void write_confusion_csv(std::ostream& out, const EvalReport& report);

/// subject_id,truth,predicted,p0,p1,p2,p3, one row per fold.
void write_fold_csv(std::ostream& out, std::span<const FoldResult> folds);

/// Writes report.txt, report.json, confusion.csv and folds.csv into `dir`.
void write_report_files(const std::filesystem::path& dir, const EvalReport& report,
                        std::span<const FoldResult> folds,
                        const std::optional<Comparison>& comparison = {});

}  // namespace gaitscore
