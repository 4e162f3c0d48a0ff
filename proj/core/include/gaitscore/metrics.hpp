#pragma once

#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "gaitscore/pose.hpp"

namespace gaitscore {

struct VoteResult {
  int label = 0;
  Eigen::VectorXd probabilities;  // mean of the clip probabilities
};

/// Majority vote over per-clip argmax labels. Ties go to the tied class
/// with the largest summed probability, then to the smaller index. Throws
/// InputError for an empty list.
VoteResult vote(std::span<const Eigen::VectorXd> clip_probs);

/// One leave-one-out fold.
struct FoldResult {
  std::string subject_id;
  std::vector<Eigen::VectorXd> clip_probs;
  Eigen::VectorXd exam_probs;
  int predicted = 0;
  int truth = 0;
  std::vector<std::string> warnings;
  /// Subjects the fold's model was trained on.
  std::vector<std::string> training_subjects;
};

struct ClassMetrics {
  double f1 = 0.0;
  double auc = 0.0;  // NaN when the class has no positives or no negatives
  double precision = 0.0;
  double recall = 0.0;
  int support = 0;   // number of exams whose true label is this class
};

struct EvalReport {
  Eigen::MatrixXi confusion;  // rows = true class, cols = predicted class
  std::vector<ClassMetrics> per_class;
  ClassMetrics macro;
  double balanced_accuracy = 0.0;
  int n_exams = 0;
};

/// One-vs-rest AUC: probability that a positive outscores a negative, ties
/// counted one half. NaN when either group is empty.
double rank_auc(std::span<const double> scores, std::span<const bool> positive);

/// Confusion matrix, per-class F1/AUC/precision/recall, and unweighted
/// macro averages over the classes that occur in the ground truth.
/// Precision and F1 are 0 when undefined. Balanced accuracy is the macro
/// recall.
EvalReport compute_metrics(std::span<const FoldResult> folds, int num_classes = kNumClasses);

/// Per-exam quantity compared between two methods in a paired test.
enum class PairingUnit { Correctness, TrueClassProbability };

PairingUnit parse_pairing_unit(const std::string& name);
/// One value per fold, in fold order.
std::vector<double> paired_scores(std::span<const FoldResult> folds, PairingUnit unit);

}  // namespace gaitscore
