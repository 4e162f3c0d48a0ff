#pragma once

#include <span>
#include <string>
#include <string_view>

#include <Eigen/Core>

namespace gaitscore {

/// Probabilities are clamped to [kProbEpsilon, 1 - kProbEpsilon] before logs.
inline constexpr double kProbEpsilon = 1e-12;
/// Allowed deviation of sum(p) from 1.
inline constexpr double kProbSumTolerance = 1e-6;

struct LossConfig {
  double alpha = 0.25;  // focal weighting factor
  double gamma = 2.0;   // focal focusing parameter
  double lambda = 1.0;  // weight of the ordinal term
  int num_classes = 4;

  void validate() const;
};

enum class LossMode { CrossEntropy, Focal, Ordinal, FocalOrdinal };

LossMode parse_loss_mode(std::string_view name);
std::string_view to_string(LossMode mode);

/// One-hot target and its integer class.
struct LabelPair {
  Eigen::VectorXd one_hot;
  int label = 0;

  static LabelPair from_label(int label, int num_classes);
};

/// Index of the largest entry; the smallest index wins ties.
int argmax(std::span<const double> p);

Eigen::VectorXd softmax(const Eigen::VectorXd& logits);

/// sum_i -alpha (1 - p_i)^gamma y_i ln p_i
double focal(const LabelPair& y, std::span<const double> p, const LossConfig& cfg);
/// -(1 + w) / C * sum_i y_i ln p_i, w = |label - predicted|.
double ordinal(const LabelPair& y, std::span<const double> p, int predicted,
               const LossConfig& cfg);
/// Ordinal loss with predicted = argmax(p).
double ordinal(const LabelPair& y, std::span<const double> p, const LossConfig& cfg);
/// focal + lambda * ordinal.
double hybrid(const LabelPair& y, std::span<const double> p, const LossConfig& cfg);
double cross_entropy(const LabelPair& y, std::span<const double> p, const LossConfig& cfg);

struct LossGradient {
  double value = 0.0;
  Eigen::VectorXd grad_probs;   // dL/dp, clamping treated as identity
  Eigen::VectorXd grad_logits;  // dL/dz through softmax
};

/// Loss value and gradients for a probability vector produced by softmax.
/// The ordinal distance w is taken from argmax(p) and carries no gradient.
LossGradient loss_gradient(const LabelPair& y, const Eigen::VectorXd& p, const LossConfig& cfg,
                           LossMode mode);

/// softmax(logits) followed by loss_gradient.
LossGradient loss_from_logits(const LabelPair& y, const Eigen::VectorXd& logits,
                              const LossConfig& cfg, LossMode mode);

}  // namespace gaitscore
