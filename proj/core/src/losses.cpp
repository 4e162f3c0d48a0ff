#include "gaitscore/losses.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "gaitscore/error.hpp"

namespace gaitscore {

namespace {

void check_inputs(const LabelPair& y, std::span<const double> p, const LossConfig& cfg) {
  if (static_cast<int>(p.size()) != cfg.num_classes ||
      y.one_hot.size() != static_cast<Eigen::Index>(p.size())) {
    throw InputError("loss: expected " + std::to_string(cfg.num_classes) + " probabilities");
  }
  if (y.label < 0 || y.label >= cfg.num_classes) throw InputError("loss: label out of range");
  double sum = 0.0;
  for (double v : p) {
    if (!std::isfinite(v) || v < -kProbSumTolerance) {
      throw InputError("loss: probabilities must be finite and non-negative");
    }
    sum += v;
  }
  if (std::abs(sum - 1.0) > kProbSumTolerance) {
    throw InputError("loss: probabilities sum to " + std::to_string(sum) + ", not 1");
  }
}

double clamp_prob(double v) { return std::clamp(v, kProbEpsilon, 1.0 - kProbEpsilon); }

std::span<const double> as_span(const Eigen::VectorXd& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}

// Power with 0^0 = 1, so gamma = 0 reduces to cross-entropy everywhere.
double pow0(double base, double exponent) {
  return exponent == 0.0 ? 1.0 : std::pow(base, exponent);
}

}  // namespace

void LossConfig::validate() const {
  if (!(alpha > 0.0)) throw InputError("alpha must be > 0");
  if (!(gamma >= 0.0)) throw InputError("gamma must be >= 0");
  if (!(lambda >= 0.0)) throw InputError("lambda must be >= 0");
  if (num_classes < 2) throw InputError("need at least 2 classes");
}

LossMode parse_loss_mode(std::string_view name) {
  if (name == "ce") return LossMode::CrossEntropy;
  if (name == "focal") return LossMode::Focal;
  if (name == "ordinal") return LossMode::Ordinal;
  if (name == "focal+ordinal") return LossMode::FocalOrdinal;
  throw InputError("unknown loss mode '" + std::string(name) +
                   "' (expected ce, focal, ordinal or focal+ordinal)");
}

std::string_view to_string(LossMode mode) {
  switch (mode) {
    case LossMode::CrossEntropy: return "ce";
    case LossMode::Focal: return "focal";
    case LossMode::Ordinal: return "ordinal";
    case LossMode::FocalOrdinal: return "focal+ordinal";
  }
  return "?";
}

LabelPair LabelPair::from_label(int label, int num_classes) {
  if (label < 0 || label >= num_classes) throw InputError("label out of range");
  LabelPair y;
  y.label = label;
  y.one_hot = Eigen::VectorXd::Zero(num_classes);
  y.one_hot[label] = 1.0;
  return y;
}

int argmax(std::span<const double> p) {
  if (p.empty()) throw InputError("argmax of empty vector");
  return static_cast<int>(std::max_element(p.begin(), p.end()) - p.begin());
}

Eigen::VectorXd softmax(const Eigen::VectorXd& logits) {
  const double shift = logits.maxCoeff();
  Eigen::VectorXd e = (logits.array() - shift).exp();
  return e / e.sum();
}

double focal(const LabelPair& y, std::span<const double> p, const LossConfig& cfg) {
  check_inputs(y, p, cfg);
  double loss = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double yi = y.one_hot[static_cast<Eigen::Index>(i)];
    if (yi == 0.0) continue;
    const double pi = clamp_prob(p[i]);
    loss += -cfg.alpha * pow0(1.0 - pi, cfg.gamma) * yi * std::log(pi);
  }
  return loss;
}

double ordinal(const LabelPair& y, std::span<const double> p, int predicted,
               const LossConfig& cfg) {
  check_inputs(y, p, cfg);
  const double w = std::abs(y.label - predicted);
  double ce = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double yi = y.one_hot[static_cast<Eigen::Index>(i)];
    if (yi != 0.0) ce += -yi * std::log(clamp_prob(p[i]));
  }
  return (1.0 + w) / cfg.num_classes * ce;
}

double ordinal(const LabelPair& y, std::span<const double> p, const LossConfig& cfg) {
  return ordinal(y, p, argmax(p), cfg);
}

double hybrid(const LabelPair& y, std::span<const double> p, const LossConfig& cfg) {
  return focal(y, p, cfg) + cfg.lambda * ordinal(y, p, cfg);
}

double cross_entropy(const LabelPair& y, std::span<const double> p, const LossConfig& cfg) {
  check_inputs(y, p, cfg);
  double ce = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double yi = y.one_hot[static_cast<Eigen::Index>(i)];
    if (yi != 0.0) ce += -yi * std::log(clamp_prob(p[i]));
  }
  return ce;
}

LossGradient loss_gradient(const LabelPair& y, const Eigen::VectorXd& p, const LossConfig& cfg,
                           LossMode mode) {
  const auto ps = as_span(p);
  check_inputs(y, ps, cfg);
  const Eigen::Index C = p.size();

  LossGradient out;
  out.grad_probs = Eigen::VectorXd::Zero(C);

  const bool use_focal = mode == LossMode::Focal || mode == LossMode::FocalOrdinal;
  const bool use_ordinal = mode == LossMode::Ordinal || mode == LossMode::FocalOrdinal;
  const double ordinal_scale = mode == LossMode::FocalOrdinal ? cfg.lambda : 1.0;

  if (mode == LossMode::CrossEntropy) {
    out.value = cross_entropy(y, ps, cfg);
    for (Eigen::Index i = 0; i < C; ++i) {
      if (y.one_hot[i] != 0.0) out.grad_probs[i] += -y.one_hot[i] / clamp_prob(p[i]);
    }
  }
  if (use_focal) {
    out.value += focal(y, ps, cfg);
    for (Eigen::Index i = 0; i < C; ++i) {
      const double yi = y.one_hot[i];
      if (yi == 0.0) continue;
      const double pi = clamp_prob(p[i]);
      const double q = 1.0 - pi;
      double d = pow0(q, cfg.gamma) / pi;
      if (cfg.gamma != 0.0) d -= cfg.gamma * pow0(q, cfg.gamma - 1.0) * std::log(pi);
      out.grad_probs[i] += -cfg.alpha * yi * d;
    }
  }
  if (use_ordinal) {
    const int predicted = argmax(ps);
    out.value += ordinal_scale * ordinal(y, ps, predicted, cfg);
    const double weight = (1.0 + std::abs(y.label - predicted)) / cfg.num_classes;
    for (Eigen::Index i = 0; i < C; ++i) {
      if (y.one_hot[i] != 0.0) {
        out.grad_probs[i] += -ordinal_scale * weight * y.one_hot[i] / clamp_prob(p[i]);
      }
    }
  }

  // Softmax Jacobian: dz_j = p_j (g_j - sum_i g_i p_i).
  const double dot = out.grad_probs.dot(p);
  out.grad_logits = p.cwiseProduct((out.grad_probs.array() - dot).matrix());
  return out;
}

LossGradient loss_from_logits(const LabelPair& y, const Eigen::VectorXd& logits,
                              const LossConfig& cfg, LossMode mode) {
  return loss_gradient(y, softmax(logits), cfg, mode);
}

}  // namespace gaitscore
