#include "gaitscore/nn/adam.hpp"

#include <cmath>

#include "gaitscore/error.hpp"

namespace gaitscore::nn {

AdamState AdamState::zeros_like(const TensorList& params) {
  AdamState s;
  for (const auto& p : params) {
    s.m.emplace_back(Eigen::MatrixXd::Zero(p.rows(), p.cols()));
    s.v.emplace_back(Eigen::MatrixXd::Zero(p.rows(), p.cols()));
  }
  return s;
}

void adam_step(TensorList& params, const TensorList& grads, AdamState& state, double lr,
               const AdamConfig& cfg) {
  if (grads.size() != params.size() || state.m.size() != params.size() ||
      state.v.size() != params.size()) {
    throw ShapeError("adam_step: tensor list sizes differ");
  }
  ++state.step;
  const double t = static_cast<double>(state.step);
  const double correction1 = 1.0 - std::pow(cfg.beta1, t);
  const double correction2 = 1.0 - std::pow(cfg.beta2, t);

  for (std::size_t i = 0; i < params.size(); ++i) {
    auto& p = params[i];
    const auto& g = grads[i];
    if (g.rows() != p.rows() || g.cols() != p.cols()) {
      throw ShapeError("adam_step: gradient " + std::to_string(i) + " shape mismatch");
    }
    auto& m = state.m[i];
    auto& v = state.v[i];
    m = cfg.beta1 * m + (1.0 - cfg.beta1) * g;
    v = cfg.beta2 * v + (1.0 - cfg.beta2) * g.cwiseProduct(g);
    p.array() -= lr * (m.array() / correction1) /
                 ((v.array() / correction2).sqrt() + cfg.epsilon);
  }
}

}  // namespace gaitscore::nn
