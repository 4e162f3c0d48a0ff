#include "gaitscore/nn/gradcheck.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "gaitscore/random.hpp"

namespace gaitscore::nn {

std::vector<PoseFrame> random_clip(const ModelSpec& spec, std::uint64_t seed) {
  CounterRng rng(seed, 11);
  PoseFrame current(static_cast<std::size_t>(spec.n_joints));
  for (auto& j : current) j = Joint3D(rng.normal(), rng.normal(), rng.normal());
  std::vector<PoseFrame> frames;
  for (int k = 0; k < spec.window; ++k) {
    for (auto& j : current) j += 0.2 * Joint3D(rng.normal(), rng.normal(), rng.normal());
    frames.push_back(current);
  }
  return frames;
}

GradcheckReport gradcheck(const GradcheckConfig& cfg) {
  const auto started = std::chrono::steady_clock::now();
  Network net(cfg.spec, cfg.seed);
  CounterRng rng(cfg.seed, 12);
  for (std::size_t i = 0; i < net.parameters().size(); ++i) {
    if (net.parameter_names()[i].ends_with(".bias")) {
      for (Eigen::Index k = 0; k < net.parameters()[i].size(); ++k) {
        net.parameters()[i].data()[k] = rng.uniform(-0.1, 0.1);
      }
    }
  }
  const FeatureTensor x = compute_features(random_clip(cfg.spec, cfg.seed));
  const LabelPair y = LabelPair::from_label(cfg.label, cfg.spec.num_classes);

  const Eigen::VectorXd logits = net.forward_logits(x);
  const LossGradient lg = loss_from_logits(y, logits, cfg.loss, cfg.mode);
  const TensorList analytic = net.backward(lg.grad_logits);

  // The ordinal distance is a constant of the sample; hold it fixed so the
  // finite differences see the same objective the analytic gradient does.
  const Eigen::VectorXd p0 = softmax(logits);
  const int fixed_prediction = argmax(std::span<const double>(p0.data(), p0.size()));
  auto objective = [&]() {
    const Eigen::VectorXd p = net.predict(x);
    const std::span<const double> ps(p.data(), p.size());
    double value = 0.0;
    switch (cfg.mode) {
      case LossMode::CrossEntropy: value = cross_entropy(y, ps, cfg.loss); break;
      case LossMode::Focal: value = focal(y, ps, cfg.loss); break;
      case LossMode::Ordinal: value = ordinal(y, ps, fixed_prediction, cfg.loss); break;
      case LossMode::FocalOrdinal:
        value = focal(y, ps, cfg.loss) + cfg.loss.lambda * ordinal(y, ps, fixed_prediction, cfg.loss);
        break;
    }
    return value;
  };

  GradcheckReport report;
  auto& params = net.parameters();
  for (std::size_t i = 0; i < params.size(); ++i) {
    TensorGradcheck tc;
    tc.name = net.parameter_names()[i];
    tc.count = static_cast<std::size_t>(params[i].size());
    for (Eigen::Index k = 0; k < params[i].size(); ++k) {
      double& w = params[i].data()[k];
      const double saved = w;
      w = saved + cfg.step;
      const double up = objective();
      w = saved - cfg.step;
      const double down = objective();
      w = saved;
      const double numeric = (up - down) / (2.0 * cfg.step);
      const double a = analytic[i].data()[k];
      const double abs_err = std::abs(a - numeric);
      const double denom = std::max({std::abs(a), std::abs(numeric), cfg.denominator_floor});
      tc.max_abs_error = std::max(tc.max_abs_error, abs_err);
      tc.max_rel_error = std::max(tc.max_rel_error, abs_err / denom);
    }
    report.max_rel_error = std::max(report.max_rel_error, tc.max_rel_error);
    report.tensors.push_back(std::move(tc));
  }
  report.passed = report.max_rel_error <= cfg.tolerance;
  report.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return report;
}

}  // namespace gaitscore::nn
