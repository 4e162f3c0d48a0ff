#include "gaitscore/nn/train.hpp"

#include <cmath>
#include <numeric>

#include "gaitscore/error.hpp"
#include "gaitscore/random.hpp"

namespace gaitscore::nn {

void TrainConfig::validate() const {
  if (epochs < 1) throw InputError("epochs must be >= 1");
  if (batch_size < 1) throw InputError("batch size must be >= 1");
  if (!(lr_end > 0.0) || !(lr_start >= lr_end)) {
    throw InputError("learning rates need lr_start >= lr_end > 0");
  }
  loss.validate();
}

double lr_schedule(int epoch, const TrainConfig& cfg) {
  if (epoch < 0 || epoch >= cfg.epochs) throw InputError("lr_schedule: epoch out of range");
  if (cfg.epochs == 1) return cfg.lr_start;
  const double frac = static_cast<double>(epoch) / static_cast<double>(cfg.epochs - 1);
  return cfg.lr_start * std::pow(cfg.lr_end / cfg.lr_start, frac);
}

TrainResult train(std::span<const TrainingSample> samples, const ModelSpec& spec,
                  const TrainConfig& cfg, const EpochCallback& on_epoch) {
  cfg.validate();
  if (samples.empty()) throw InputError("train: empty training set");
  if (cfg.loss.num_classes != spec.num_classes) {
    throw InputError("train: loss and model disagree on the number of classes");
  }

  TrainResult result;
  result.model = Network(spec, splitmix64(cfg.seed ^ 0x1A2B3C4DULL));
  for (const auto& s : samples) result.model.check_input(s.features);

  std::vector<LabelPair> targets;
  targets.reserve(samples.size());
  for (const auto& s : samples) targets.push_back(LabelPair::from_label(s.label, spec.num_classes));

  result.adam = AdamState::zeros_like(result.model.parameters());
  TensorList grads = result.model.zero_like();
  std::vector<std::size_t> order(samples.size());
  std::iota(order.begin(), order.end(), 0);
  CounterRng shuffler(cfg.seed, 7);
  const auto batch = static_cast<std::size_t>(cfg.batch_size);

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    shuffler.shuffle(std::span<std::size_t>(order));
    const double lr = lr_schedule(epoch, cfg);
    double epoch_loss = 0.0;

    for (std::size_t begin = 0; begin < order.size(); begin += batch) {
      const std::size_t end = std::min(order.size(), begin + batch);
      for (auto& g : grads) g.setZero();
      for (std::size_t k = begin; k < end; ++k) {
        const std::size_t idx = order[k];
        const Eigen::VectorXd logits = result.model.forward_logits(samples[idx].features);
        const LossGradient lg = loss_from_logits(targets[idx], logits, cfg.loss, cfg.loss_mode);
        epoch_loss += lg.value;
        result.model.accumulate_backward(lg.grad_logits, grads);
      }
      const double scale = 1.0 / static_cast<double>(end - begin);
      for (auto& g : grads) g *= scale;
      adam_step(result.model.parameters(), grads, result.adam, lr, cfg.adam);
    }

    const double mean_loss = epoch_loss / static_cast<double>(samples.size());
    result.loss_history.push_back(mean_loss);
    if (on_epoch) on_epoch(epoch, mean_loss, lr);
  }
  result.model.clear_cache();
  return result;
}

}  // namespace gaitscore::nn
