#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "gaitscore/losses.hpp"
#include "gaitscore/nn/adam.hpp"
#include "gaitscore/nn/network.hpp"

namespace gaitscore::nn {

struct TrainConfig {
  int epochs = 600;
  int batch_size = 64;
  double lr_start = 1e-3;
  double lr_end = 1e-6;
  std::uint64_t seed = 0;
  LossMode loss_mode = LossMode::FocalOrdinal;
  LossConfig loss;
  AdamConfig adam;

  void validate() const;
};

/// Exponential annealing: lr_start * (lr_end / lr_start)^(epoch / (epochs - 1)).
double lr_schedule(int epoch, const TrainConfig& cfg);

struct TrainingSample {
  FeatureTensor features;
  int label = 0;
  std::string subject_id;
};

struct TrainResult {
  Network model;
  AdamState adam;
  /// Mean per-sample loss of each epoch.
  std::vector<double> loss_history;
};

using EpochCallback = std::function<void(int epoch, double mean_loss, double lr)>;

/// Mini-batch Adam on the mean batch loss. Sample order is reshuffled each
/// epoch from the seed; everything is single-threaded and deterministic.
/// Throws InputError for an empty training set.
TrainResult train(std::span<const TrainingSample> samples, const ModelSpec& spec,
                  const TrainConfig& cfg, const EpochCallback& on_epoch = {});

}  // namespace gaitscore::nn
