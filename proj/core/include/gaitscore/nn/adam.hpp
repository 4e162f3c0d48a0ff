#pragma once

#include <cstdint>

#include "gaitscore/nn/layers.hpp"

namespace gaitscore::nn {

struct AdamConfig {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

/// First/second moments shaped like the parameters, plus the step count.
struct AdamState {
  TensorList m;
  TensorList v;
  std::uint64_t step = 0;

  static AdamState zeros_like(const TensorList& params);
};

/// One bias-corrected Adam update of `params` in place.
void adam_step(TensorList& params, const TensorList& grads, AdamState& state, double lr,
               const AdamConfig& cfg = {});

}  // namespace gaitscore::nn
