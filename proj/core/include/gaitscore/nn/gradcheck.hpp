#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gaitscore/losses.hpp"
#include "gaitscore/nn/network.hpp"

namespace gaitscore::nn {

struct GradcheckConfig {
  ModelSpec spec{.filters = 4, .n_joints = 6, .window = 16, .num_classes = 4};
  double step = 1e-4;       // central-difference h
  double tolerance = 1e-4;  // max allowed relative error
  /// Relative error uses max(|analytic|, |numeric|, floor) as denominator.
  double denominator_floor = 1e-8;
  std::uint64_t seed = 1;
  int label = 2;
  LossMode mode = LossMode::FocalOrdinal;
  LossConfig loss;
};

struct TensorGradcheck {
  std::string name;
  std::size_t count = 0;
  double max_rel_error = 0.0;
  double max_abs_error = 0.0;
};

struct GradcheckReport {
  std::vector<TensorGradcheck> tensors;
  double max_rel_error = 0.0;
  double seconds = 0.0;
  bool passed = false;
};

/// Random clip of `spec.window` frames on `spec.n_joints` joints (smooth
/// random walk), used as gradient-check input.
std::vector<PoseFrame> random_clip(const ModelSpec& spec, std::uint64_t seed);

/// Central finite differences of the full network + loss against
/// Network::backward for every parameter of a freshly initialised model
/// with randomised biases.
GradcheckReport gradcheck(const GradcheckConfig& cfg = {});

}  // namespace gaitscore::nn
