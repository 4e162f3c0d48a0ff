#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "gaitscore/dataset.hpp"
#include "gaitscore/metrics.hpp"
#include "gaitscore/nn/network.hpp"
#include "gaitscore/nn/train.hpp"

namespace gaitscore {

struct LoocvConfig {
  PreprocessConfig preprocess;
  int filters = 32;
  nn::TrainConfig train;
  /// Folds trained concurrently; results do not depend on this.
  int workers = 1;
};

using FoldCallback = std::function<void(std::size_t fold, const FoldResult& result)>;

/// Participant-level leave-one-out: one fold per exam. Every exam sharing
/// the held-out subject id is excluded from training, clips and crops
/// alike. The held-out exam is scored by voting over its clips. Each fold's
/// seed is derived from the base seed and the fold index, so results are
/// identical for any worker count. A fold whose training set lacks a class
/// records a warning and still runs.
std::vector<FoldResult> loocv(std::span<const PoseDocument> exams, const LoocvConfig& cfg,
                              const FoldCallback& on_fold = {});

/// Probabilities of each clip plus the voted exam prediction.
FoldResult score_exam(const nn::Network& model, const PreparedExam& exam);

}  // namespace gaitscore
