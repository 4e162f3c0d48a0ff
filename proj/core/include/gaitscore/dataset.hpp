#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gaitscore/features.hpp"
#include "gaitscore/nn/train.hpp"
#include "gaitscore/pose.hpp"
#include "gaitscore/pose_io.hpp"

namespace gaitscore {

/// Exam-to-clip preprocessing shared by training, evaluation and scoring.
struct PreprocessConfig {
  int window = kDefaultWindow;
  int min_tail = kDefaultMinTail;
  /// Extra temporal crops per exam for the sparse classes.
  int sparse_crops = 2;
  double crop_fraction = 0.8;
  std::vector<int> sparse_classes{2, 3};

  void validate() const;
};

/// Normalized exam split into clips, plus training-only crops.
struct PreparedExam {
  std::string subject_id;
  std::optional<int> label;
  std::vector<Clip> clips;
  std::vector<Clip> crops;
};

/// normalize_center -> clip_sequence -> augment_crops (sparse classes only).
/// Crop offsets are seeded from `seed` and the subject id, so an exam gets
/// the same crops whichever fold it is in.
PreparedExam prepare_exam(const PoseDocument& doc, const PreprocessConfig& cfg,
                          std::uint64_t seed);

/// Training samples from every clip and crop of the given exams. Throws
/// InputError if an exam has no label.
std::vector<nn::TrainingSample> training_samples(std::span<const PreparedExam> exams);

/// Features of the exam's clips (crops excluded).
std::vector<FeatureTensor> clip_features(const PreparedExam& exam);

/// 64-bit FNV-1a of a string; used to derive per-subject seeds.
std::uint64_t hash_string(const std::string& text);

}  // namespace gaitscore
