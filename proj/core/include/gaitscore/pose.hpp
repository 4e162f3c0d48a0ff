#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace gaitscore {

using Joint3D = Eigen::Vector3d;

/// One skeleton: joint positions in layout order.
using PoseFrame = std::vector<Joint3D>;

/// Gait score classes handled by the pipeline (item 3.10 score 4 excluded).
inline constexpr int kNumClasses = 4;

struct SkeletonLayout {
  int n_joints = 24;
  int hip_left = 1;
  int hip_right = 2;
  int neck = 12;

  /// SMPL 24-joint ordering: pelvis=0, hips=1/2, neck=12.
  static SkeletonLayout smpl24() { return {}; }

  /// Throws InputError unless indices are distinct and < n_joints, n_joints >= 2.
  void validate() const;

  friend bool operator==(const SkeletonLayout&, const SkeletonLayout&) = default;
};

struct PoseSequence {
  std::vector<PoseFrame> frames;
  double fps = 30.0;
  std::string subject_id;
  std::optional<int> label;

  std::size_t size() const { return frames.size(); }
  int n_joints() const {
    return frames.empty() ? 0 : static_cast<int>(frames.front().size());
  }

  /// Throws InputError on empty sequences, ragged frames, non-finite
  /// coordinates, non-positive fps, or labels outside [0, kNumClasses).
  void validate() const;
};

/// A fixed-length window of an exam; always inherits the exam's label.
struct Clip {
  std::vector<PoseFrame> frames;
  std::string subject_id;
  std::optional<int> label;
  /// First source frame of the window (informational).
  std::size_t start = 0;

  std::size_t size() const { return frames.size(); }
};

inline constexpr int kDefaultWindow = 200;
inline constexpr int kDefaultMinTail = 100;

/// Centers every frame on the mid-hip and divides by the sequence-mean
/// torso length (mid-hip to neck). Throws DegenerateInputError when that
/// mean is zero.
PoseSequence normalize_center(const PoseSequence& seq, const SkeletonLayout& layout);

/// Splits into `window`-frame clips at stride `window` from frame 0. Any
/// remainder adds one clip aligned to the end (it overlaps the previous
/// clip). Sequences shorter than `window` yield one clip padded with copies
/// of the last frame. Throws TooShortError when size() < min_tail.
std::vector<Clip> clip_sequence(const PoseSequence& seq, int window = kDefaultWindow,
                                int min_tail = kDefaultMinTail);

/// Seeded temporal crops of round(W * crop_fraction) frames, each padded
/// back to W by repeating its last frame.
std::vector<Clip> augment_crops(const Clip& clip, int n_crops, double crop_fraction,
                                std::uint64_t seed);

}  // namespace gaitscore
