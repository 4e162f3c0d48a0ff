#pragma once

#include <span>

#include <Eigen/Core>

#include "gaitscore/pose.hpp"

namespace gaitscore {

/// Per-clip network input. Every stream is channels x time:
///   jcd  : C(n,2) x K                pairwise joint distances
///   slow : 3n x (K-1)                S[k+1] - S[k]
///   fast : 3n x floor((K-1)/2)       S[k+2] - S[k] at k = 0, 2, 4, ...
struct FeatureTensor {
  Eigen::MatrixXd jcd;
  Eigen::MatrixXd slow;
  Eigen::MatrixXd fast;

  Eigen::Index frames() const { return jcd.cols(); }
};

/// Number of joint pairs i < j.
constexpr int jcd_size(int n_joints) { return n_joints * (n_joints - 1) / 2; }

/// Column index of pair (i, j), i < j, in the flattened upper triangle:
/// (0,1), (0,2), ..., (0,n-1), (1,2), ...
constexpr int jcd_pair_index(int i, int j, int n_joints) {
  return i * n_joints - i * (i + 1) / 2 + (j - i - 1);
}

/// Joint Collection Distances, one column per frame.
Eigen::MatrixXd jcd(std::span<const PoseFrame> frames);

struct MotionFeatures {
  Eigen::MatrixXd slow;
  Eigen::MatrixXd fast;
};

/// Two-scale motion. Throws TooShortError for fewer than 3 frames.
MotionFeatures motion(std::span<const PoseFrame> frames);

/// jcd + motion for one clip.
FeatureTensor compute_features(std::span<const PoseFrame> frames);
inline FeatureTensor compute_features(const Clip& clip) { return compute_features(clip.frames); }

}  // namespace gaitscore
