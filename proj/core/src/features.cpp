#include "gaitscore/features.hpp"

#include <string>

#include "gaitscore/error.hpp"

namespace gaitscore {

namespace {

int joint_count(std::span<const PoseFrame> frames) {
  if (frames.empty()) throw InputError("features: empty clip");
  const auto n = frames.front().size();
  for (const auto& f : frames) {
    if (f.size() != n) throw InputError("features: frames have differing joint counts");
  }
  return static_cast<int>(n);
}

void write_difference(const PoseFrame& to, const PoseFrame& from, Eigen::MatrixXd& out,
                      Eigen::Index col) {
  for (std::size_t j = 0; j < to.size(); ++j) {
    out.block<3, 1>(static_cast<Eigen::Index>(3 * j), col) = to[j] - from[j];
  }
}

}  // namespace

Eigen::MatrixXd jcd(std::span<const PoseFrame> frames) {
  const int n = joint_count(frames);
  Eigen::MatrixXd out(jcd_size(n), static_cast<Eigen::Index>(frames.size()));
  for (std::size_t k = 0; k < frames.size(); ++k) {
    const auto& f = frames[k];
    Eigen::Index row = 0;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        out(row++, static_cast<Eigen::Index>(k)) = (f[i] - f[j]).norm();
      }
    }
  }
  return out;
}

MotionFeatures motion(std::span<const PoseFrame> frames) {
  const int n = joint_count(frames);
  const auto K = static_cast<Eigen::Index>(frames.size());
  if (K < 3) {
    throw TooShortError("motion features need at least 3 frames, got " + std::to_string(K));
  }
  MotionFeatures m;
  m.slow.resize(3 * n, K - 1);
  for (Eigen::Index k = 0; k + 1 < K; ++k) {
    write_difference(frames[k + 1], frames[k], m.slow, k);
  }
  m.fast.resize(3 * n, (K - 1) / 2);
  for (Eigen::Index c = 0; c < m.fast.cols(); ++c) {
    const Eigen::Index k = 2 * c;
    write_difference(frames[k + 2], frames[k], m.fast, c);
  }
  return m;
}

FeatureTensor compute_features(std::span<const PoseFrame> frames) {
  FeatureTensor t;
  t.jcd = jcd(frames);
  auto m = motion(frames);
  t.slow = std::move(m.slow);
  t.fast = std::move(m.fast);
  return t;
}

}  // namespace gaitscore
