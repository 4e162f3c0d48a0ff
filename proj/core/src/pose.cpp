#include "gaitscore/pose.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gaitscore/error.hpp"
#include "gaitscore/random.hpp"

namespace gaitscore {

void SkeletonLayout::validate() const {
  if (n_joints < 2) throw InputError("skeleton layout needs at least 2 joints");
  for (int idx : {hip_left, hip_right, neck}) {
    if (idx < 0 || idx >= n_joints) {
      throw InputError("skeleton layout index " + std::to_string(idx) +
                       " out of range for " + std::to_string(n_joints) + " joints");
    }
  }
  if (hip_left == hip_right || hip_left == neck || hip_right == neck) {
    throw InputError("skeleton layout indices must be distinct");
  }
}

void PoseSequence::validate() const {
  if (frames.empty()) throw InputError("pose sequence has no frames");
  if (!(fps > 0.0) || !std::isfinite(fps)) throw InputError("fps must be positive");
  const std::size_t n = frames.front().size();
  if (n < 2) throw InputError("pose frames need at least 2 joints");
  for (std::size_t k = 0; k < frames.size(); ++k) {
    if (frames[k].size() != n) {
      throw InputError("frame " + std::to_string(k) + " has " +
                       std::to_string(frames[k].size()) + " joints, expected " +
                       std::to_string(n));
    }
    for (const auto& j : frames[k]) {
      if (!j.allFinite()) {
        throw InputError("non-finite coordinate in frame " + std::to_string(k));
      }
    }
  }
  if (label && (*label < 0 || *label >= kNumClasses)) {
    throw InputError("label " + std::to_string(*label) + " outside 0..3");
  }
}

PoseSequence normalize_center(const PoseSequence& seq, const SkeletonLayout& layout) {
  layout.validate();
  if (seq.frames.empty()) throw InputError("normalize_center: empty sequence");
  if (seq.n_joints() != layout.n_joints) {
    throw InputError("normalize_center: sequence has " + std::to_string(seq.n_joints()) +
                     " joints, layout expects " + std::to_string(layout.n_joints));
  }

  std::vector<Joint3D> mid_hips;
  mid_hips.reserve(seq.frames.size());
  double torso_sum = 0.0;
  for (const auto& frame : seq.frames) {
    const Joint3D mid = 0.5 * (frame[layout.hip_left] + frame[layout.hip_right]);
    torso_sum += (frame[layout.neck] - mid).norm();
    mid_hips.push_back(mid);
  }
  const double torso = torso_sum / static_cast<double>(seq.frames.size());
  if (!(torso > 0.0) || !std::isfinite(torso)) {
    throw DegenerateInputError("normalize_center: mean torso length is zero");
  }

  PoseSequence out = seq;
  const double inv = 1.0 / torso;
  for (std::size_t k = 0; k < out.frames.size(); ++k) {
    for (auto& j : out.frames[k]) j = (j - mid_hips[k]) * inv;
  }
  return out;
}

namespace {

Clip make_clip(const std::vector<PoseFrame>& frames, std::size_t begin, std::size_t count,
               std::size_t window, const std::string& subject, std::optional<int> label) {
  Clip clip;
  clip.subject_id = subject;
  clip.label = label;
  clip.start = begin;
  clip.frames.reserve(window);
  for (std::size_t i = 0; i < count; ++i) clip.frames.push_back(frames[begin + i]);
  while (clip.frames.size() < window) clip.frames.push_back(clip.frames.back());
  return clip;
}

}  // namespace

std::vector<Clip> clip_sequence(const PoseSequence& seq, int window, int min_tail) {
  if (window < 1) throw InputError("clip window must be positive");
  if (min_tail < 1) throw InputError("min_tail must be positive");
  const std::size_t K = seq.frames.size();
  if (K < static_cast<std::size_t>(min_tail)) {
    throw TooShortError("sequence of " + std::to_string(K) + " frames is shorter than min_tail " +
                        std::to_string(min_tail));
  }
  const auto W = static_cast<std::size_t>(window);

  std::vector<Clip> clips;
  if (K < W) {
    clips.push_back(make_clip(seq.frames, 0, K, W, seq.subject_id, seq.label));
    return clips;
  }
  std::size_t start = 0;
  for (; start + W <= K; start += W) {
    clips.push_back(make_clip(seq.frames, start, W, W, seq.subject_id, seq.label));
  }
  // Any leftover frames get one end-aligned window; min_tail only decides
  // whether the sequence is usable at all.
  if (start < K) {
    clips.push_back(make_clip(seq.frames, K - W, W, W, seq.subject_id, seq.label));
  }
  return clips;
}

std::vector<Clip> augment_crops(const Clip& clip, int n_crops, double crop_fraction,
                                std::uint64_t seed) {
  if (!(crop_fraction > 0.0 && crop_fraction <= 1.0)) {
    throw InputError("crop_fraction must be in (0, 1]");
  }
  if (n_crops < 0) throw InputError("n_crops must be non-negative");
  if (clip.frames.empty()) throw InputError("cannot crop an empty clip");

  const std::size_t W = clip.frames.size();
  const auto len = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::lround(static_cast<double>(W) * crop_fraction)));
  const std::size_t slack = W - std::min(len, W);

  CounterRng rng(seed, 0xC20F);
  std::vector<Clip> crops;
  crops.reserve(static_cast<std::size_t>(n_crops));
  for (int c = 0; c < n_crops; ++c) {
    const auto offset = static_cast<std::size_t>(rng.below(slack + 1));
    Clip crop = make_clip(clip.frames, offset, std::min(len, W), W, clip.subject_id, clip.label);
    crop.start = clip.start + offset;
    crops.push_back(std::move(crop));
  }
  return crops;
}

}  // namespace gaitscore
