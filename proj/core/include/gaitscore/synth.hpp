#pragma once

#include <cstdint>

#include "gaitscore/pose.hpp"

namespace gaitscore {

/// Kinematic parameters of one synthetic walker after per-subject jitter.
/// Angles in radians, lengths in metres, cadence in gait cycles per second.
struct GaitParams {
  double arm_swing = 0.0;   // peak shoulder flexion
  double hip_flexion = 0.0; // peak hip flexion (stride amplitude)
  double knee_flexion = 0.0;// peak knee flexion during swing (foot lift)
  double cadence = 0.0;
  double stoop = 0.0;       // forward torso pitch
  double elbow = 0.0;       // resting elbow flexion
  double sway = 0.0;        // lateral sway amplitude (class 3 only)
  double body_scale = 1.0;
  double phase = 0.0;
  double joint_noise = 0.0; // per-coordinate pose-estimation noise (std dev)
};

/// Class schedule plus jitter drawn from `seed` alone, so two classes
/// generated with the same seed share the same multipliers and stay ordered.
GaitParams gait_params(int class_label, std::uint64_t seed);

/// Deterministic walking sequence on the SMPL-24 skeleton: the walker goes
/// straight along its heading, turns around, and walks back. Arm swing,
/// stride and foot lift shrink from class 0 to 2; class 3 adds lateral
/// sway and a stooped torso. Throws InputError for a layout other than
/// SkeletonLayout::smpl24() or duration_frames < 1.
PoseSequence synth_gait(int class_label, const SkeletonLayout& layout, int duration_frames,
                        std::uint64_t seed, double fps = 30.0);

}  // namespace gaitscore
