#include "gaitscore/synth.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "gaitscore/error.hpp"
#include "gaitscore/random.hpp"

namespace gaitscore {

namespace {

using std::numbers::pi;

struct ClassSchedule {
  double arm_swing, hip_flexion, knee_flexion, cadence, stoop, elbow, sway;
};

// Mobility drops from class 0 to 2; class 3 is stooped and unsteady.
constexpr std::array<ClassSchedule, kNumClasses> kSchedule{{
    {0.55, 0.42, 0.75, 0.95, 0.04, 0.25, 0.00},
    {0.36, 0.31, 0.55, 0.87, 0.08, 0.30, 0.00},
    {0.18, 0.20, 0.35, 0.77, 0.14, 0.40, 0.00},
    {0.06, 0.14, 0.25, 0.62, 0.45, 0.60, 0.05},
}};

// SMPL-24 joint indices.
enum Joint : int {
  kPelvis = 0, kLHip = 1, kRHip = 2, kSpine1 = 3, kLKnee = 4, kRKnee = 5,
  kSpine2 = 6, kLAnkle = 7, kRAnkle = 8, kSpine3 = 9, kLFoot = 10, kRFoot = 11,
  kNeck = 12, kLCollar = 13, kRCollar = 14, kHead = 15, kLShoulder = 16,
  kRShoulder = 17, kLElbow = 18, kRElbow = 19, kLWrist = 20, kRWrist = 21,
  kLHand = 22, kRHand = 23,
};

// Segment lengths (metres) for a body_scale of 1.
constexpr double kPelvisHeight = 0.92;
constexpr double kHipHalfWidth = 0.09;
constexpr double kHipDrop = 0.06;
constexpr double kThigh = 0.42;
constexpr double kShin = 0.42;
constexpr double kFoot = 0.14;
constexpr double kShoulderHalfWidth = 0.18;
constexpr double kUpperArm = 0.29;
constexpr double kForearm = 0.26;
constexpr double kHand = 0.08;

// Walk straight for kStraightSeconds, then turn 180 degrees over kTurnSeconds.
constexpr double kStraightSeconds = 4.0;
constexpr double kTurnSeconds = 1.0;

double heading_at(double t) {
  const double cycle = kStraightSeconds + kTurnSeconds;
  const double turns_done = std::floor(t / cycle);
  const double in_cycle = t - turns_done * cycle;
  const double partial =
      in_cycle <= kStraightSeconds ? 0.0 : (in_cycle - kStraightSeconds) / kTurnSeconds;
  return pi * (turns_done + partial);
}

// Slow lateral drift built from a few incommensurate sinusoids.
struct SwayProcess {
  std::array<double, 3> freq{}, phase{};
  double amplitude = 0.0;

  double operator()(double t) const {
    double s = 0.0;
    for (std::size_t i = 0; i < freq.size(); ++i) s += std::sin(2.0 * pi * freq[i] * t + phase[i]);
    return amplitude * s / static_cast<double>(freq.size());
  }
};

}  // namespace

GaitParams gait_params(int class_label, std::uint64_t seed) {
  if (class_label < 0 || class_label >= kNumClasses) {
    throw InputError("synth_gait: class must be in 0..3, got " + std::to_string(class_label));
  }
  const ClassSchedule& c = kSchedule[static_cast<std::size_t>(class_label)];
  CounterRng rng(seed, 1);
  const double amp = rng.uniform(0.92, 1.08);
  const double cad = rng.uniform(0.95, 1.05);
  const double stoop_shift = rng.uniform(-0.02, 0.02);

  GaitParams p;
  p.arm_swing = c.arm_swing * amp;
  p.hip_flexion = c.hip_flexion * amp;
  p.knee_flexion = c.knee_flexion * amp;
  p.cadence = c.cadence * cad;
  p.stoop = c.stoop + stoop_shift;
  p.elbow = c.elbow;
  p.sway = c.sway;
  p.body_scale = rng.uniform(0.92, 1.08);
  p.phase = rng.uniform(0.0, 2.0 * pi);
  p.joint_noise = 0.004;
  return p;
}

PoseSequence synth_gait(int class_label, const SkeletonLayout& layout, int duration_frames,
                        std::uint64_t seed, double fps) {
  if (!(layout == SkeletonLayout::smpl24())) {
    throw InputError("synth_gait: only the SMPL-24 layout is supported");
  }
  if (duration_frames < 1) throw InputError("synth_gait: duration_frames must be >= 1");
  if (!(fps > 0.0)) throw InputError("synth_gait: fps must be positive");

  const GaitParams p = gait_params(class_label, seed);
  const double s = p.body_scale;

  SwayProcess sway;
  {
    CounterRng rng(seed, 2);
    for (std::size_t i = 0; i < sway.freq.size(); ++i) {
      sway.freq[i] = rng.uniform(0.15, 0.6);
      sway.phase[i] = rng.uniform(0.0, 2.0 * pi);
    }
    sway.amplitude = p.sway * s;
  }
  SwayProcess roll = sway;
  roll.amplitude = p.sway > 0.0 ? 0.12 : 0.0;
  for (auto& ph : roll.phase) ph += 1.0;

  CounterRng noise(seed, 3 + static_cast<std::uint64_t>(class_label));

  // Forward speed from step length and cadence (two steps per gait cycle).
  const double leg = (kThigh + kShin) * s;
  const double speed = 2.0 * (2.0 * leg * std::sin(p.hip_flexion)) * p.cadence / 2.0;

  PoseSequence seq;
  seq.fps = fps;
  seq.subject_id = "synth_c" + std::to_string(class_label) + "_" + std::to_string(seed);
  seq.label = class_label;
  seq.frames.reserve(static_cast<std::size_t>(duration_frames));

  Eigen::Vector3d position = Eigen::Vector3d::Zero();
  const double dt = 1.0 / fps;

  for (int k = 0; k < duration_frames; ++k) {
    const double t = k * dt;
    const double phi = 2.0 * pi * p.cadence * t + p.phase;
    const double yaw = heading_at(t);
    const double lateral = sway(t);
    const double roll_angle = roll(t);

    std::array<Eigen::Vector3d, 24> local;
    // Body frame: x to the walker's left, y up, z forward.
    const Eigen::Vector3d pelvis(lateral, kPelvisHeight * s + 0.015 * s * std::cos(2.0 * phi), 0.0);
    local[kPelvis] = pelvis;

    const Eigen::Vector3d up(std::sin(roll_angle), std::cos(p.stoop) * std::cos(roll_angle),
                             std::sin(p.stoop) * std::cos(roll_angle));
    const Eigen::Vector3d fwd(0.0, -std::sin(p.stoop), std::cos(p.stoop));
    const Eigen::Vector3d side(std::cos(roll_angle), -std::sin(roll_angle), 0.0);

    local[kSpine1] = pelvis + 0.10 * s * up;
    local[kSpine2] = local[kSpine1] + 0.13 * s * up;
    local[kSpine3] = local[kSpine2] + 0.13 * s * up;
    local[kNeck] = local[kSpine3] + 0.20 * s * up;
    const Eigen::Vector3d head_dir = (up + 0.1 * fwd).normalized();
    local[kHead] = local[kNeck] + 0.15 * s * head_dir;

    for (int side_sign : {+1, -1}) {
      const bool left = side_sign > 0;
      const double leg_phase = left ? phi : phi + pi;

      // Legs: hip flexion swings the thigh, knee flexes during swing.
      const double hip_angle = p.hip_flexion * std::sin(leg_phase);
      const double lift = 0.5 + 0.5 * std::sin(leg_phase + pi / 3.0);
      const double knee_angle = p.knee_flexion * lift * lift;
      const Eigen::Vector3d hip =
          pelvis + Eigen::Vector3d(side_sign * kHipHalfWidth * s, -kHipDrop * s, 0.0);
      const Eigen::Vector3d thigh(0.0, -std::cos(hip_angle), std::sin(hip_angle));
      const double shin_angle = hip_angle - knee_angle;
      const Eigen::Vector3d shin(0.0, -std::cos(shin_angle), std::sin(shin_angle));
      const double foot_angle = 0.5 * shin_angle;
      const Eigen::Vector3d foot(0.0, std::sin(foot_angle) - 0.3, std::cos(foot_angle));
      const Eigen::Vector3d knee = hip + kThigh * s * thigh;
      const Eigen::Vector3d ankle = knee + kShin * s * shin;

      local[left ? kLHip : kRHip] = hip;
      local[left ? kLKnee : kRKnee] = knee;
      local[left ? kLAnkle : kRAnkle] = ankle;
      local[left ? kLFoot : kRFoot] = ankle + kFoot * s * foot.normalized();

      // Arms swing against the same-side leg.
      const double arm_angle = -p.arm_swing * std::sin(leg_phase);
      const double elbow_angle = p.elbow + 0.5 * p.arm_swing * (0.5 - 0.5 * std::sin(leg_phase));
      const Eigen::Vector3d collar =
          local[kSpine3] + 0.12 * s * up + side_sign * 0.07 * s * side;
      const Eigen::Vector3d shoulder =
          local[kSpine3] + 0.15 * s * up + side_sign * kShoulderHalfWidth * s * side;
      const Eigen::Vector3d upper = -std::cos(arm_angle) * up + std::sin(arm_angle) * fwd;
      const double fore_angle = arm_angle + elbow_angle;
      const Eigen::Vector3d fore = -std::cos(fore_angle) * up + std::sin(fore_angle) * fwd;
      const Eigen::Vector3d elbow = shoulder + kUpperArm * s * upper;
      const Eigen::Vector3d wrist = elbow + kForearm * s * fore;

      local[left ? kLCollar : kRCollar] = collar;
      local[left ? kLShoulder : kRShoulder] = shoulder;
      local[left ? kLElbow : kRElbow] = elbow;
      local[left ? kLWrist : kRWrist] = wrist;
      local[left ? kLHand : kRHand] = wrist + kHand * s * fore;
    }

    const double cy = std::cos(yaw), sy = std::sin(yaw);
    PoseFrame frame(24);
    for (std::size_t j = 0; j < 24; ++j) {
      const Eigen::Vector3d& q = local[j];
      Eigen::Vector3d world(cy * q.x() + sy * q.z(), q.y(), -sy * q.x() + cy * q.z());
      world += position;
      for (int c = 0; c < 3; ++c) world[c] += p.joint_noise * s * noise.normal();
      frame[j] = world;
    }
    seq.frames.push_back(std::move(frame));

    position += speed * dt * Eigen::Vector3d(sy, 0.0, cy);
  }
  return seq;
}

}  // namespace gaitscore
