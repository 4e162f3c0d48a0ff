#pragma once

#include <Eigen/Core>

namespace gaitscore {

struct BoundingBox {
  double x1 = 0.0, y1 = 0.0, x2 = 0.0, y2 = 0.0;
  double score = 1.0;

  double width() const { return x2 - x1; }
  double height() const { return y2 - y1; }
  double area() const { return width() * height(); }
  /// x2 > x1, y2 > y1, all finite.
  bool valid() const;

  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

/// Intersection over union; 0 for disjoint boxes.
double iou(const BoundingBox& a, const BoundingBox& b);

using Vector7d = Eigen::Matrix<double, 7, 1>;
using Matrix7d = Eigen::Matrix<double, 7, 7>;
using Vector4d = Eigen::Vector4d;

/// Noise model for the constant-velocity box filter. Defaults follow the
/// usual SORT tuning.
struct KalmanNoise {
  Vector4d measurement = Vector4d(1.0, 1.0, 10.0, 10.0);
  Vector7d process = (Vector7d() << 1.0, 1.0, 1.0, 1.0, 1e-2, 1e-2, 1e-4).finished();
  Vector7d initial = (Vector7d() << 10.0, 10.0, 10.0, 10.0, 1e4, 1e4, 1e4).finished();
};

/// State (u, v, s, r, du, dv, ds): box centre, area, aspect ratio w/h and
/// the velocities of the first three. r is held constant by the model.
struct KalmanBoxState {
  Vector7d mean = Vector7d::Zero();
  Matrix7d covariance = Matrix7d::Identity();

  static KalmanBoxState from_box(const BoundingBox& box, const KalmanNoise& noise = {});
  /// Current box estimate; score is carried through as 1.
  BoundingBox to_box() const;
};

/// Measurement vector (u, v, s, r) for a box.
Vector4d box_to_measurement(const BoundingBox& box);

KalmanBoxState kalman_predict(const KalmanBoxState& state, const KalmanNoise& noise = {});
KalmanBoxState kalman_update(const KalmanBoxState& state, const BoundingBox& measurement,
                             const KalmanNoise& noise = {});

}  // namespace gaitscore
