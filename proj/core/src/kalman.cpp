#include "gaitscore/kalman.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "gaitscore/error.hpp"

namespace gaitscore {

namespace {

using Matrix47d = Eigen::Matrix<double, 4, 7>;

Matrix7d transition() {
  Matrix7d f = Matrix7d::Identity();
  f(0, 4) = 1.0;
  f(1, 5) = 1.0;
  f(2, 6) = 1.0;
  return f;
}

Matrix47d observation() {
  Matrix47d h = Matrix47d::Zero();
  h.leftCols<4>().setIdentity();
  return h;
}

void symmetrize(Matrix7d& p) {
  p = 0.5 * (p + p.transpose()).eval();
  if (!p.allFinite()) throw InternalError("kalman: covariance became non-finite");
}

}  // namespace

bool BoundingBox::valid() const {
  return std::isfinite(x1) && std::isfinite(y1) && std::isfinite(x2) && std::isfinite(y2) &&
         std::isfinite(score) && x2 > x1 && y2 > y1;
}

double iou(const BoundingBox& a, const BoundingBox& b) {
  const double iw = std::min(a.x2, b.x2) - std::max(a.x1, b.x1);
  const double ih = std::min(a.y2, b.y2) - std::max(a.y1, b.y1);
  if (iw <= 0.0 || ih <= 0.0) return 0.0;
  const double inter = iw * ih;
  const double uni = a.area() + b.area() - inter;
  return uni > 0.0 ? inter / uni : 0.0;
}

Vector4d box_to_measurement(const BoundingBox& box) {
  const double w = box.width();
  const double h = box.height();
  return {box.x1 + 0.5 * w, box.y1 + 0.5 * h, w * h, w / h};
}

KalmanBoxState KalmanBoxState::from_box(const BoundingBox& box, const KalmanNoise& noise) {
  if (!box.valid()) throw InputError("kalman: invalid bounding box");
  KalmanBoxState state;
  state.mean.head<4>() = box_to_measurement(box);
  state.covariance = noise.initial.asDiagonal();
  return state;
}

BoundingBox KalmanBoxState::to_box() const {
  const double s = std::max(mean[2], 0.0);
  const double r = std::max(mean[3], 0.0);
  const double w = std::sqrt(s * r);
  const double h = w > 0.0 ? s / w : 0.0;
  return {mean[0] - 0.5 * w, mean[1] - 0.5 * h, mean[0] + 0.5 * w, mean[1] + 0.5 * h, 1.0};
}

KalmanBoxState kalman_predict(const KalmanBoxState& state, const KalmanNoise& noise) {
  static const Matrix7d f = transition();
  KalmanBoxState next = state;
  // Area may not go negative; freeze its velocity when it would.
  if (next.mean[2] + next.mean[6] <= 0.0) next.mean[6] = 0.0;
  next.mean = f * next.mean;
  next.covariance = f * next.covariance * f.transpose();
  next.covariance.diagonal() += noise.process;
  symmetrize(next.covariance);
  return next;
}

KalmanBoxState kalman_update(const KalmanBoxState& state, const BoundingBox& measurement,
                             const KalmanNoise& noise) {
  if (!measurement.valid()) throw InputError("kalman: invalid measurement box");
  static const Matrix47d h = observation();
  const Eigen::Matrix4d r = noise.measurement.asDiagonal();

  const Vector4d innovation = box_to_measurement(measurement) - h * state.mean;
  const Eigen::Matrix4d s = h * state.covariance * h.transpose() + r;
  const Eigen::Matrix<double, 7, 4> gain =
      state.covariance * h.transpose() * s.ldlt().solve(Eigen::Matrix4d::Identity());

  KalmanBoxState next;
  next.mean = state.mean + gain * innovation;
  // Joseph form keeps the covariance positive semi-definite.
  const Matrix7d i_kh = Matrix7d::Identity() - gain * h;
  next.covariance =
      i_kh * state.covariance * i_kh.transpose() + gain * r * gain.transpose();
  symmetrize(next.covariance);
  return next;
}

}  // namespace gaitscore
