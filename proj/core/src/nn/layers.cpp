#include "gaitscore/nn/layers.hpp"

#include "gaitscore/error.hpp"

namespace gaitscore::nn {

Tensor Conv1D::forward(const TensorList& params, const Tensor& x, Cache& cache) const {
  if (x.rows() != in_channels) {
    throw ShapeError("conv1d: expected " + std::to_string(in_channels) + " input channels, got " +
                     std::to_string(x.rows()));
  }
  const Eigen::Index T = x.cols();
  const Eigen::Index C = in_channels;
  const int pad = kernel / 2;
  cache.length = T;
  if (kernel == 1) {
    cache.columns = x;
  } else {
    cache.columns.setZero(C * kernel, T);
    for (int tap = 0; tap < kernel; ++tap) {
      const Eigen::Index shift = tap - pad;
      const Eigen::Index dst_begin = std::max<Eigen::Index>(0, -shift);
      const Eigen::Index dst_end = std::min<Eigen::Index>(T, T - shift);
      if (dst_end <= dst_begin) continue;
      cache.columns.block(tap * C, dst_begin, C, dst_end - dst_begin) =
          x.middleCols(dst_begin + shift, dst_end - dst_begin);
    }
  }
  Tensor y = params[weight] * cache.columns;
  y.colwise() += params[bias].col(0);
  return y;
}

Tensor Conv1D::backward(const TensorList& params, const Cache& cache, const Tensor& dy,
                        TensorList& grads, bool need_input_grad) const {
  grads[weight].noalias() += dy * cache.columns.transpose();
  grads[bias].col(0) += dy.rowwise().sum();
  if (!need_input_grad) return {};

  const Eigen::Index T = cache.length;
  const Eigen::Index C = in_channels;
  const Tensor dcols = params[weight].transpose() * dy;
  if (kernel == 1) return dcols;

  const int pad = kernel / 2;
  Tensor dx = Tensor::Zero(C, T);
  for (int tap = 0; tap < kernel; ++tap) {
    const Eigen::Index shift = tap - pad;
    const Eigen::Index dst_begin = std::max<Eigen::Index>(0, -shift);
    const Eigen::Index dst_end = std::min<Eigen::Index>(T, T - shift);
    if (dst_end <= dst_begin) continue;
    dx.middleCols(dst_begin + shift, dst_end - dst_begin) +=
        dcols.block(tap * C, dst_begin, C, dst_end - dst_begin);
  }
  return dx;
}

Tensor LeakyRelu::forward(const Tensor& x, Cache& cache) const {
  cache.input = x;
  return x.unaryExpr([](double v) { return v > 0.0 ? v : kLeakySlope * v; });
}

Tensor LeakyRelu::backward(const Cache& cache, const Tensor& dy) const {
  return dy.binaryExpr(cache.input,
                       [](double g, double v) { return v > 0.0 ? g : kLeakySlope * g; });
}

Tensor MaxPool2::forward(const Tensor& x, Eigen::Index out_length, Cache& cache) const {
  const Eigen::Index T = x.cols();
  if (out_length < 1 || 2 * (out_length - 1) >= T) {
    throw ShapeError("maxpool: cannot pool " + std::to_string(T) + " frames to " +
                     std::to_string(out_length));
  }
  cache.in_length = T;
  cache.argmax.resize(x.rows(), out_length);
  Tensor y(x.rows(), out_length);
  for (Eigen::Index t = 0; t < out_length; ++t) {
    const Eigen::Index a = 2 * t;
    const Eigen::Index b = a + 1;
    for (Eigen::Index c = 0; c < x.rows(); ++c) {
      if (b < T && x(c, b) > x(c, a)) {
        y(c, t) = x(c, b);
        cache.argmax(c, t) = static_cast<int>(b);
      } else {
        y(c, t) = x(c, a);
        cache.argmax(c, t) = static_cast<int>(a);
      }
    }
  }
  return y;
}

Tensor MaxPool2::backward(const Cache& cache, const Tensor& dy) const {
  Tensor dx = Tensor::Zero(dy.rows(), cache.in_length);
  for (Eigen::Index t = 0; t < dy.cols(); ++t) {
    for (Eigen::Index c = 0; c < dy.rows(); ++c) dx(c, cache.argmax(c, t)) += dy(c, t);
  }
  return dx;
}

Eigen::VectorXd GlobalAvgPool::forward(const Tensor& x, Cache& cache) const {
  cache.length = x.cols();
  return x.rowwise().mean();
}

Tensor GlobalAvgPool::backward(const Cache& cache, const Eigen::VectorXd& dy) const {
  return (dy / static_cast<double>(cache.length)).replicate(1, cache.length);
}

Eigen::VectorXd Dense::forward(const TensorList& params, const Eigen::VectorXd& x,
                               Cache& cache) const {
  if (x.size() != in_features) throw ShapeError("dense: input size mismatch");
  cache.input = x;
  return params[weight] * x + params[bias].col(0);
}

Eigen::VectorXd Dense::backward(const TensorList& params, const Cache& cache,
                                const Eigen::VectorXd& dy, TensorList& grads) const {
  grads[weight].noalias() += dy * cache.input.transpose();
  grads[bias].col(0) += dy;
  return params[weight].transpose() * dy;
}

}  // namespace gaitscore::nn
