#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Core>

namespace gaitscore::nn {

/// Activations are channels x time.
using Tensor = Eigen::MatrixXd;

/// Flat, ordered parameter (or gradient, or moment) storage.
using TensorList = std::vector<Eigen::MatrixXd>;

inline constexpr double kLeakySlope = 0.1;

/// Temporal convolution with symmetric zero padding (odd kernel), so the
/// output length equals the input length. Weight is out x (kernel * in) with
/// column index tap * in + channel; bias is out x 1.
struct Conv1D {
  int in_channels = 0;
  int out_channels = 0;
  int kernel = 1;
  std::size_t weight = 0;  // index into the parameter list
  std::size_t bias = 0;

  struct Cache {
    Tensor columns;  // im2col of the input
    Eigen::Index length = 0;
  };

  Tensor forward(const TensorList& params, const Tensor& x, Cache& cache) const;
  /// Accumulates dW, db into grads; returns dX unless need_input_grad is false.
  Tensor backward(const TensorList& params, const Cache& cache, const Tensor& dy,
                  TensorList& grads, bool need_input_grad = true) const;
};

struct LeakyRelu {
  struct Cache {
    Tensor input;
  };
  Tensor forward(const Tensor& x, Cache& cache) const;
  Tensor backward(const Cache& cache, const Tensor& dy) const;
};

/// Temporal max-pool with window and stride 2 producing `out_length`
/// columns; the last window may hold a single frame. Ties pick the earlier
/// frame.
struct MaxPool2 {
  struct Cache {
    Eigen::MatrixXi argmax;  // source column per output element
    Eigen::Index in_length = 0;
  };
  /// ceil(length / 2).
  static Eigen::Index ceil_length(Eigen::Index length) { return (length + 1) / 2; }

  Tensor forward(const Tensor& x, Eigen::Index out_length, Cache& cache) const;
  Tensor backward(const Cache& cache, const Tensor& dy) const;
};

/// Mean over time.
struct GlobalAvgPool {
  struct Cache {
    Eigen::Index length = 0;
  };
  Eigen::VectorXd forward(const Tensor& x, Cache& cache) const;
  Tensor backward(const Cache& cache, const Eigen::VectorXd& dy) const;
};

/// y = W x + b with W out x in, b out x 1.
struct Dense {
  int in_features = 0;
  int out_features = 0;
  std::size_t weight = 0;
  std::size_t bias = 0;

  struct Cache {
    Eigen::VectorXd input;
  };
  Eigen::VectorXd forward(const TensorList& params, const Eigen::VectorXd& x, Cache& cache) const;
  Eigen::VectorXd backward(const TensorList& params, const Cache& cache, const Eigen::VectorXd& dy,
                           TensorList& grads) const;
};

}  // namespace gaitscore::nn
