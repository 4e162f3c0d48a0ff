#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gaitscore/features.hpp"
#include "gaitscore/nn/layers.hpp"

namespace gaitscore::nn {

/// Shape-defining hyperparameters of the classifier.
struct ModelSpec {
  int filters = 32;    // F
  int n_joints = 24;
  int window = 200;    // K, frames per clip
  int num_classes = 4;

  void validate() const;
  /// Time steps after the branch merge: floor((K - 1) / 2).
  int merged_length() const { return (window - 1) / 2; }
  /// Canonical description of the architecture; hashed into checkpoints.
  std::string canonical() const;
  std::uint64_t hash() const;

  friend bool operator==(const ModelSpec&, const ModelSpec&) = default;
};

/// Number of trainable scalars for a spec.
std::size_t parameter_count(const ModelSpec& spec);

/// Two-scale-motion + JCD temporal CNN.
///
///   per branch (jcd, slow, fast): conv k1 (F) -> leaky -> conv k3 (F) -> leaky
///   jcd, slow: max-pool 2 to floor((K-1)/2) frames
///   concat (3F) -> [conv k3 -> leaky -> max-pool 2] with 2F, 2F, 4F filters
///   -> global average pool -> dense (num_classes) -> softmax
///
/// forward() caches the activations that backward() consumes, so a Network
/// instance must not be shared between threads while training. predict() is
/// const and safe for concurrent use.
class Network {
 public:
  Network() = default;
  /// Fan-in scaled uniform weights (limit sqrt(6 / fan_in)), zero biases.
  Network(const ModelSpec& spec, std::uint64_t seed);

  const ModelSpec& spec() const { return spec_; }
  TensorList& parameters() { return params_; }
  const TensorList& parameters() const { return params_; }
  const std::vector<std::string>& parameter_names() const { return names_; }
  /// Zero tensors shaped like parameters().
  TensorList zero_like() const;

  /// Logits for one clip; caches activations for backward().
  Eigen::VectorXd forward_logits(const FeatureTensor& x);
  /// Class probabilities; caches activations for backward().
  Eigen::VectorXd forward(const FeatureTensor& x);
  /// Probabilities without touching the cache.
  Eigen::VectorXd predict(const FeatureTensor& x) const;

  /// Gradient of the loss w.r.t. every parameter, given dL/dlogits for the
  /// most recent forward(). Throws UsageError if no forward is cached.
  TensorList backward(const Eigen::VectorXd& grad_logits);
  /// Same, but adds into `grads` (shaped like parameters()).
  void accumulate_backward(const Eigen::VectorXd& grad_logits, TensorList& grads);

  /// Throws ShapeError naming the first branch whose shape is wrong.
  void check_input(const FeatureTensor& x) const;

  bool has_cache() const { return cache_.has_value(); }
  void clear_cache() { cache_.reset(); }

 private:
  struct Branch {
    Conv1D pointwise;
    Conv1D temporal;
  };
  struct BranchCache {
    Conv1D::Cache pointwise, temporal;
    LeakyRelu::Cache act1, act2;
    MaxPool2::Cache pool;
  };
  struct BlockCache {
    Conv1D::Cache conv;
    LeakyRelu::Cache act;
    MaxPool2::Cache pool;
  };
  struct Cache {
    BranchCache jcd, slow, fast;
    BlockCache blocks[3];
    GlobalAvgPool::Cache gap;
    Dense::Cache dense;
  };

  Eigen::VectorXd run(const FeatureTensor& x, Cache& cache) const;
  Tensor run_branch(const Branch& b, const Tensor& x, bool pool, BranchCache& c) const;
  void back_branch(const Branch& b, const BranchCache& c, Tensor dy, bool pool,
                   TensorList& grads) const;

  std::size_t add_param(const std::string& name, Eigen::Index rows, Eigen::Index cols);

  ModelSpec spec_;
  TensorList params_;
  std::vector<std::string> names_;
  Branch jcd_, slow_, fast_;
  Conv1D blocks_[3];
  Dense dense_;
  std::optional<Cache> cache_;
};

}  // namespace gaitscore::nn
