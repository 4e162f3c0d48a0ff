#include "gaitscore/nn/network.hpp"

#include <cmath>
#include <sstream>

#include "gaitscore/error.hpp"
#include "gaitscore/losses.hpp"
#include "gaitscore/random.hpp"

namespace gaitscore::nn {

namespace {

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

void ModelSpec::validate() const {
  if (filters < 1) throw InputError("filters must be >= 1");
  if (n_joints < 2) throw InputError("n_joints must be >= 2");
  if (window < 3) throw InputError("window must be >= 3 frames");
  if (num_classes < 2) throw InputError("num_classes must be >= 2");
}

std::string ModelSpec::canonical() const {
  std::ostringstream s;
  s << "gaitscore-tcn/v1;filters=" << filters << ";n_joints=" << n_joints << ";window=" << window
    << ";classes=" << num_classes << ";slope=" << kLeakySlope
    << ";branch=c1,c3,pool;backbone=c3x2F,c3x2F,c3x4F;head=gap,dense,softmax";
  return s.str();
}

std::uint64_t ModelSpec::hash() const { return fnv1a(canonical()); }

std::size_t parameter_count(const ModelSpec& spec) {
  Network net(spec, 0);
  std::size_t n = 0;
  for (const auto& p : net.parameters()) n += static_cast<std::size_t>(p.size());
  return n;
}

std::size_t Network::add_param(const std::string& name, Eigen::Index rows, Eigen::Index cols) {
  params_.emplace_back(Eigen::MatrixXd::Zero(rows, cols));
  names_.push_back(name);
  return params_.size() - 1;
}

Network::Network(const ModelSpec& spec, std::uint64_t seed) : spec_(spec) {
  spec_.validate();
  const int F = spec_.filters;
  const int n = spec_.n_joints;

  auto make_conv = [&](const std::string& name, int in, int out, int kernel) {
    Conv1D c;
    c.in_channels = in;
    c.out_channels = out;
    c.kernel = kernel;
    c.weight = add_param(name + ".weight", out, static_cast<Eigen::Index>(in) * kernel);
    c.bias = add_param(name + ".bias", out, 1);
    return c;
  };
  auto make_branch = [&](const std::string& name, int in) {
    Branch b;
    b.pointwise = make_conv(name + ".pointwise", in, F, 1);
    b.temporal = make_conv(name + ".temporal", F, F, 3);
    return b;
  };

  jcd_ = make_branch("jcd", jcd_size(n));
  slow_ = make_branch("slow", 3 * n);
  fast_ = make_branch("fast", 3 * n);
  blocks_[0] = make_conv("block1", 3 * F, 2 * F, 3);
  blocks_[1] = make_conv("block2", 2 * F, 2 * F, 3);
  blocks_[2] = make_conv("block3", 2 * F, 4 * F, 3);
  dense_.in_features = 4 * F;
  dense_.out_features = spec_.num_classes;
  dense_.weight = add_param("dense.weight", spec_.num_classes, 4 * F);
  dense_.bias = add_param("dense.bias", spec_.num_classes, 1);

  // Weights only; biases stay zero.
  for (std::size_t i = 0; i < params_.size(); ++i) {
    if (params_[i].cols() == 1 && names_[i].ends_with(".bias")) continue;
    CounterRng rng(seed, 1000 + i);
    const double limit = std::sqrt(6.0 / static_cast<double>(params_[i].cols()));
    for (Eigen::Index r = 0; r < params_[i].rows(); ++r) {
      for (Eigen::Index c = 0; c < params_[i].cols(); ++c) {
        params_[i](r, c) = rng.uniform(-limit, limit);
      }
    }
  }
}

TensorList Network::zero_like() const {
  TensorList out;
  out.reserve(params_.size());
  for (const auto& p : params_) out.emplace_back(Eigen::MatrixXd::Zero(p.rows(), p.cols()));
  return out;
}

void Network::check_input(const FeatureTensor& x) const {
  const Eigen::Index K = spec_.window;
  const Eigen::Index n = spec_.n_joints;
  auto check = [](const char* branch, const Eigen::MatrixXd& m, Eigen::Index rows,
                  Eigen::Index cols) {
    if (m.rows() != rows || m.cols() != cols) {
      throw ShapeError(std::string("branch '") + branch + "' has shape " +
                       std::to_string(m.rows()) + "x" + std::to_string(m.cols()) + ", expected " +
                       std::to_string(rows) + "x" + std::to_string(cols));
    }
  };
  check("jcd", x.jcd, jcd_size(static_cast<int>(n)), K);
  check("slow", x.slow, 3 * n, K - 1);
  check("fast", x.fast, 3 * n, (K - 1) / 2);
}

Tensor Network::run_branch(const Branch& b, const Tensor& x, bool pool, BranchCache& c) const {
  static const LeakyRelu act;
  Tensor h = act.forward(b.pointwise.forward(params_, x, c.pointwise), c.act1);
  h = act.forward(b.temporal.forward(params_, h, c.temporal), c.act2);
  if (pool) h = MaxPool2{}.forward(h, spec_.merged_length(), c.pool);
  return h;
}

Eigen::VectorXd Network::run(const FeatureTensor& x, Cache& cache) const {
  check_input(x);
  const int F = spec_.filters;
  const Eigen::Index L = spec_.merged_length();

  Tensor merged(3 * F, L);
  merged.topRows(F) = run_branch(jcd_, x.jcd, true, cache.jcd);
  merged.middleRows(F, F) = run_branch(slow_, x.slow, true, cache.slow);
  merged.bottomRows(F) = run_branch(fast_, x.fast, false, cache.fast);

  static const LeakyRelu act;
  Tensor h = std::move(merged);
  for (int i = 0; i < 3; ++i) {
    BlockCache& bc = cache.blocks[i];
    h = act.forward(blocks_[i].forward(params_, h, bc.conv), bc.act);
    h = MaxPool2{}.forward(h, MaxPool2::ceil_length(h.cols()), bc.pool);
  }
  const Eigen::VectorXd pooled = GlobalAvgPool{}.forward(h, cache.gap);
  return dense_.forward(params_, pooled, cache.dense);
}

Eigen::VectorXd Network::forward_logits(const FeatureTensor& x) {
  Cache cache;
  Eigen::VectorXd logits = run(x, cache);
  cache_ = std::move(cache);
  return logits;
}

Eigen::VectorXd Network::forward(const FeatureTensor& x) { return softmax(forward_logits(x)); }

Eigen::VectorXd Network::predict(const FeatureTensor& x) const {
  Cache cache;
  return softmax(run(x, cache));
}

void Network::back_branch(const Branch& b, const BranchCache& c, Tensor dy, bool pool,
                          TensorList& grads) const {
  static const LeakyRelu act;
  if (pool) dy = MaxPool2{}.backward(c.pool, dy);
  dy = act.backward(c.act2, dy);
  dy = b.temporal.backward(params_, c.temporal, dy, grads);
  dy = act.backward(c.act1, dy);
  b.pointwise.backward(params_, c.pointwise, dy, grads, /*need_input_grad=*/false);
}

void Network::accumulate_backward(const Eigen::VectorXd& grad_logits, TensorList& grads) {
  if (!cache_) throw UsageError("backward called without a cached forward pass");
  if (grad_logits.size() != spec_.num_classes) throw ShapeError("backward: bad logit gradient size");
  if (grads.size() != params_.size()) throw ShapeError("backward: gradient list size mismatch");
  const Cache& cache = *cache_;
  static const LeakyRelu act;

  const Eigen::VectorXd dpooled = dense_.backward(params_, cache.dense, grad_logits, grads);
  Tensor dy = GlobalAvgPool{}.backward(cache.gap, dpooled);
  for (int i = 2; i >= 0; --i) {
    const BlockCache& bc = cache.blocks[i];
    dy = MaxPool2{}.backward(bc.pool, dy);
    dy = act.backward(bc.act, dy);
    dy = blocks_[i].backward(params_, bc.conv, dy, grads);
  }
  const int F = spec_.filters;
  back_branch(jcd_, cache.jcd, dy.topRows(F), true, grads);
  back_branch(slow_, cache.slow, dy.middleRows(F, F), true, grads);
  back_branch(fast_, cache.fast, dy.bottomRows(F), false, grads);
}

TensorList Network::backward(const Eigen::VectorXd& grad_logits) {
  TensorList grads = zero_like();
  accumulate_backward(grad_logits, grads);
  return grads;
}

}  // namespace gaitscore::nn
