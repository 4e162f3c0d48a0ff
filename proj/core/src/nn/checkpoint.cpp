#include "gaitscore/nn/checkpoint.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "gaitscore/detail/atomic_write.hpp"
#include "gaitscore/error.hpp"

namespace gaitscore::nn {

namespace {

constexpr std::array<char, 8> kMagic{'G', 'S', 'C', 'K', 'P', 'T', '\0', '\0'};

template <typename T>
void put(std::ostream& out, T value) {
  static_assert(std::is_trivially_copyable_v<T>);
  std::array<char, sizeof(T)> bytes;
  std::memcpy(bytes.data(), &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
  out.write(bytes.data(), sizeof(T));
}

template <typename T>
T get(std::istream& in) {
  std::array<char, sizeof(T)> bytes;
  if (!in.read(bytes.data(), sizeof(T))) throw CheckpointError("checkpoint truncated");
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
  T value;
  std::memcpy(&value, bytes.data(), sizeof(T));
  return value;
}

void put_tensor(std::ostream& out, const Eigen::MatrixXd& m) {
  put<std::uint32_t>(out, static_cast<std::uint32_t>(m.rows()));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(m.cols()));
  for (Eigen::Index i = 0; i < m.size(); ++i) put<double>(out, m.data()[i]);
}

void get_tensor_into(std::istream& in, Eigen::MatrixXd& m) {
  const auto rows = get<std::uint32_t>(in);
  const auto cols = get<std::uint32_t>(in);
  if (rows != m.rows() || cols != m.cols()) throw CheckpointError("checkpoint tensor shape mismatch");
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = get<double>(in);
}

}  // namespace

void write_checkpoint(std::ostream& out, const Network& model, const AdamState* adam) {
  const ModelSpec& spec = model.spec();
  out.write(kMagic.data(), kMagic.size());
  put<std::uint32_t>(out, kCheckpointVersion);
  put<std::uint64_t>(out, spec.hash());
  put<std::uint32_t>(out, static_cast<std::uint32_t>(spec.filters));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(spec.n_joints));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(spec.window));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(spec.num_classes));
  const auto& params = model.parameters();
  put<std::uint32_t>(out, static_cast<std::uint32_t>(params.size()));
  for (const auto& p : params) put_tensor(out, p);
  put<std::uint8_t>(out, adam ? 1 : 0);
  if (adam) {
    put<std::uint64_t>(out, adam->step);
    for (const auto& m : adam->m) put_tensor(out, m);
    for (const auto& v : adam->v) put_tensor(out, v);
  }
}

void save_checkpoint(const std::filesystem::path& path, const Network& model,
                     const AdamState* adam) {
  write_atomically(path, [&](std::ostream& out) { write_checkpoint(out, model, adam); });
}

Checkpoint read_checkpoint(std::istream& in, const std::optional<ModelSpec>& expected) {
  std::array<char, 8> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != kMagic) {
    throw CheckpointError("not a gaitscore checkpoint");
  }
  const auto version = get<std::uint32_t>(in);
  if (version != kCheckpointVersion) {
    throw CheckpointError("unsupported checkpoint version " + std::to_string(version));
  }
  const auto stored_hash = get<std::uint64_t>(in);
  ModelSpec spec;
  spec.filters = static_cast<int>(get<std::uint32_t>(in));
  spec.n_joints = static_cast<int>(get<std::uint32_t>(in));
  spec.window = static_cast<int>(get<std::uint32_t>(in));
  spec.num_classes = static_cast<int>(get<std::uint32_t>(in));
  try {
    spec.validate();
  } catch (const InputError& e) {
    throw CheckpointError(std::string("checkpoint spec invalid: ") + e.what());
  }
  if (spec.hash() != stored_hash) {
    throw CheckpointError("checkpoint spec hash does not match its architecture");
  }
  if (expected && expected->hash() != stored_hash) {
    throw CheckpointError("checkpoint spec hash mismatch: checkpoint is '" + spec.canonical() +
                          "', expected '" + expected->canonical() + "'");
  }

  Checkpoint ckpt;
  ckpt.model = Network(spec, 0);
  auto& params = ckpt.model.parameters();
  if (get<std::uint32_t>(in) != params.size()) throw CheckpointError("checkpoint tensor count mismatch");
  for (auto& p : params) get_tensor_into(in, p);
  if (get<std::uint8_t>(in) != 0) {
    AdamState adam = AdamState::zeros_like(params);
    adam.step = get<std::uint64_t>(in);
    for (auto& m : adam.m) get_tensor_into(in, m);
    for (auto& v : adam.v) get_tensor_into(in, v);
    ckpt.adam = std::move(adam);
  }
  return ckpt;
}

Checkpoint load_checkpoint(const std::filesystem::path& path,
                           const std::optional<ModelSpec>& expected) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CheckpointError("cannot open checkpoint " + path.string());
  return read_checkpoint(in, expected);
}

}  // namespace gaitscore::nn
