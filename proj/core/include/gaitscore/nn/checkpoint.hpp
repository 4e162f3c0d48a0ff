#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>

#include "gaitscore/nn/adam.hpp"
#include "gaitscore/nn/network.hpp"

namespace gaitscore::nn {

// Binary checkpoint, all integers and doubles little-endian:
//   magic "GSCKPT\0\0" | u32 version | u64 spec hash
//   u32 filters | u32 n_joints | u32 window | u32 num_classes
//   u32 tensor count | per tensor: u32 rows, u32 cols, rows*cols f64 (column-major)
//   u8 has_adam | [u64 step | m tensors | v tensors]
inline constexpr std::uint32_t kCheckpointVersion = 1;

struct Checkpoint {
  Network model;
  std::optional<AdamState> adam;
};

void write_checkpoint(std::ostream& out, const Network& model, const AdamState* adam = nullptr);
void save_checkpoint(const std::filesystem::path& path, const Network& model,
                     const AdamState* adam = nullptr);

/// Throws CheckpointError on a bad magic/version, a stored hash that does
/// not match the stored spec, or (when `expected` is given) a spec whose
/// hash differs from the expected one.
Checkpoint read_checkpoint(std::istream& in, const std::optional<ModelSpec>& expected = {});
Checkpoint load_checkpoint(const std::filesystem::path& path,
                           const std::optional<ModelSpec>& expected = {});

}  // namespace gaitscore::nn
