#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>

#include "graphrl/optimizer.hpp"
#include "graphrl/policy.hpp"

namespace graphrl {

// Binary checkpoint, little-endian:
//   "GRLQ" u32 version  i32 K  i32 L
//   7 x (u64 rows, u64 cols, rows*cols f32 row-major)      theta1..theta7
//   u8 has_optimizer [f64 lr, beta1, beta2, eps, u64 step, 7 first moments, 7 second moments]
//   u64 training steps completed
struct Checkpoint {
    PolicyParams<float> params;
    std::optional<AdamState<float>> optimizer;
    std::uint64_t train_steps = 0;

    bool operator==(const Checkpoint&) const = default;
};

inline constexpr std::uint32_t kCheckpointVersion = 1;

void write_checkpoint(std::ostream& out, const Checkpoint& ckpt);
Checkpoint read_checkpoint(std::istream& in, const std::string& source_name = "<stream>");

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt);
// Throws DataError if the file is missing, truncated, or malformed.
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace graphrl
