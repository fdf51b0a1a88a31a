/// @file checkpoint.hpp
/// Versioned JSON checkpoints for policy/critic parameters. Doubles are
/// serialized with round-trip precision, so save -> load reproduces forward
/// outputs exactly.

#pragma once

#include <cstdint>
#include <string>

#include "romrl/ppo.hpp"

namespace romrl {

inline constexpr const char* kCheckpointMagic = "romrl-checkpoint-v1";

struct Checkpoint {
    GaussianPolicy policy;
    Mlp critic;
    std::uint64_t seed = 0;
    int update_index = 0;
    std::string meta;  // JSON text echoing env/training configuration
};

void save_checkpoint(const std::string& path, const Checkpoint& checkpoint);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace romrl
