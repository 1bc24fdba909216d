#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>

#include "seenet/model.hpp"

namespace seenet {

struct Checkpoint {
  SeeNet model;
  std::size_t iteration = 0;
  std::uint64_t seed = 0;
};

// "SECK" | u32 header length | JSON header {config, iteration, seed, tensors}
// | parameter tensors in SETN format, in header order.
void save_checkpoint(const std::filesystem::path& path, const SeeNet& model, std::size_t iteration,
                     std::uint64_t seed);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace seenet
