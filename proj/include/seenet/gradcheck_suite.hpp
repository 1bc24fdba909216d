#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "seenet/gradcheck.hpp"

namespace seenet {

struct GradCheckEntry {
  std::string name;
  GradCheckResult result;
};

struct GradCheckReport {
  std::vector<GradCheckEntry> entries;
  double max_rel_error = 0.0;
  std::size_t checked = 0;
  std::size_t skipped = 0;
};

// Finite-difference checks in double precision over conv2d (input, weight,
// bias), global_avg_pool, bce_multilabel_loss, c_relu with all three mask
// values, and the full three-branch loss of a small model (image and every
// parameter tensor). Inputs are drawn from `seed`.
GradCheckReport run_gradcheck_suite(std::uint64_t seed, double eps = 1e-5);

}  // namespace seenet
