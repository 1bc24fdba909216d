#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>

#include "seenet/tensor.hpp"

namespace seenet {

struct GradCheckOptions {
  // Compare at most this many coordinates (sampled without replacement); 0 = all.
  std::size_t max_coords = 0;
  std::uint64_t sample_seed = 0;
  // Coordinates whose +/- kink_band_factor*eps neighbourhood changes any
  // discrete decision are skipped.
  double kink_band_factor = 100.0;
};

struct GradCheckResult {
  double max_rel_error = 0.0;
  std::size_t checked = 0;
  std::size_t skipped = 0;
};

using ScalarFn = std::function<Tensor64(const Tensor64&)>;

// Compares the reverse-mode gradient of f at x against central differences
// with step eps. Relative error per coordinate is
// |analytic - numeric| / max(|analytic|, |numeric|, 1e-8 * max(1, |f(x)|)).
// Throws NumericError if f(x) is not finite.
GradCheckResult finite_diff_check(const ScalarFn& f, const Tensor64& x, double eps = 1e-5,
                                  const GradCheckOptions& options = {});

}  // namespace seenet
