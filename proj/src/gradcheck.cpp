#include "seenet/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "seenet/decision_trace.hpp"
#include "seenet/errors.hpp"
#include "seenet/rng.hpp"

namespace seenet {
namespace {

struct Probe {
  double value;
  std::uint64_t fingerprint;
};

Probe evaluate(const ScalarFn& f, const Tensor64& x) {
  NoGradGuard no_grad;
  DecisionTrace trace;
  const Tensor64 y = f(x);
  if (y.numel() != 1) throw ContractViolation("finite_diff_check: f must return a scalar, got " + shape_str(y.shape()));
  return {y.item(), trace.fingerprint()};
}

}  // namespace

GradCheckResult finite_diff_check(const ScalarFn& f, const Tensor64& x, double eps, const GradCheckOptions& options) {
  if (!(eps > 0.0)) throw ConfigError("finite_diff_check: eps must be positive");

  Tensor64 var = x.clone();
  var.set_requires_grad(true);
  var.drop_grad();
  Tensor64 y = f(var);
  if (y.numel() != 1) throw ContractViolation("finite_diff_check: f must return a scalar, got " + shape_str(y.shape()));
  if (!std::isfinite(y.item())) {
    throw NumericError("finite_diff_check: f(x) = " + std::to_string(y.item()) + " is not finite");
  }
  std::vector<double> analytic(x.numel(), 0.0);
  if (y.requires_grad()) {
    y.backward();
    if (var.has_grad()) std::copy(var.grad().begin(), var.grad().end(), analytic.begin());
  }

  std::vector<std::size_t> coords(x.numel());
  std::iota(coords.begin(), coords.end(), std::size_t{0});
  if (options.max_coords != 0 && options.max_coords < coords.size()) {
    Rng rng(options.sample_seed);
    rng.shuffle(coords);
    coords.resize(options.max_coords);
    std::sort(coords.begin(), coords.end());
  }

  const std::uint64_t base_print = evaluate(f, x).fingerprint;
  const double band = eps * options.kink_band_factor;
  const double floor = 1e-8 * std::max(1.0, std::abs(y.item()));
  GradCheckResult result;
  Tensor64 probe = x.clone();
  auto pd = probe.mutable_data();
  for (std::size_t i : coords) {
    const double original = pd[i];

    pd[i] = original + band;
    const bool kink_right = evaluate(f, probe).fingerprint != base_print;
    pd[i] = original - band;
    const bool kink_left = evaluate(f, probe).fingerprint != base_print;
    if (kink_right || kink_left) {
      pd[i] = original;
      ++result.skipped;
      continue;
    }

    pd[i] = original + eps;
    const double plus = evaluate(f, probe).value;
    pd[i] = original - eps;
    const double minus = evaluate(f, probe).value;
    pd[i] = original;

    const double numeric = (plus - minus) / (2.0 * eps);
    const double denom = std::max({std::abs(analytic[i]), std::abs(numeric), floor});
    result.max_rel_error = std::max(result.max_rel_error, std::abs(analytic[i] - numeric) / denom);
    ++result.checked;
  }
  return result;
}

}  // namespace seenet
