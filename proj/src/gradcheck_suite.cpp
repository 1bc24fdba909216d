#include "seenet/gradcheck_suite.hpp"

#include <algorithm>

#include "seenet/model.hpp"
#include "seenet/ops.hpp"
#include "seenet/rng.hpp"

namespace seenet {
namespace {

Tensor64 random_tensor(Rng& rng, const Shape& shape, double lo = -1.0, double hi = 1.0) {
  std::vector<double> v(shape_numel(shape));
  for (auto& x : v) x = rng.uniform(lo, hi);
  return Tensor64(shape, std::move(v));
}

// Random projection so that every output coordinate carries gradient.
Tensor64 project(const Tensor64& y, const Tensor64& r) { return sum(mul(y, r)); }

std::vector<Tensor64*> parameter_slots(BasicSeeNet<double>& model) {
  std::vector<Tensor64*> slots;
  for (auto& layer : model.backbone()) {
    slots.push_back(&layer.weight);
    slots.push_back(&layer.bias);
  }
  for (std::size_t b = 0; b < 3; ++b) {
    auto& branch = model.branch(b);
    for (auto& layer : branch.convs) {
      slots.push_back(&layer.weight);
      slots.push_back(&layer.bias);
    }
    slots.push_back(&branch.classifier.weight);
    slots.push_back(&branch.classifier.bias);
  }
  return slots;
}

}  // namespace

GradCheckReport run_gradcheck_suite(std::uint64_t seed, double eps) {
  Rng rng(derive_seed(seed, 0x9c));
  GradCheckReport report;
  GradCheckOptions opts;
  opts.sample_seed = derive_seed(seed, 1);
  auto record = [&](std::string name, const ScalarFn& f, const Tensor64& x, std::size_t max_coords = 0) {
    GradCheckOptions o = opts;
    o.max_coords = max_coords;
    o.sample_seed = derive_seed(opts.sample_seed, report.entries.size());
    const GradCheckResult r = finite_diff_check(f, x, eps, o);
    report.max_rel_error = std::max(report.max_rel_error, r.max_rel_error);
    report.checked += r.checked;
    report.skipped += r.skipped;
    report.entries.push_back({std::move(name), r});
  };

  {
    const std::size_t stride = 1 + rng.index(2);
    const std::size_t pad = rng.index(2);
    const Tensor64 x = random_tensor(rng, {2, 6, 5});
    const Tensor64 w = random_tensor(rng, {3, 2, 3, 3});
    const Tensor64 b = random_tensor(rng, {3});
    const Tensor64 probe_out = conv2d(x, w, b, stride, pad);
    const Tensor64 r = random_tensor(rng, probe_out.shape());
    record("conv2d.input", [&](const Tensor64& v) { return project(conv2d(v, w, b, stride, pad), r); }, x);
    record("conv2d.weight", [&](const Tensor64& v) { return project(conv2d(x, v, b, stride, pad), r); }, w);
    record("conv2d.bias", [&](const Tensor64& v) { return project(conv2d(x, w, v, stride, pad), r); }, b);
  }
  {
    const Tensor64 x = random_tensor(rng, {4, 3, 5});
    const Tensor64 r = random_tensor(rng, {4});
    record("global_avg_pool", [&](const Tensor64& v) { return project(global_avg_pool(v), r); }, x);
  }
  {
    const Tensor64 z = random_tensor(rng, {6}, -4.0, 4.0);
    std::vector<double> t(6);
    for (auto& v : t) v = rng.uniform() < 0.5 ? 0.0 : 1.0;
    const Tensor64 target(Shape{6}, t);
    record("bce_multilabel_loss", [&](const Tensor64& v) { return bce_multilabel_loss(v, target); }, z);
  }
  {
    const std::size_t h = 4, w = 5;
    const Tensor64 x = random_tensor(rng, {3, h, w});
    std::vector<signed char> codes(h * w);
    for (std::size_t i = 0; i < codes.size(); ++i) {
      codes[i] = i < 3 ? static_cast<signed char>(static_cast<int>(i) - 1)
                       : static_cast<signed char>(static_cast<int>(rng.index(3)) - 1);
    }
    const MaskMap mask(h, w, codes);
    const Tensor64 r = random_tensor(rng, {3, h, w});
    record("c_relu", [&](const Tensor64& v) { return project(c_relu(v, mask), r); }, x);
  }
  {
    ModelConfig config;
    config.num_classes = 3;
    config.backbone_channels = {4, 5};
    config.backbone_strides = {1, 2};
    config.branch_channels = 4;
    config.branch_depth = 1;
    config.strategy = static_cast<Strategy>(seed % 3);
    const BasicSeeNet<double> base = SeeNet(config, derive_seed(seed, 2)).cast<double>();
    const Tensor64 image = random_tensor(rng, {3, 8, 8}, 0.0, 1.0);
    const LabelSet labels = make_label_set({rng.index(3)}, 3);
    ForwardOptions options;
    options.warmup = (seed / 3) % 4 == 0;
    const std::string tag = "three_branch_loss[" + to_string(config.strategy) + (options.warmup ? ",warmup]" : "]");

    record(tag + ".image",
           [&](const Tensor64& v) { return total_loss(base.forward(v, labels, options), labels); }, image, 48);
    BasicSeeNet<double> probe_model = base;
    const auto names = base.parameter_names();
    const std::size_t n_slots = parameter_slots(probe_model).size();
    for (std::size_t k = 0; k < n_slots; ++k) {
      const Tensor64 original = *parameter_slots(probe_model)[k];
      record(tag + "." + names[k],
             [&, k](const Tensor64& v) {
               BasicSeeNet<double> m = base;
               *parameter_slots(m)[k] = v;
               return total_loss(m.forward(image, labels, options), labels);
             },
             original, 24);
    }
  }
  return report;
}

}  // namespace seenet
