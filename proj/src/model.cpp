#include "seenet/model.hpp"

#include <algorithm>
#include <cmath>

#include "seenet/decision_trace.hpp"
#include "seenet/ops.hpp"
#include "seenet/rng.hpp"

namespace seenet {

std::string to_string(Strategy s) {
  switch (s) {
    case Strategy::acol: return "acol";
    case Strategy::zeroing: return "zeroing";
    case Strategy::seenet: return "seenet";
  }
  return "seenet";
}

Strategy parse_strategy(const std::string& name) {
  if (name == "acol") return Strategy::acol;
  if (name == "zeroing") return Strategy::zeroing;
  if (name == "seenet") return Strategy::seenet;
  throw ConfigError("unknown strategy '" + name + "' (expected acol, zeroing or seenet)");
}

LabelSet make_label_set(std::vector<std::size_t> channels, std::size_t num_classes) {
  std::sort(channels.begin(), channels.end());
  channels.erase(std::unique(channels.begin(), channels.end()), channels.end());
  if (channels.empty()) throw ContractViolation("label set is empty");
  if (channels.back() >= num_classes) {
    throw ContractViolation("label " + std::to_string(channels.back()) + " out of range for " +
                            std::to_string(num_classes) + " classes");
  }
  return channels;
}

template <typename T>
BasicTensor<T> label_vector(const LabelSet& labels, std::size_t num_classes) {
  BasicTensor<T> v(Shape{num_classes}, T(0));
  auto d = v.mutable_data();
  for (std::size_t c : labels) {
    if (c >= num_classes) throw ContractViolation("label " + std::to_string(c) + " out of range");
    d[c] = T(1);
  }
  return v;
}

void ModelConfig::validate() const {
  if (num_classes < 1) throw ConfigError("num_classes must be >= 1");
  if (in_channels < 1) throw ConfigError("in_channels must be >= 1");
  if (!std::isfinite(input_shift)) throw ConfigError("input_shift must be finite");
  if (backbone_channels.empty()) throw ConfigError("backbone needs at least one conv layer");
  if (backbone_strides.size() != backbone_channels.size()) {
    throw ConfigError("backbone_strides must have one entry per backbone layer");
  }
  for (std::size_t c : backbone_channels) {
    if (c < 1) throw ConfigError("backbone channel counts must be >= 1");
  }
  for (std::size_t s : backbone_strides) {
    if (s < 1) throw ConfigError("backbone strides must be >= 1");
  }
  if (branch_channels < 1) throw ConfigError("branch_channels must be >= 1");
  if (branch_depth < 1) throw ConfigError("branch_depth must be >= 1");
  if (!(k_l >= 0.0 && k_l < k_h && k_h <= 1.0)) {
    throw ConfigError("mask thresholds must satisfy 0 <= delta_l < delta_h <= 1");
  }
}

std::size_t ModelConfig::feature_size(std::size_t input_size) const {
  std::size_t n = input_size;
  for (std::size_t s : backbone_strides) n = (n + 2 - 3) / s + 1;
  return n;
}

void to_json(nlohmann::json& j, const ModelConfig& c) {
  j = nlohmann::json{{"num_classes", c.num_classes},
                     {"in_channels", c.in_channels},
                     {"input_shift", c.input_shift},
                     {"backbone_channels", c.backbone_channels},
                     {"backbone_strides", c.backbone_strides},
                     {"branch_channels", c.branch_channels},
                     {"branch_depth", c.branch_depth},
                     {"delta_h", c.k_h},
                     {"delta_l", c.k_l},
                     {"strategy", to_string(c.strategy)}};
}

void from_json(const nlohmann::json& j, ModelConfig& c) {
  j.at("num_classes").get_to(c.num_classes);
  j.at("in_channels").get_to(c.in_channels);
  j.at("input_shift").get_to(c.input_shift);
  j.at("backbone_channels").get_to(c.backbone_channels);
  j.at("backbone_strides").get_to(c.backbone_strides);
  j.at("branch_channels").get_to(c.branch_channels);
  j.at("branch_depth").get_to(c.branch_depth);
  j.at("delta_h").get_to(c.k_h);
  j.at("delta_l").get_to(c.k_l);
  c.strategy = parse_strategy(j.at("strategy").get<std::string>());
}

namespace {

template <typename T>
ConvLayer<T> make_conv(Rng& rng, std::size_t c_out, std::size_t c_in, std::size_t k, std::size_t stride,
                       double gain) {
  ConvLayer<T> layer;
  const double std_dev = std::sqrt(gain / static_cast<double>(c_in * k * k));
  std::vector<T> w(c_out * c_in * k * k);
  for (auto& v : w) v = static_cast<T>(rng.normal() * std_dev);
  layer.weight = BasicTensor<T>(Shape{c_out, c_in, k, k}, std::move(w));
  layer.bias = BasicTensor<T>(Shape{c_out}, T(0));
  layer.weight.set_requires_grad(true);
  layer.bias.set_requires_grad(true);
  layer.stride = stride;
  layer.pad = k / 2;
  return layer;
}

template <typename T>
BasicTensor<T> apply(const ConvLayer<T>& layer, const BasicTensor<T>& x) {
  return conv2d(x, layer.weight, layer.bias, layer.stride, layer.pad);
}

template <typename U, typename T>
ConvLayer<U> cast_layer(const ConvLayer<T>& layer) {
  ConvLayer<U> out;
  out.weight = layer.weight.template cast<U>();
  out.bias = layer.bias.template cast<U>();
  out.weight.set_requires_grad(true);
  out.bias.set_requires_grad(true);
  out.stride = layer.stride;
  out.pad = layer.pad;
  return out;
}

}  // namespace

template <typename T>
BasicSeeNet<T>::BasicSeeNet(const ModelConfig& config, std::uint64_t seed) : config_(config) {
  config_.validate();
  Rng rng(seed);
  std::size_t in = config_.in_channels;
  for (std::size_t i = 0; i < config_.backbone_channels.size(); ++i) {
    backbone_.push_back(make_conv<T>(rng, config_.backbone_channels[i], in, 3, config_.backbone_strides[i], 2.0));
    in = config_.backbone_channels[i];
  }
  const std::size_t feature_channels = in;
  for (int b = 0; b < 3; ++b) {
    BranchParams<T> branch;
    std::size_t c = feature_channels;
    for (std::size_t d = 0; d < config_.branch_depth; ++d) {
      branch.convs.push_back(make_conv<T>(rng, config_.branch_channels, c, 3, 1, 2.0));
      c = config_.branch_channels;
    }
    branch.classifier = make_conv<T>(rng, config_.num_classes, c, 1, 1, 1.0);
    branches_.push_back(std::move(branch));
  }
}

template <typename T>
BasicTensor<T> BasicSeeNet<T>::backbone_forward(const BasicTensor<T>& image) const {
  if (image.rank() != 3 || image.dim(0) != config_.in_channels) {
    throw ContractViolation("model input must be [" + std::to_string(config_.in_channels) + ",H,W], got " +
                            shape_str(image.shape()));
  }
  BasicTensor<T> x = image;
  if (config_.input_shift != 0.0) x = add(x, BasicTensor<T>(image.shape(), static_cast<T>(-config_.input_shift)));
  for (std::size_t i = 0; i < backbone_.size(); ++i) {
    x = apply(backbone_[i], x);
    if (i + 1 < backbone_.size()) x = relu(x);
  }
  return x;
}

template <typename T>
typename BasicSeeNet<T>::BranchResult BasicSeeNet<T>::run_branch(const BranchParams<T>& branch,
                                                                  const BasicTensor<T>& input) const {
  BasicTensor<T> x = input;
  for (const auto& conv : branch.convs) x = relu(apply(conv, x));
  BranchResult r;
  r.class_maps = apply(branch.classifier, x);
  r.logits = global_avg_pool(r.class_maps);
  return r;
}

template <typename T>
BranchOutputs<T> BasicSeeNet<T>::forward(const BasicTensor<T>& image, const LabelSet& labels,
                                         const ForwardOptions& options) const {
  if (!(options.mask_source_scale > 0.0)) throw ContractViolation("mask_source_scale must be positive");
  const BasicTensor<T> features = backbone_forward(image);
  const std::size_t h = features.dim(1), w = features.dim(2);

  BranchOutputs<T> out;
  BranchResult a = run_branch(branches_[0], relu(features));
  out.logits_a = a.logits;
  out.class_maps_a = a.class_maps;
  out.attention_a = compute_attention(a.class_maps, labels);

  AttentionMap source = out.attention_a;
  if (options.mask_source_scale != 1.0) {
    for (float& v : source.values) v = static_cast<float>(v * options.mask_source_scale);
  }
  out.ternary = ternary_mask(source, config_.k_h, config_.k_l);
  if (options.warmup) {
    out.mask_b = MaskMap(h, w, static_cast<signed char>(1));
    out.mask_c = MaskMap(h, w, static_cast<signed char>(0));
  } else {
    out.mask_b = branch_b_mask(out.ternary, config_.strategy);
    out.mask_c = branch_c_mask(source, config_.k_h, config_.k_l, config_.strategy);
  }

  out.features_b = c_relu(features, out.mask_b);
  BranchResult b = run_branch(branches_[1], out.features_b);
  out.logits_b = b.logits;
  out.class_maps_b = b.class_maps;
  out.attention_b = compute_attention(b.class_maps, labels);

  out.features_c = c_relu(features, out.mask_c);
  out.logits_c = run_branch(branches_[2], out.features_c).logits;
  return out;
}

template <typename T>
std::vector<BasicTensor<T>> BasicSeeNet<T>::parameters() const {
  std::vector<BasicTensor<T>> p = backbone_parameters();
  for (const auto& branch : branches_) {
    for (const auto& conv : branch.convs) {
      p.push_back(conv.weight);
      p.push_back(conv.bias);
    }
    p.push_back(branch.classifier.weight);
    p.push_back(branch.classifier.bias);
  }
  return p;
}

template <typename T>
std::vector<BasicTensor<T>> BasicSeeNet<T>::backbone_parameters() const {
  std::vector<BasicTensor<T>> p;
  for (const auto& conv : backbone_) {
    p.push_back(conv.weight);
    p.push_back(conv.bias);
  }
  return p;
}

template <typename T>
std::vector<std::string> BasicSeeNet<T>::parameter_names() const {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < backbone_.size(); ++i) {
    names.push_back("backbone." + std::to_string(i) + ".weight");
    names.push_back("backbone." + std::to_string(i) + ".bias");
  }
  const char* tags[] = {"branch_a", "branch_b", "branch_c"};
  for (std::size_t b = 0; b < branches_.size(); ++b) {
    for (std::size_t i = 0; i < branches_[b].convs.size(); ++i) {
      names.push_back(std::string(tags[b]) + ".conv" + std::to_string(i) + ".weight");
      names.push_back(std::string(tags[b]) + ".conv" + std::to_string(i) + ".bias");
    }
    names.push_back(std::string(tags[b]) + ".classifier.weight");
    names.push_back(std::string(tags[b]) + ".classifier.bias");
  }
  return names;
}

template <typename T>
template <typename U>
BasicSeeNet<U> BasicSeeNet<T>::cast() const {
  BasicSeeNet<U> out;
  out.config_ = config_;
  for (const auto& layer : backbone_) out.backbone_.push_back(cast_layer<U>(layer));
  for (const auto& branch : branches_) {
    BranchParams<U> b;
    for (const auto& conv : branch.convs) b.convs.push_back(cast_layer<U>(conv));
    b.classifier = cast_layer<U>(branch.classifier);
    out.branches_.push_back(std::move(b));
  }
  return out;
}

template <typename T>
AttentionMap compute_attention(const BasicTensor<T>& class_maps, const LabelSet& labels) {
  if (class_maps.rank() != 3) {
    throw ContractViolation("compute_attention: class maps must be [M,H,W], got " + shape_str(class_maps.shape()));
  }
  if (labels.empty()) throw ContractViolation("compute_attention: empty label set");
  const std::size_t m = class_maps.dim(0), h = class_maps.dim(1), w = class_maps.dim(2);
  for (std::size_t c : labels) {
    if (c >= m) {
      throw ContractViolation("compute_attention: label " + std::to_string(c) + " >= M=" + std::to_string(m));
    }
  }
  AttentionMap out(h, w, 0.0f, false);
  const auto d = class_maps.data();
  const bool tracing = DecisionTrace::active() != nullptr;
  for (std::size_t p = 0; p < h * w; ++p) {
    T best = 0;
    std::size_t winner = m;  // m == "clamped at zero"
    for (std::size_t c : labels) {
      const T v = d[c * h * w + p];
      if (v > best) {
        best = v;
        winner = c;
      }
    }
    out.values[p] = static_cast<float>(best);
    if (tracing) record_decision(winner);
  }
  return out;
}

MaskMap branch_b_mask(const TernaryMask& ternary, Strategy strategy) {
  MaskMap mask = mask_for_sb(ternary);
  if (strategy == Strategy::seenet) return mask;
  const signed char replacement = strategy == Strategy::acol ? 1 : 0;
  for (auto& v : mask.values) {
    if (v == static_cast<signed char>(Zone::background)) v = replacement;
  }
  return mask;
}

MaskMap branch_c_mask(const AttentionMap& attention, double k_h, double k_l, Strategy strategy) {
  if (strategy == Strategy::acol) return MaskMap(attention.height, attention.width, static_cast<signed char>(0));
  return mask_for_sc(attention, k_h, k_l);
}

template <typename T>
BranchLosses<T> branch_losses(const BranchOutputs<T>& out, const LabelSet& labels) {
  const std::size_t m = out.logits_a.numel();
  const BasicTensor<T> target = label_vector<T>(labels, m);
  const BasicTensor<T> zeros(Shape{m}, T(0));
  BranchLosses<T> l;
  l.a = bce_multilabel_loss(out.logits_a, target);
  l.b = bce_multilabel_loss(out.logits_b, target);
  l.c = bce_multilabel_loss(out.logits_c, zeros);
  l.total = add(add(l.a, l.b), l.c);
  return l;
}

template <typename T>
BasicTensor<T> total_loss(const BranchOutputs<T>& out, const LabelSet& labels) {
  return branch_losses(out, labels).total;
}

template class BasicSeeNet<float>;
template class BasicSeeNet<double>;
template BasicSeeNet<double> BasicSeeNet<float>::cast<double>() const;
template BasicSeeNet<float> BasicSeeNet<double>::cast<float>() const;
template BasicSeeNet<float> BasicSeeNet<float>::cast<float>() const;
template BasicTensor<float> label_vector<float>(const LabelSet&, std::size_t);
template BasicTensor<double> label_vector<double>(const LabelSet&, std::size_t);
template AttentionMap compute_attention(const BasicTensor<float>&, const LabelSet&);
template AttentionMap compute_attention(const BasicTensor<double>&, const LabelSet&);
template BranchLosses<float> branch_losses(const BranchOutputs<float>&, const LabelSet&);
template BranchLosses<double> branch_losses(const BranchOutputs<double>&, const LabelSet&);
template BasicTensor<float> total_loss(const BranchOutputs<float>&, const LabelSet&);
template BasicTensor<double> total_loss(const BranchOutputs<double>&, const LabelSet&);

}  // namespace seenet
