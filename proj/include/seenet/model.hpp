#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "seenet/masks.hpp"
#include "seenet/tensor.hpp"

namespace seenet {

// How branch B's mask is derived from the ternary mask, and whether branch C
// sees anything. acol: background kept (+1), no C branch signal; zeroing:
// background zeroed; seenet: background sign-flipped.
enum class Strategy { acol, zeroing, seenet };

std::string to_string(Strategy s);
Strategy parse_strategy(const std::string& name);

// Sorted, de-duplicated class channel indices in [0, M).
using LabelSet = std::vector<std::size_t>;

LabelSet make_label_set(std::vector<std::size_t> channels, std::size_t num_classes);

// Multi-hot target of length M.
template <typename T>
BasicTensor<T> label_vector(const LabelSet& labels, std::size_t num_classes);

struct ModelConfig {
  std::size_t num_classes = 20;
  std::size_t in_channels = 3;
  // Subtracted from every input value before the first conv (pixels live in [0,1]).
  double input_shift = 0.5;
  std::vector<std::size_t> backbone_channels{16, 32, 64, 64};
  std::vector<std::size_t> backbone_strides{1, 2, 2, 1};
  std::size_t branch_channels = 64;
  std::size_t branch_depth = 3;
  double k_h = kDefaultHighFactor;
  double k_l = kDefaultLowFactor;
  Strategy strategy = Strategy::seenet;

  void validate() const;
  // Spatial size of the backbone output for an input of the given size.
  std::size_t feature_size(std::size_t input_size) const;
};

void to_json(nlohmann::json& j, const ModelConfig& c);
void from_json(const nlohmann::json& j, ModelConfig& c);

template <typename T>
struct ConvLayer {
  BasicTensor<T> weight;  // [C_out, C_in, k, k]
  BasicTensor<T> bias;    // [C_out]
  std::size_t stride = 1;
  std::size_t pad = 0;
};

template <typename T>
struct BranchParams {
  std::vector<ConvLayer<T>> convs;  // 3x3, ReLU after each
  ConvLayer<T> classifier;          // 1x1 conv to M class maps
};

struct ForwardOptions {
  // Branch B mask forced to all +1 and branch C mask to all 0.
  bool warmup = false;
  // Multiplies M_A before the masks are thresholded; masks must not change.
  double mask_source_scale = 1.0;
};

template <typename T>
struct BranchOutputs {
  BasicTensor<T> logits_a, logits_b, logits_c;          // [M]
  BasicTensor<T> class_maps_a, class_maps_b;            // [M,h,w] pre-pooling maps
  BasicTensor<T> features_b, features_c;                // C-ReLU outputs entering B and C
  AttentionMap attention_a, attention_b;                // un-normalized, h x w
  TernaryMask ternary;                                  // T_A
  MaskMap mask_b, mask_c;                               // masks actually applied
};

template <typename T>
struct BranchLosses {
  BasicTensor<T> a, b, c, total;
};

// Shared backbone feeding three classification branches. Branch A sees the
// ReLU of the backbone output; branches B and C see C-ReLU outputs whose masks
// come from branch A's attention with the gradient stopped.
template <typename T>
class BasicSeeNet {
 public:
  BasicSeeNet(const ModelConfig& config, std::uint64_t seed);

  const ModelConfig& config() const { return config_; }
  ModelConfig& mutable_config() { return config_; }

  BranchOutputs<T> forward(const BasicTensor<T>& image, const LabelSet& labels,
                           const ForwardOptions& options = {}) const;

  // Backbone output before the branch activations, [C,h,w].
  BasicTensor<T> backbone_forward(const BasicTensor<T>& image) const;

  std::vector<BasicTensor<T>> parameters() const;
  std::vector<BasicTensor<T>> backbone_parameters() const;
  std::vector<std::string> parameter_names() const;

  std::vector<ConvLayer<T>>& backbone() { return backbone_; }
  BranchParams<T>& branch(std::size_t i) { return branches_.at(i); }
  const BranchParams<T>& branch(std::size_t i) const { return branches_.at(i); }

  template <typename U>
  BasicSeeNet<U> cast() const;

 private:
  template <typename U>
  friend class BasicSeeNet;

  BasicSeeNet() = default;

  struct BranchResult {
    BasicTensor<T> class_maps;
    BasicTensor<T> logits;
  };
  BranchResult run_branch(const BranchParams<T>& branch, const BasicTensor<T>& input) const;

  ModelConfig config_;
  std::vector<ConvLayer<T>> backbone_;
  std::vector<BranchParams<T>> branches_;  // A, B, C
};

using SeeNet = BasicSeeNet<float>;

// A(i,j) = max over labels of max(class_maps[c,i,j], 0). Gradient is not tracked.
template <typename T>
AttentionMap compute_attention(const BasicTensor<T>& class_maps, const LabelSet& labels);

// Branch B mask for a strategy, from the ternary mask.
MaskMap branch_b_mask(const TernaryMask& ternary, Strategy strategy);
// Branch C mask for a strategy, from branch A's attention.
MaskMap branch_c_mask(const AttentionMap& attention, double k_h, double k_l, Strategy strategy);

// bce(A, y) + bce(B, y) + bce(C, 0).
template <typename T>
BranchLosses<T> branch_losses(const BranchOutputs<T>& out, const LabelSet& labels);

template <typename T>
BasicTensor<T> total_loss(const BranchOutputs<T>& out, const LabelSet& labels);

}  // namespace seenet
