#pragma once

#include <cstddef>

#include "seenet/masks.hpp"
#include "seenet/model.hpp"

namespace seenet {

inline constexpr std::size_t kDefaultInputSide = 224;

// max(normalize(M_A), normalize(M_B)) for one orientation, at feature resolution.
AttentionMap fused_attention_map(const SeeNet& model, const Tensor& image, const LabelSet& labels);

// Resize to input_side x input_side, fuse branch A and B attention for the
// image and its mirror (mirrored result flipped back), take the pointwise max,
// and resample to the original resolution. Output is normalized to [0,1].
AttentionMap infer_attention(const SeeNet& model, const Tensor& image, const LabelSet& labels,
                             std::size_t input_side = kDefaultInputSide);

}  // namespace seenet
