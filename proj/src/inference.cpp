#include "seenet/inference.hpp"

#include "seenet/image.hpp"

namespace seenet {

AttentionMap fused_attention_map(const SeeNet& model, const Tensor& image, const LabelSet& labels) {
  NoGradGuard no_grad;
  const auto out = model.forward(image, labels);
  return fuse_attention(normalize_map(out.attention_a), normalize_map(out.attention_b));
}

AttentionMap infer_attention(const SeeNet& model, const Tensor& image, const LabelSet& labels,
                             std::size_t input_side) {
  if (image.rank() != 3 || image.dim(1) == 0 || image.dim(2) == 0) {
    throw ContractViolation("infer_attention: zero-area image " + shape_str(image.shape()));
  }
  if (input_side == 0) throw ContractViolation("infer_attention: input side must be positive");
  const std::size_t h = image.dim(1), w = image.dim(2);
  const Tensor resized = resize_bilinear(image, input_side, input_side);
  const AttentionMap fused = fused_attention_map(model, resized, labels);
  const AttentionMap mirrored = flip_horizontal(fused_attention_map(model, flip_horizontal(resized), labels));
  const AttentionMap final_map = flip_fuse(fused, mirrored);
  return normalize_map(resize_bilinear(final_map, h, w));
}

}  // namespace seenet
