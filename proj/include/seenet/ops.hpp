#pragma once

#include <cstddef>

#include "seenet/tensor.hpp"

namespace seenet {

// Cross-correlation of input [C_in,H,W] with weight [C_out,C_in,k,k].
// Output is [C_out, (H+2pad-k)/stride+1, (W+2pad-k)/stride+1].
template <typename T>
BasicTensor<T> conv2d(const BasicTensor<T>& input, const BasicTensor<T>& weight, const BasicTensor<T>& bias,
                      std::size_t stride = 1, std::size_t pad = 0);

template <typename T>
BasicTensor<T> relu(const BasicTensor<T>& x);

// Conditional ReLU: max(x, 0) * mask, mask broadcast over channels.
// mask = +1 passes, 0 erases, -1 flips the sign.
template <typename T>
BasicTensor<T> c_relu(const BasicTensor<T>& x, const MaskMap& mask);

// Exact gradient of c_relu with respect to x (the mask is constant).
template <typename T>
BasicTensor<T> c_relu_backward(const BasicTensor<T>& grad_out, const BasicTensor<T>& x, const MaskMap& mask);

// [C,H,W] -> [C]
template <typename T>
BasicTensor<T> global_avg_pool(const BasicTensor<T>& x);

// Mean over M of the per-class sigmoid cross-entropy, stable form
// max(z,0) - z*t + log(1 + exp(-|z|)).
template <typename T>
BasicTensor<T> bce_multilabel_loss(const BasicTensor<T>& logits, const BasicTensor<T>& target);

template <typename T>
BasicTensor<T> add(const BasicTensor<T>& a, const BasicTensor<T>& b);

template <typename T>
BasicTensor<T> scale(const BasicTensor<T>& a, T factor);

template <typename T>
BasicTensor<T> sum(const BasicTensor<T>& a);

// Elementwise product; used by tests to build scalar probes of feature maps.
template <typename T>
BasicTensor<T> mul(const BasicTensor<T>& a, const BasicTensor<T>& b);

}  // namespace seenet
