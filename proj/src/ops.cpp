#include "seenet/ops.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>

#include <Eigen/Core>

#include "seenet/decision_trace.hpp"

namespace seenet {
namespace {

template <typename T>
using RowMat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <typename T>
using ConstMapMat = Eigen::Map<const RowMat<T>>;

// Aligned copy; products then give the same bits wherever the source lived.
template <typename T>
RowMat<T> owned(std::span<const T> data, std::size_t rows, std::size_t cols) {
  return ConstMapMat<T>(data.data(), rows, cols);
}

struct ConvGeometry {
  std::size_t c_in, h, w, c_out, k, stride, pad, h_out, w_out;
  std::size_t patch() const { return c_in * k * k; }
  std::size_t positions() const { return h_out * w_out; }
};

template <typename T>
void im2col(std::span<const T> in, const ConvGeometry& g, std::span<T> cols) {
  const std::size_t positions = g.positions();
  for (std::size_t c = 0; c < g.c_in; ++c) {
    for (std::size_t ki = 0; ki < g.k; ++ki) {
      for (std::size_t kj = 0; kj < g.k; ++kj) {
        T* row = cols.data() + ((c * g.k + ki) * g.k + kj) * positions;
        for (std::size_t oy = 0; oy < g.h_out; ++oy) {
          const std::ptrdiff_t iy = static_cast<std::ptrdiff_t>(oy * g.stride + ki) - static_cast<std::ptrdiff_t>(g.pad);
          T* dst = row + oy * g.w_out;
          if (iy < 0 || iy >= static_cast<std::ptrdiff_t>(g.h)) {
            std::fill(dst, dst + g.w_out, T(0));
            continue;
          }
          const T* src = in.data() + (c * g.h + static_cast<std::size_t>(iy)) * g.w;
          for (std::size_t ox = 0; ox < g.w_out; ++ox) {
            const std::ptrdiff_t ix = static_cast<std::ptrdiff_t>(ox * g.stride + kj) - static_cast<std::ptrdiff_t>(g.pad);
            dst[ox] = (ix < 0 || ix >= static_cast<std::ptrdiff_t>(g.w)) ? T(0) : src[ix];
          }
        }
      }
    }
  }
}

template <typename T>
void col2im_accumulate(std::span<const T> cols, const ConvGeometry& g, std::span<T> out) {
  const std::size_t positions = g.positions();
  for (std::size_t c = 0; c < g.c_in; ++c) {
    for (std::size_t ki = 0; ki < g.k; ++ki) {
      for (std::size_t kj = 0; kj < g.k; ++kj) {
        const T* row = cols.data() + ((c * g.k + ki) * g.k + kj) * positions;
        for (std::size_t oy = 0; oy < g.h_out; ++oy) {
          const std::ptrdiff_t iy = static_cast<std::ptrdiff_t>(oy * g.stride + ki) - static_cast<std::ptrdiff_t>(g.pad);
          if (iy < 0 || iy >= static_cast<std::ptrdiff_t>(g.h)) continue;
          T* dst = out.data() + (c * g.h + static_cast<std::size_t>(iy)) * g.w;
          const T* src = row + oy * g.w_out;
          for (std::size_t ox = 0; ox < g.w_out; ++ox) {
            const std::ptrdiff_t ix = static_cast<std::ptrdiff_t>(ox * g.stride + kj) - static_cast<std::ptrdiff_t>(g.pad);
            if (ix >= 0 && ix < static_cast<std::ptrdiff_t>(g.w)) dst[ix] += src[ox];
          }
        }
      }
    }
  }
}

void check_rank(const Shape& shape, std::size_t rank, const char* op, const char* what) {
  if (shape.size() != rank) {
    throw ContractViolation(std::string(op) + ": " + what + " must have rank " + std::to_string(rank) + ", got " +
                            shape_str(shape));
  }
}

void check_mask(const Shape& x, const MaskMap& mask, const char* op) {
  check_rank(x, 3, op, "input");
  if (mask.height != x[1] || mask.width != x[2]) {
    throw ContractViolation(std::string(op) + ": mask " + std::to_string(mask.height) + "x" +
                            std::to_string(mask.width) + " does not match input spatial " + std::to_string(x[1]) + "x" +
                            std::to_string(x[2]));
  }
}

template <typename T>
T sigmoid(T z) {
  if (z >= 0) return T(1) / (T(1) + std::exp(-z));
  const T e = std::exp(z);
  return e / (T(1) + e);
}

}  // namespace

template <typename T>
BasicTensor<T> conv2d(const BasicTensor<T>& input, const BasicTensor<T>& weight, const BasicTensor<T>& bias,
                      std::size_t stride, std::size_t pad) {
  check_rank(input.shape(), 3, "conv2d", "input");
  check_rank(weight.shape(), 4, "conv2d", "weight");
  check_rank(bias.shape(), 1, "conv2d", "bias");
  ConvGeometry g{};
  g.c_in = input.dim(0);
  g.h = input.dim(1);
  g.w = input.dim(2);
  g.c_out = weight.dim(0);
  g.k = weight.dim(2);
  g.stride = stride;
  g.pad = pad;
  if (g.k < 1 || weight.dim(3) != g.k) {
    throw ContractViolation("conv2d: kernel must be square and non-empty, got weight " + shape_str(weight.shape()));
  }
  if (weight.dim(1) != g.c_in) {
    throw ContractViolation("conv2d: weight C_in=" + std::to_string(weight.dim(1)) + " but input C_in=" +
                            std::to_string(g.c_in));
  }
  if (bias.dim(0) != g.c_out) {
    throw ContractViolation("conv2d: bias length " + std::to_string(bias.dim(0)) + " but C_out=" +
                            std::to_string(g.c_out));
  }
  if (stride < 1) throw ContractViolation("conv2d: stride must be >= 1");
  if (g.h + 2 * pad < g.k || g.w + 2 * pad < g.k) {
    throw ContractViolation("conv2d: kernel " + std::to_string(g.k) + " larger than padded input " +
                            std::to_string(g.h + 2 * pad) + "x" + std::to_string(g.w + 2 * pad));
  }
  g.h_out = (g.h + 2 * pad - g.k) / stride + 1;
  g.w_out = (g.w + 2 * pad - g.k) / stride + 1;

  const std::size_t K = g.patch();
  const std::size_t P = g.positions();
  auto cols = std::make_shared<RowMat<T>>(K, P);
  im2col<T>(input.data(), g, std::span<T>(cols->data(), K * P));

  std::vector<T> out(g.c_out * P);
  {
    const RowMat<T> W = owned(weight.data(), g.c_out, K);
    RowMat<T> O(g.c_out, P);
    O.noalias() = W * *cols;
    for (std::size_t o = 0; o < g.c_out; ++o) O.row(o).array() += bias[o];
    std::copy(O.data(), O.data() + O.size(), out.begin());
  }

  return BasicTensor<T>::from_op(
      Shape{g.c_out, g.h_out, g.w_out}, std::move(out), {input, weight, bias},
      [input, weight, bias, cols, g](std::span<const T> grad_out) mutable {
        const std::size_t K = g.patch();
        const std::size_t P = g.positions();
        const RowMat<T> G = owned(grad_out, g.c_out, P);
        if (weight.requires_grad()) {
          RowMat<T> GW(g.c_out, K);
          GW.noalias() = G * cols->transpose();
          auto gw = weight.mutable_grad();
          for (std::size_t i = 0; i < gw.size(); ++i) gw[i] += GW.data()[i];
        }
        if (bias.requires_grad()) {
          auto gb = bias.mutable_grad();
          for (std::size_t o = 0; o < g.c_out; ++o) {
            T acc = T(0);
            for (std::size_t p = 0; p < P; ++p) acc += grad_out[o * P + p];
            gb[o] += acc;
          }
        }
        if (input.requires_grad()) {
          const RowMat<T> W = owned(weight.data(), g.c_out, K);
          RowMat<T> GC(K, P);
          GC.noalias() = W.transpose() * G;
          col2im_accumulate<T>(std::span<const T>(GC.data(), K * P), g, input.mutable_grad());
        }
      });
}

template <typename T>
BasicTensor<T> relu(const BasicTensor<T>& x) {
  std::vector<T> out(x.numel());
  const auto xs = x.data();
  const bool tracing = DecisionTrace::active() != nullptr;
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = xs[i] > T(0) ? xs[i] : T(0);
    if (tracing) record_decision(xs[i] > T(0));
  }
  return BasicTensor<T>::from_op(x.shape(), std::move(out), {x}, [x](std::span<const T> g) mutable {
    auto gx = x.mutable_grad();
    const auto xs = x.data();
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (xs[i] > T(0)) gx[i] += g[i];
    }
  });
}

template <typename T>
BasicTensor<T> c_relu(const BasicTensor<T>& x, const MaskMap& mask) {
  check_mask(x.shape(), mask, "c_relu");
  const std::size_t plane = mask.size();
  const std::size_t channels = x.dim(0);
  std::vector<T> out(x.numel());
  const auto xs = x.data();
  const bool tracing = DecisionTrace::active() != nullptr;
  for (std::size_t c = 0; c < channels; ++c) {
    for (std::size_t p = 0; p < plane; ++p) {
      const std::size_t i = c * plane + p;
      out[i] = std::max(xs[i], T(0)) * static_cast<T>(mask.values[p]);
      if (tracing) record_decision(xs[i] > T(0));
    }
  }
  auto shared_mask = std::make_shared<MaskMap>(mask);
  return BasicTensor<T>::from_op(x.shape(), std::move(out), {x},
                                 [x, shared_mask](std::span<const T> g) mutable {
                                   BasicTensor<T> grad_out(x.shape(), std::vector<T>(g.begin(), g.end()));
                                   x.accumulate_grad(c_relu_backward(grad_out, x, *shared_mask).data());
                                 });
}

template <typename T>
BasicTensor<T> c_relu_backward(const BasicTensor<T>& grad_out, const BasicTensor<T>& x, const MaskMap& mask) {
  check_mask(x.shape(), mask, "c_relu_backward");
  if (grad_out.shape() != x.shape()) {
    throw ContractViolation("c_relu_backward: grad_out " + shape_str(grad_out.shape()) + " vs input " +
                            shape_str(x.shape()));
  }
  const std::size_t plane = mask.size();
  const auto xs = x.data();
  const auto gs = grad_out.data();
  std::vector<T> out(x.numel());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = xs[i] > T(0) ? gs[i] * static_cast<T>(mask.values[i % plane]) : T(0);
  }
  return BasicTensor<T>(x.shape(), std::move(out));
}

template <typename T>
BasicTensor<T> global_avg_pool(const BasicTensor<T>& x) {
  check_rank(x.shape(), 3, "global_avg_pool", "input");
  const std::size_t channels = x.dim(0);
  const std::size_t plane = x.dim(1) * x.dim(2);
  if (plane == 0) throw ContractViolation("global_avg_pool: empty spatial extent " + shape_str(x.shape()));
  std::vector<T> out(channels);
  const auto xs = x.data();
  for (std::size_t c = 0; c < channels; ++c) {
    T acc = 0;
    for (std::size_t p = 0; p < plane; ++p) acc += xs[c * plane + p];
    out[c] = acc / static_cast<T>(plane);
  }
  return BasicTensor<T>::from_op(Shape{channels}, std::move(out), {x},
                                 [x, channels, plane](std::span<const T> g) mutable {
                                   auto gx = x.mutable_grad();
                                   for (std::size_t c = 0; c < channels; ++c) {
                                     const T share = g[c] / static_cast<T>(plane);
                                     for (std::size_t p = 0; p < plane; ++p) gx[c * plane + p] += share;
                                   }
                                 });
}

template <typename T>
BasicTensor<T> bce_multilabel_loss(const BasicTensor<T>& logits, const BasicTensor<T>& target) {
  const std::size_t m = logits.numel();
  if (m == 0) throw ContractViolation("bce_multilabel_loss: empty logits");
  if (target.numel() != m) {
    throw ContractViolation("bce_multilabel_loss: logits " + shape_str(logits.shape()) + " vs target " +
                            shape_str(target.shape()));
  }
  const auto z = logits.data();
  const auto t = target.data();
  T acc = 0;
  for (std::size_t i = 0; i < m; ++i) {
    if (t[i] != T(0) && t[i] != T(1)) {
      throw ContractViolation("bce_multilabel_loss: target[" + std::to_string(i) + "] = " + std::to_string(t[i]) +
                              " is not in {0,1}");
    }
    acc += std::max(z[i], T(0)) - z[i] * t[i] + std::log1p(std::exp(-std::abs(z[i])));
  }
  return BasicTensor<T>::from_op(Shape{}, std::vector<T>{acc / static_cast<T>(m)}, {logits, target},
                                 [logits, target, m](std::span<const T> g) mutable {
                                   if (!logits.requires_grad()) return;
                                   auto gz = logits.mutable_grad();
                                   const auto z = logits.data();
                                   const auto t = target.data();
                                   for (std::size_t i = 0; i < m; ++i) {
                                     gz[i] += g[0] * (sigmoid(z[i]) - t[i]) / static_cast<T>(m);
                                   }
                                 });
}

template <typename T>
BasicTensor<T> add(const BasicTensor<T>& a, const BasicTensor<T>& b) {
  if (a.shape() != b.shape()) {
    throw ContractViolation("add: shape " + shape_str(a.shape()) + " vs " + shape_str(b.shape()));
  }
  std::vector<T> out(a.numel());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] + b[i];
  return BasicTensor<T>::from_op(a.shape(), std::move(out), {a, b}, [a, b](std::span<const T> g) mutable {
    if (a.requires_grad()) a.accumulate_grad(g);
    if (b.requires_grad()) b.accumulate_grad(g);
  });
}

template <typename T>
BasicTensor<T> scale(const BasicTensor<T>& a, T factor) {
  std::vector<T> out(a.numel());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] * factor;
  return BasicTensor<T>::from_op(a.shape(), std::move(out), {a}, [a, factor](std::span<const T> g) mutable {
    auto ga = a.mutable_grad();
    for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * factor;
  });
}

template <typename T>
BasicTensor<T> sum(const BasicTensor<T>& a) {
  T acc = 0;
  for (T v : a.data()) acc += v;
  return BasicTensor<T>::from_op(Shape{}, std::vector<T>{acc}, {a}, [a](std::span<const T> g) mutable {
    auto ga = a.mutable_grad();
    for (auto& v : ga) v += g[0];
  });
}

template <typename T>
BasicTensor<T> mul(const BasicTensor<T>& a, const BasicTensor<T>& b) {
  if (a.shape() != b.shape()) {
    throw ContractViolation("mul: shape " + shape_str(a.shape()) + " vs " + shape_str(b.shape()));
  }
  std::vector<T> out(a.numel());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] * b[i];
  return BasicTensor<T>::from_op(a.shape(), std::move(out), {a, b}, [a, b](std::span<const T> g) mutable {
    if (a.requires_grad()) {
      auto ga = a.mutable_grad();
      for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * b[i];
    }
    if (b.requires_grad()) {
      auto gb = b.mutable_grad();
      for (std::size_t i = 0; i < g.size(); ++i) gb[i] += g[i] * a[i];
    }
  });
}

#define SEENET_INSTANTIATE_OPS(T)                                                                              \
  template BasicTensor<T> conv2d(const BasicTensor<T>&, const BasicTensor<T>&, const BasicTensor<T>&,         \
                                 std::size_t, std::size_t);                                                   \
  template BasicTensor<T> relu(const BasicTensor<T>&);                                                         \
  template BasicTensor<T> c_relu(const BasicTensor<T>&, const MaskMap&);                                       \
  template BasicTensor<T> c_relu_backward(const BasicTensor<T>&, const BasicTensor<T>&, const MaskMap&);       \
  template BasicTensor<T> global_avg_pool(const BasicTensor<T>&);                                              \
  template BasicTensor<T> bce_multilabel_loss(const BasicTensor<T>&, const BasicTensor<T>&);                   \
  template BasicTensor<T> add(const BasicTensor<T>&, const BasicTensor<T>&);                                   \
  template BasicTensor<T> scale(const BasicTensor<T>&, T);                                                     \
  template BasicTensor<T> sum(const BasicTensor<T>&);                                                          \
  template BasicTensor<T> mul(const BasicTensor<T>&, const BasicTensor<T>&);

SEENET_INSTANTIATE_OPS(float)
SEENET_INSTANTIATE_OPS(double)

#undef SEENET_INSTANTIATE_OPS

}  // namespace seenet
