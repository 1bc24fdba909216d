#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "seenet/errors.hpp"

namespace seenet {

using Shape = std::vector<std::size_t>;

inline std::size_t shape_numel(const Shape& shape) {
  std::size_t n = 1;
  for (std::size_t d : shape) n *= d;
  return n;
}

inline std::string shape_str(const Shape& shape) {
  std::string s = "[";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(shape[i]);
  }
  return s + "]";
}

template <typename T>
class BasicTensor;

namespace detail {

template <typename T>
struct GradNode {
  // Kept alive so the graph can be walked; the closure owns whatever it needs.
  std::vector<BasicTensor<T>> inputs;
  std::function<void(std::span<const T> grad_out)> backward;
};

template <typename T>
struct TensorImpl {
  Shape shape;
  std::vector<T> data;
  std::vector<T> grad;  // empty == no gradient buffer
  bool requires_grad = false;
  std::shared_ptr<GradNode<T>> node;
};

inline bool& grad_mode_flag() {
  thread_local bool enabled = true;
  return enabled;
}

}  // namespace detail

inline bool grad_enabled() { return detail::grad_mode_flag(); }

// Disables graph recording on the current thread for the guard's lifetime.
class NoGradGuard {
 public:
  NoGradGuard() : previous_(detail::grad_mode_flag()) { detail::grad_mode_flag() = false; }
  ~NoGradGuard() { detail::grad_mode_flag() = previous_; }
  NoGradGuard(const NoGradGuard&) = delete;
  NoGradGuard& operator=(const NoGradGuard&) = delete;

 private:
  bool previous_;
};

// Dense row-major tensor with an optional gradient buffer and a reverse-mode
// tape. Copies are shallow handles; use clone() for a deep copy.
template <typename T>
class BasicTensor {
 public:
  using value_type = T;
  using Backward = std::function<void(std::span<const T>)>;

  BasicTensor() : impl_(std::make_shared<detail::TensorImpl<T>>()) {}

  explicit BasicTensor(Shape shape, T fill = T(0)) : BasicTensor() {
    impl_->data.assign(shape_numel(shape), fill);
    impl_->shape = std::move(shape);
  }

  BasicTensor(Shape shape, std::vector<T> data) : BasicTensor() {
    if (data.size() != shape_numel(shape)) {
      throw ContractViolation("tensor data length " + std::to_string(data.size()) +
                              " does not match shape " + shape_str(shape));
    }
    impl_->shape = std::move(shape);
    impl_->data = std::move(data);
  }

  static BasicTensor scalar(T v) { return BasicTensor(Shape{}, std::vector<T>{v}); }

  const Shape& shape() const { return impl_->shape; }
  std::size_t rank() const { return impl_->shape.size(); }
  std::size_t dim(std::size_t i) const { return impl_->shape.at(i); }
  std::size_t numel() const { return impl_->data.size(); }

  std::span<const T> data() const { return impl_->data; }
  std::span<T> mutable_data() { return impl_->data; }
  T operator[](std::size_t i) const { return impl_->data[i]; }

  T item() const {
    if (numel() != 1) throw ContractViolation("item() on tensor of shape " + shape_str(shape()));
    return impl_->data[0];
  }

  bool requires_grad() const { return impl_->requires_grad; }
  BasicTensor& set_requires_grad(bool on) {
    impl_->requires_grad = on;
    return *this;
  }

  bool has_grad() const { return !impl_->grad.empty(); }
  std::span<const T> grad() const { return impl_->grad; }
  // Gradient buffers live in the shared storage, so handles to a tensor
  // (including const ones captured by backward closures) can accumulate.
  std::span<T> mutable_grad() const {
    ensure_grad();
    return impl_->grad;
  }
  void ensure_grad() const {
    if (impl_->grad.empty()) impl_->grad.assign(impl_->data.size(), T(0));
  }
  void zero_grad() const {
    if (!impl_->grad.empty()) std::fill(impl_->grad.begin(), impl_->grad.end(), T(0));
  }
  void drop_grad() { impl_->grad.clear(); }

  void accumulate_grad(std::span<const T> g) const {
    ensure_grad();
    for (std::size_t i = 0; i < g.size(); ++i) impl_->grad[i] += g[i];
  }

  bool is_leaf() const { return impl_->node == nullptr; }
  bool same_storage(const BasicTensor& other) const { return impl_ == other.impl_; }

  BasicTensor clone() const {
    BasicTensor out(shape(), std::vector<T>(impl_->data));
    out.impl_->requires_grad = impl_->requires_grad;
    return out;
  }

  // Copy of the values with no graph history and no gradient.
  BasicTensor detach() const { return BasicTensor(shape(), std::vector<T>(impl_->data)); }

  template <typename U>
  BasicTensor<U> cast() const {
    std::vector<U> out(impl_->data.begin(), impl_->data.end());
    return BasicTensor<U>(shape(), std::move(out));
  }

  // Builds an op result. A graph node is attached only when recording is on
  // and at least one input participates in differentiation.
  static BasicTensor from_op(Shape shape, std::vector<T> data, std::vector<BasicTensor> inputs,
                             Backward backward) {
    BasicTensor out(std::move(shape), std::move(data));
    if (!grad_enabled()) return out;
    bool needs = false;
    for (const auto& in : inputs) needs = needs || in.requires_grad();
    if (!needs) return out;
    out.impl_->requires_grad = true;
    auto node = std::make_shared<detail::GradNode<T>>();
    node->inputs = std::move(inputs);
    node->backward = std::move(backward);
    out.impl_->node = std::move(node);
    return out;
  }

  // Reverse-mode sweep from a scalar. Gradients accumulate into every tensor
  // that requires them; the recorded graph is released afterwards.
  void backward() {
    if (numel() != 1) throw ContractViolation("backward() requires a scalar, got " + shape_str(shape()));
    if (!impl_->requires_grad) throw ContractViolation("backward() on a tensor that does not require grad");

    // Shared ownership keeps intermediates alive while nodes are released.
    std::vector<std::shared_ptr<detail::TensorImpl<T>>> order;
    std::unordered_set<detail::TensorImpl<T>*> seen;
    std::vector<std::pair<std::shared_ptr<detail::TensorImpl<T>>, std::size_t>> stack{{impl_, 0}};
    seen.insert(impl_.get());
    while (!stack.empty()) {
      auto& [cur, child] = stack.back();
      if (cur->node && child < cur->node->inputs.size()) {
        auto next = cur->node->inputs[child++].impl_;
        if (next->requires_grad && seen.insert(next.get()).second) stack.emplace_back(std::move(next), 0);
        continue;
      }
      order.push_back(std::move(cur));
      stack.pop_back();
    }

    ensure_grad();
    impl_->grad[0] += T(1);
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      const auto& t = *it;
      if (!t->node) continue;
      if (!t->grad.empty()) t->node->backward(t->grad);
      t->node.reset();
    }
  }

 private:
  template <typename U>
  friend class BasicTensor;

  std::shared_ptr<detail::TensorImpl<T>> impl_;
};

using Tensor = BasicTensor<float>;
using Tensor64 = BasicTensor<double>;

template <typename T>
bool all_finite(const BasicTensor<T>& t) {
  for (T v : t.data()) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

// Constant spatial mask over {-1, 0, +1}; never differentiated.
struct MaskMap {
  std::size_t height = 0;
  std::size_t width = 0;
  std::vector<signed char> values;

  MaskMap() = default;
  MaskMap(std::size_t h, std::size_t w, signed char fill) : height(h), width(w), values(h * w, fill) {
    if (fill < -1 || fill > 1) throw ContractViolation("mask value outside {-1,0,+1}");
  }
  MaskMap(std::size_t h, std::size_t w, std::vector<signed char> v) : height(h), width(w), values(std::move(v)) {
    if (values.size() != h * w) throw ContractViolation("mask data length does not match " + std::to_string(h) + "x" + std::to_string(w));
    for (signed char m : values) {
      if (m < -1 || m > 1) throw ContractViolation("mask value outside {-1,0,+1}");
    }
  }

  std::size_t size() const { return values.size(); }
  bool operator==(const MaskMap&) const = default;
};

}  // namespace seenet
