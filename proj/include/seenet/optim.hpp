#pragma once

#include <span>
#include <vector>

#include "seenet/tensor.hpp"

namespace seenet {

// p <- p - lr * (grad + weight_decay * p), then zero the gradients.
void sgd_step(std::span<Tensor> params, float lr, float weight_decay);

// SGD with classical momentum:
//   v <- momentum * v + grad + weight_decay * p
//   p <- p - lr * v
// With momentum == 0 each step is identical to sgd_step.
class Sgd {
 public:
  Sgd(std::vector<Tensor> params, float momentum, float weight_decay);

  void step(float lr);
  void zero_grad();

  float momentum() const { return momentum_; }
  float weight_decay() const { return weight_decay_; }

 private:
  std::vector<Tensor> params_;
  std::vector<std::vector<float>> velocity_;
  float momentum_;
  float weight_decay_;
};

}  // namespace seenet
