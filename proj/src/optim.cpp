#include "seenet/optim.hpp"

#include <string>

namespace seenet {
namespace {

void require_grads(std::span<const Tensor> params) {
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (!params[i].has_grad()) {
      throw ContractViolation("sgd: parameter #" + std::to_string(i) + " " + shape_str(params[i].shape()) +
                              " has no gradient");
    }
  }
}

}  // namespace

void sgd_step(std::span<Tensor> params, float lr, float weight_decay) {
  require_grads(params);
  for (auto& p : params) {
    auto data = p.mutable_data();
    auto grad = p.mutable_grad();
    for (std::size_t i = 0; i < data.size(); ++i) data[i] -= lr * (grad[i] + weight_decay * data[i]);
    p.zero_grad();
  }
}

Sgd::Sgd(std::vector<Tensor> params, float momentum, float weight_decay)
    : params_(std::move(params)), momentum_(momentum), weight_decay_(weight_decay) {
  if (momentum < 0.0f || momentum >= 1.0f) throw ConfigError("momentum must lie in [0, 1)");
  if (weight_decay < 0.0f) throw ConfigError("weight decay must be non-negative");
  velocity_.reserve(params_.size());
  for (const auto& p : params_) velocity_.emplace_back(p.numel(), 0.0f);
}

void Sgd::step(float lr) {
  if (momentum_ == 0.0f) {
    sgd_step(params_, lr, weight_decay_);
    return;
  }
  require_grads(params_);
  for (std::size_t k = 0; k < params_.size(); ++k) {
    auto data = params_[k].mutable_data();
    auto grad = params_[k].mutable_grad();
    auto& v = velocity_[k];
    for (std::size_t i = 0; i < data.size(); ++i) {
      v[i] = momentum_ * v[i] + grad[i] + weight_decay_ * data[i];
      data[i] -= lr * v[i];
    }
    params_[k].zero_grad();
  }
}

void Sgd::zero_grad() {
  for (auto& p : params_) p.zero_grad();
}

}  // namespace seenet
