#pragma once

#include "hetenc/nn/tensor.hpp"

namespace hetenc::nn {

template <typename T>
struct LossResult {
  double loss = 0.0;
  Tensor<T> d_logits;  // same shape as probs
};

// Mean categorical cross entropy over batch and time for softmax outputs with
// one-hot targets. Probabilities are clamped at 1e-12 before the log. The
// returned gradient is w.r.t. the pre-softmax logits:
// (probs - targets) / (batch * time).
template <typename T>
LossResult<T> softmax_cross_entropy(const Tensor<T>& probs, const Tensor<T>& targets) {
  if (probs.shape() != targets.shape()) {
    throw std::invalid_argument("softmax_cross_entropy: shape mismatch");
  }
  const std::size_t positions = probs.rank() == 3 ? probs.dim(0) * probs.dim(1) : probs.dim(0);
  const std::size_t k = probs.dim(probs.rank() - 1);
  LossResult<T> out;
  out.d_logits = Tensor<T>(probs.shape());
  const T scale = T(1) / static_cast<T>(positions);
  double loss = 0.0;
  for (std::size_t p = 0; p < positions; ++p) {
    const T* pr = probs.data() + p * k;
    const T* tg = targets.data() + p * k;
    T* dl = out.d_logits.data() + p * k;
    for (std::size_t j = 0; j < k; ++j) {
      dl[j] = (pr[j] - tg[j]) * scale;
      if (tg[j] > T(0)) {
        const double clamped = std::max(static_cast<double>(pr[j]), 1e-12);
        loss -= static_cast<double>(tg[j]) * std::log(clamped);
      }
    }
  }
  out.loss = loss / static_cast<double>(positions);
  return out;
}

// Unnormalized variant for chunked batches: returns the plain sum of
// -log p(target) and scales the logit gradient by `grad_scale` (the caller
// divides by the full batch's position count).
template <typename T>
LossResult<T> softmax_cross_entropy_sum(const Tensor<T>& probs, const Tensor<T>& targets,
                                        T grad_scale) {
  if (probs.shape() != targets.shape()) {
    throw std::invalid_argument("softmax_cross_entropy_sum: shape mismatch");
  }
  const std::size_t positions = probs.rank() == 3 ? probs.dim(0) * probs.dim(1) : probs.dim(0);
  const std::size_t k = probs.dim(probs.rank() - 1);
  LossResult<T> out;
  out.d_logits = Tensor<T>(probs.shape());
  double loss = 0.0;
  for (std::size_t p = 0; p < positions; ++p) {
    const T* pr = probs.data() + p * k;
    const T* tg = targets.data() + p * k;
    T* dl = out.d_logits.data() + p * k;
    for (std::size_t j = 0; j < k; ++j) {
      dl[j] = (pr[j] - tg[j]) * grad_scale;
      if (tg[j] > T(0)) {
        loss -= static_cast<double>(tg[j]) *
                std::log(std::max(static_cast<double>(pr[j]), 1e-12));
      }
    }
  }
  out.loss = loss;
  return out;
}

// Loss only (validation path).
template <typename T>
double cross_entropy_loss(const Tensor<T>& probs, const Tensor<T>& targets) {
  const std::size_t positions = probs.rank() == 3 ? probs.dim(0) * probs.dim(1) : probs.dim(0);
  const std::size_t k = probs.dim(probs.rank() - 1);
  double loss = 0.0;
  for (std::size_t p = 0; p < positions; ++p) {
    const T* pr = probs.data() + p * k;
    const T* tg = targets.data() + p * k;
    for (std::size_t j = 0; j < k; ++j) {
      if (tg[j] > T(0)) loss -= static_cast<double>(tg[j]) * std::log(std::max(static_cast<double>(pr[j]), 1e-12));
    }
  }
  return loss / static_cast<double>(positions);
}

}  // namespace hetenc::nn
