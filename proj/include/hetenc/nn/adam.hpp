#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "hetenc/nn/tensor.hpp"

namespace hetenc::nn {

// Bias-corrected Adam over a flat parameter group list. Moment buffers are
// allocated lazily to match the parameter shapes.
template <typename T>
struct AdamState {
  std::vector<Tensor<T>> m, v;
  std::int64_t t = 0;
  T beta1 = T(0.9);
  T beta2 = T(0.999);
  T eps = T(1e-8);
};

template <typename T>
void adam_step(AdamState<T>& state, T lr, const std::vector<Tensor<T>*>& params,
               const std::vector<const Tensor<T>*>& grads) {
  if (params.size() != grads.size()) throw std::invalid_argument("adam_step: group mismatch");
  if (state.m.empty()) {
    for (const Tensor<T>* g : grads) {
      state.m.emplace_back(g->shape());
      state.v.emplace_back(g->shape());
    }
  }
  ++state.t;
  const T bc1 = T(1) - std::pow(state.beta1, static_cast<T>(state.t));
  const T bc2 = T(1) - std::pow(state.beta2, static_cast<T>(state.t));
  for (std::size_t k = 0; k < params.size(); ++k) {
    Tensor<T>& p = *params[k];
    const Tensor<T>& g = *grads[k];
    Tensor<T>& m = state.m[k];
    Tensor<T>& v = state.v[k];
    for (std::size_t i = 0; i < p.size(); ++i) {
      m[i] = state.beta1 * m[i] + (T(1) - state.beta1) * g[i];
      v[i] = state.beta2 * v[i] + (T(1) - state.beta2) * g[i] * g[i];
      const T mhat = m[i] / bc1;
      const T vhat = v[i] / bc2;
      p[i] -= lr * mhat / (std::sqrt(vhat) + state.eps);
    }
  }
}

// Plain SGD over the same group layout (used by the QSAR regressor).
template <typename T>
void sgd_step(T lr, const std::vector<Tensor<T>*>& params,
              const std::vector<const Tensor<T>*>& grads) {
  for (std::size_t k = 0; k < params.size(); ++k) {
    Tensor<T>& p = *params[k];
    const Tensor<T>& g = *grads[k];
    for (std::size_t i = 0; i < p.size(); ++i) p[i] -= lr * g[i];
  }
}

template <typename T>
double global_grad_norm(const std::vector<const Tensor<T>*>& grads) {
  double sq = 0.0;
  for (const Tensor<T>* g : grads) {
    for (std::size_t i = 0; i < g->size(); ++i) {
      sq += static_cast<double>((*g)[i]) * static_cast<double>((*g)[i]);
    }
  }
  return std::sqrt(sq);
}

// Scales all gradients so the global norm is at most max_norm.
template <typename T>
void clip_global_norm(std::vector<Tensor<T>*>& grads, double max_norm) {
  std::vector<const Tensor<T>*> view(grads.begin(), grads.end());
  const double norm = global_grad_norm(view);
  if (norm <= max_norm || norm == 0.0) return;
  const T scale = static_cast<T>(max_norm / norm);
  for (Tensor<T>* g : grads) {
    for (std::size_t i = 0; i < g->size(); ++i) (*g)[i] *= scale;
  }
}

}  // namespace hetenc::nn
