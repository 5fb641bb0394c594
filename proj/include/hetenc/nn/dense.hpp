#pragma once

#include "hetenc/nn/tensor.hpp"

namespace hetenc::nn {

enum class Activation { identity, relu, softmax };

template <typename T>
struct Dense {
  Tensor<T> W;  // [in, out]
  Tensor<T> b;  // [out]
  Activation act = Activation::identity;

  std::size_t in_dim() const { return W.dim(0); }
  std::size_t out_dim() const { return W.dim(1); }
};

template <typename T>
Dense<T> make_dense(std::size_t in, std::size_t out, Activation act) {
  Dense<T> d;
  d.W = Tensor<T>({in, out});
  d.b = Tensor<T>({out});
  d.act = act;
  return d;
}

namespace detail {

template <typename T, typename Mat>
void apply_activation(Activation act, Mat y) {
  switch (act) {
    case Activation::identity:
      return;
    case Activation::relu:
      y = y.cwiseMax(T(0));
      return;
    case Activation::softmax:
      for (Eigen::Index r = 0; r < y.rows(); ++r) {
        const T mx = y.row(r).maxCoeff();
        y.row(r) = (y.row(r).array() - mx).exp();
        y.row(r) /= y.row(r).sum();
      }
      return;
  }
}

}  // namespace detail

// Y = act(X W + b). Higher-rank inputs are treated as [size/in, in]; the
// result is rank-2 [rows, out] (reshape afterwards if needed).
template <typename T>
Tensor<T> dense_forward(const Dense<T>& layer, const Tensor<T>& x) {
  if (x.size() % layer.in_dim() != 0) {
    throw std::invalid_argument("dense_forward: shape mismatch");
  }
  const std::size_t rows = x.size() / layer.in_dim();
  Tensor<T> y({rows, layer.out_dim()});
  y.mat().noalias() = x.view(rows, layer.in_dim()) * layer.W.mat();
  y.mat().rowwise() += layer.b.view(1, layer.out_dim()).row(0);
  detail::apply_activation<T>(layer.act, y.mat());
  y.check_finite("dense_forward");
  return y;
}

// Backward through relu/identity. `y` is the forward output (the relu mask is
// recovered from it). Accumulates into gw/gb and returns dX as [rows, in].
template <typename T>
Tensor<T> dense_backward(const Dense<T>& layer, const Tensor<T>& x, const Tensor<T>& y,
                         const Tensor<T>& dy, Tensor<T>& gw, Tensor<T>& gb) {
  const std::size_t rows = x.size() / layer.in_dim();
  MatrixRM<T> dpre = dy.view(rows, layer.out_dim());
  if (layer.act == Activation::relu) {
    dpre = (y.view(rows, layer.out_dim()).array() > T(0)).template cast<T>() * dpre.array();
  }
  gw.mat().noalias() += x.view(rows, layer.in_dim()).transpose() * dpre;
  gb.view(1, layer.out_dim()) += dpre.colwise().sum();
  Tensor<T> dx({rows, layer.in_dim()});
  dx.mat().noalias() = dpre * layer.W.mat().transpose();
  return dx;
}

// Backward when the incoming gradient is already w.r.t. the pre-activation
// (fused softmax + cross-entropy path).
template <typename T>
Tensor<T> dense_backward_pre(const Dense<T>& layer, const Tensor<T>& x,
                             const Tensor<T>& dpre, Tensor<T>& gw, Tensor<T>& gb) {
  const std::size_t rows = x.size() / layer.in_dim();
  gw.mat().noalias() +=
      x.view(rows, layer.in_dim()).transpose() * dpre.view(rows, layer.out_dim());
  gb.view(1, layer.out_dim()) += dpre.view(rows, layer.out_dim()).colwise().sum();
  Tensor<T> dx({rows, layer.in_dim()});
  dx.mat().noalias() = dpre.view(rows, layer.out_dim()) * layer.W.mat().transpose();
  return dx;
}

}  // namespace hetenc::nn
