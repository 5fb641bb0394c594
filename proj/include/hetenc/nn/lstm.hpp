#pragma once

#include <type_traits>

#include "hetenc/nn/tensor.hpp"

namespace hetenc::nn {

// Single LSTM layer. Gate blocks are packed in the order
// input | forget | candidate | output along the last axis.
template <typename T>
struct Lstm {
  Tensor<T> W;  // [in, 4*cells]
  Tensor<T> U;  // [cells, 4*cells]
  Tensor<T> b;  // [4*cells]
  std::size_t input_dim = 0;
  std::size_t cells = 0;
};

template <typename T>
Lstm<T> make_lstm(std::size_t input_dim, std::size_t cells) {
  Lstm<T> l;
  l.W = Tensor<T>({input_dim, 4 * cells});
  l.U = Tensor<T>({cells, 4 * cells});
  l.b = Tensor<T>({4 * cells});
  l.input_dim = input_dim;
  l.cells = cells;
  return l;
}

template <typename T>
struct LstmState {
  Tensor<T> h;  // [batch, cells]
  Tensor<T> c;  // [batch, cells]
};

template <typename T>
LstmState<T> zero_state(std::size_t batch, std::size_t cells) {
  return {Tensor<T>({batch, cells}), Tensor<T>({batch, cells})};
}

// Everything the backward pass needs from one forward call.
template <typename T>
struct LstmCache {
  Tensor<T> gates;    // [B, T, 4C] post-activation (i, f, g, o)
  Tensor<T> cell;     // [B, T, C] cell state after each step
  Tensor<T> outputs;  // [B, T, C] hidden state after each step
  Tensor<T> h0, c0;   // initial state
  const Tensor<T>* x = nullptr;  // input sequence [B, T, in], caller-owned
};

namespace detail {

template <typename T>
inline T sigmoid(T v) {
  return T(1) / (T(1) + std::exp(-v));
}

// In-place gate activations over a [rows, 4C] block.
template <typename T, typename Mat>
void activate_gates(Mat g, std::size_t cells) {
  const Eigen::Index c = static_cast<Eigen::Index>(cells);
  auto blk = [&](int k) { return g.middleCols(k * c, c).array(); };
  blk(0) = blk(0).unaryExpr([](T v) { return sigmoid(v); });
  blk(1) = blk(1).unaryExpr([](T v) { return sigmoid(v); });
  blk(2) = blk(2).tanh();
  blk(3) = blk(3).unaryExpr([](T v) { return sigmoid(v); });
}

// One recurrence step over strided views. lstm_forward and lstm_step both
// funnel through here, so iterating steps reproduces the batch form exactly
// (identical expression structure, identical operand shapes).
template <typename T>
void lstm_step_into(const Lstm<T>& layer, ConstStridedMap<T> x, StridedMap<T> gates,
                    LstmState<T>& state) {
  const Eigen::Index c = static_cast<Eigen::Index>(layer.cells);
  gates.noalias() = x * layer.W.mat();
  gates.noalias() += state.h.mat() * layer.U.mat();
  gates.rowwise() += layer.b.view(1, 4 * layer.cells).row(0);
  activate_gates<T>(gates, layer.cells);
  auto gi = gates.middleCols(0 * c, c).array();
  auto gf = gates.middleCols(1 * c, c).array();
  auto gg = gates.middleCols(2 * c, c).array();
  auto go = gates.middleCols(3 * c, c).array();
  state.c.mat().array() = gf * state.c.mat().array() + gi * gg;
  state.h.mat().array() = go * state.c.mat().array().tanh();
}

}  // namespace detail

// One recurrence step; updates the state in place and returns the output.
template <typename T>
Tensor<T> lstm_step(const Lstm<T>& layer, const Tensor<T>& x, LstmState<T>& state) {
  if (x.dim(x.rank() - 1) != layer.input_dim) {
    throw std::invalid_argument("lstm_step: shape mismatch");
  }
  const std::size_t batch = x.size() / layer.input_dim;
  Tensor<T> gates({batch, 4 * layer.cells});
  ConstStridedMap<T> xm(x.data(), static_cast<Eigen::Index>(batch),
                        static_cast<Eigen::Index>(layer.input_dim),
                        Eigen::OuterStride<>(static_cast<Eigen::Index>(layer.input_dim)));
  StridedMap<T> gm(gates.data(), static_cast<Eigen::Index>(batch),
                   static_cast<Eigen::Index>(4 * layer.cells),
                   Eigen::OuterStride<>(static_cast<Eigen::Index>(4 * layer.cells)));
  detail::lstm_step_into(layer, xm, gm, state);
  Tensor<T> y({batch, layer.cells});
  y.mat() = state.h.mat();
  return y;
}

// Full-sequence forward. `init` may be empty (zero state). When `cache` is
// given, the per-step values needed by lstm_backward are recorded.
template <typename T>
std::pair<Tensor<T>, LstmState<T>> lstm_forward(const Lstm<T>& layer, const Tensor<T>& x,
                                                const std::type_identity_t<LstmState<T>>* init,
                                                std::type_identity_t<LstmCache<T>>* cache = nullptr) {
  if (x.rank() != 3 || x.dim(2) != layer.input_dim) {
    throw std::invalid_argument("lstm_forward: shape mismatch");
  }
  const std::size_t batch = x.dim(0), steps = x.dim(1), c = layer.cells;

  Tensor<T> gates({batch, steps, 4 * c});
  LstmState<T> state = init ? LstmState<T>{*init} : zero_state<T>(batch, c);
  Tensor<T> outputs({batch, steps, c});
  Tensor<T> cell_seq({batch, steps, c});
  if (cache) {
    cache->h0 = state.h;
    cache->c0 = state.c;
    cache->x = &x;
  }
  for (std::size_t t = 0; t < steps; ++t) {
    detail::lstm_step_into(layer, x.time_slice(t, 0, batch), gates.time_slice(t, 0, batch),
                           state);
    outputs.time_slice(t, 0, batch) = state.h.mat();
    cell_seq.time_slice(t, 0, batch) = state.c.mat();
  }
  if (cache) {
    cache->gates = std::move(gates);
    cache->cell = std::move(cell_seq);
    cache->outputs = outputs;
  }
  outputs.check_finite("lstm_forward");
  return {std::move(outputs), std::move(state)};
}

template <typename T>
struct LstmGrads {
  Tensor<T> W, U, b;
};

// Backpropagation through time. `d_out` is the gradient on the full output
// sequence (may be empty), `dh_final`/`dc_final` the gradients on the final
// states (may be empty). Returns the input-sequence gradient plus the
// gradients on the initial state; accumulates parameter gradients into `g`.
template <typename T>
Tensor<T> lstm_backward(const Lstm<T>& layer, const LstmCache<T>& cache,
                        const Tensor<T>& d_out, const std::type_identity_t<Tensor<T>>* dh_final,
                        const std::type_identity_t<Tensor<T>>* dc_final, LstmGrads<T>& g,
                        std::type_identity_t<Tensor<T>>* dh0_out = nullptr,
                        std::type_identity_t<Tensor<T>>* dc0_out = nullptr) {
  const Tensor<T>& x = *cache.x;
  const std::size_t batch = x.dim(0), steps = x.dim(1), c = layer.cells;
  const Eigen::Index ci = static_cast<Eigen::Index>(c);

  MatrixRM<T> dh = MatrixRM<T>::Zero(batch, c);
  MatrixRM<T> dc = MatrixRM<T>::Zero(batch, c);
  if (dh_final) dh = dh_final->mat();
  if (dc_final) dc = dc_final->mat();

  Tensor<T> d_gates({batch, steps, 4 * c});  // d w.r.t. pre-activations
  for (std::size_t ts = steps; ts-- > 0;) {
    if (!d_out.empty()) dh += d_out.time_slice(ts, 0, batch);
    auto gmat = cache.gates.time_slice(ts, 0, batch);
    auto gi = gmat.middleCols(0 * ci, ci).array();
    auto gf = gmat.middleCols(1 * ci, ci).array();
    auto gg = gmat.middleCols(2 * ci, ci).array();
    auto go = gmat.middleCols(3 * ci, ci).array();
    auto c_t = cache.cell.time_slice(ts, 0, batch).array();

    MatrixRM<T> tanh_c = c_t.tanh().matrix();
    MatrixRM<T> d_o = (dh.array() * tanh_c.array()).matrix();
    dc.array() += dh.array() * go * (T(1) - tanh_c.array().square());

    // Previous cell state: cached at ts-1, or the initial state.
    ConstStridedMap<T> c_prev = ts == 0 ? cache.c0.strided_rows(0, batch)
                                        : cache.cell.time_slice(ts - 1, 0, batch);
    MatrixRM<T> d_f = (dc.array() * c_prev.array()).matrix();
    MatrixRM<T> d_i = (dc.array() * gg).matrix();
    MatrixRM<T> d_g = (dc.array() * gi).matrix();
    MatrixRM<T> dc_prev = (dc.array() * gf).matrix();

    auto dg = d_gates.time_slice(ts, 0, batch);
    dg.middleCols(0 * ci, ci).array() = d_i.array() * gi * (T(1) - gi);
    dg.middleCols(1 * ci, ci).array() = d_f.array() * gf * (T(1) - gf);
    dg.middleCols(2 * ci, ci).array() = d_g.array() * (T(1) - gg.square());
    dg.middleCols(3 * ci, ci).array() = d_o.array() * go * (T(1) - go);

    // h_{t-1} gradient and recurrent weight gradient.
    ConstStridedMap<T> h_prev = ts == 0 ? cache.h0.strided_rows(0, batch)
                                        : cache.outputs.time_slice(ts - 1, 0, batch);
    g.U.mat().noalias() += h_prev.transpose() * dg;
    dh.noalias() = dg * layer.U.mat().transpose();
    dc = dc_prev;
  }

  g.W.mat().noalias() +=
      x.view(batch * steps, layer.input_dim).transpose() * d_gates.view(batch * steps, 4 * c);
  g.b.view(1, 4 * c) += d_gates.view(batch * steps, 4 * c).colwise().sum();

  Tensor<T> dx({batch, steps, layer.input_dim});
  dx.view(batch * steps, layer.input_dim).noalias() =
      d_gates.view(batch * steps, 4 * c) * layer.W.mat().transpose();

  if (dh0_out) {
    *dh0_out = Tensor<T>({batch, c});
    dh0_out->mat() = dh;
  }
  if (dc0_out) {
    *dc0_out = Tensor<T>({batch, c});
    dc0_out->mat() = dc;
  }
  return dx;
}

}  // namespace hetenc::nn
