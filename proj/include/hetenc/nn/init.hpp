#pragma once

#include <random>

#include <Eigen/QR>

#include "hetenc/nn/tensor.hpp"
#include "hetenc/nn/rng.hpp"

namespace hetenc::nn {

template <typename T>
void glorot_uniform(Tensor<T>& w, std::size_t fan_in, std::size_t fan_out,
                    std::mt19937_64& rng) {
  const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  for (std::size_t i = 0; i < w.size(); ++i) {
    w[i] = static_cast<T>((2.0 * uniform_unit(rng) - 1.0) * limit);
  }
}

// Orthogonal init of a square block via Householder QR of a Gaussian matrix,
// with the R diagonal sign fixed so the result is unique.
template <typename T>
MatrixRM<T> orthogonal_square(std::size_t n, std::mt19937_64& rng) {
  MatrixRM<T> a(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) a(i, j) = static_cast<T>(normal_unit(rng));
  }
  Eigen::HouseholderQR<MatrixRM<T>> qr(a);
  MatrixRM<T> q = qr.householderQ() * MatrixRM<T>::Identity(n, n);
  MatrixRM<T> r = qr.matrixQR().template triangularView<Eigen::Upper>();
  for (std::size_t j = 0; j < n; ++j) {
    if (r(j, j) < T(0)) q.col(j) = -q.col(j);
  }
  return q;
}

// Recurrent kernel init: one orthogonal block per gate.
template <typename T>
void orthogonal_gates(Tensor<T>& u, std::size_t cells, std::mt19937_64& rng) {
  auto m = u.mat();
  for (int gate = 0; gate < 4; ++gate) {
    m.middleCols(gate * cells, cells) = orthogonal_square<T>(cells, rng);
  }
}

}  // namespace hetenc::nn
