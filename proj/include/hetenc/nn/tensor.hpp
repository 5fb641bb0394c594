#pragma once

#include <Eigen/Core>
#include <cassert>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace hetenc::nn {

template <typename T>
using MatrixRM = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <typename T>
using VectorX = Eigen::Matrix<T, Eigen::Dynamic, 1>;
template <typename T>
using MatMap = Eigen::Map<MatrixRM<T>>;
template <typename T>
using ConstMatMap = Eigen::Map<const MatrixRM<T>>;
template <typename T>
using StridedMap = Eigen::Map<MatrixRM<T>, 0, Eigen::OuterStride<>>;
template <typename T>
using ConstStridedMap = Eigen::Map<const MatrixRM<T>, 0, Eigen::OuterStride<>>;

// Dense row-major tensor. Shapes are fixed at construction; math runs through
// Eigen views over the flat buffer.
template <typename T>
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(std::vector<std::size_t> shape)
      : shape_(std::move(shape)), data_(element_count(shape_), T(0)) {}

  static std::size_t element_count(const std::vector<std::size_t>& shape) {
    return std::accumulate(shape.begin(), shape.end(), std::size_t{1},
                           std::multiplies<>());
  }

  const std::vector<std::size_t>& shape() const { return shape_; }
  std::size_t rank() const { return shape_.size(); }
  std::size_t dim(std::size_t i) const { return shape_[i]; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  T* data() { return data_.data(); }
  const T* data() const { return data_.data(); }
  T& operator[](std::size_t i) { return data_[i]; }
  const T& operator[](std::size_t i) const { return data_[i]; }

  void fill(T v) { std::fill(data_.begin(), data_.end(), v); }

  // Reinterprets the shape; element count must be unchanged.
  void reshape(std::vector<std::size_t> shape) {
    assert(element_count(shape) == size());
    shape_ = std::move(shape);
  }

  // Rank-2 view: [shape[0], product of the rest].
  MatMap<T> mat() {
    assert(rank() >= 1);
    const std::size_t rows = shape_[0];
    return MatMap<T>(data(), static_cast<Eigen::Index>(rows),
                     static_cast<Eigen::Index>(rows ? size() / rows : 0));
  }
  ConstMatMap<T> mat() const {
    assert(rank() >= 1);
    const std::size_t rows = shape_[0];
    return ConstMatMap<T>(data(), static_cast<Eigen::Index>(rows),
                          static_cast<Eigen::Index>(rows ? size() / rows : 0));
  }

  // Flattened [rows, cols] view regardless of rank; rows*cols must equal size.
  MatMap<T> view(std::size_t rows, std::size_t cols) {
    assert(rows * cols == size());
    return MatMap<T>(data(), static_cast<Eigen::Index>(rows),
                     static_cast<Eigen::Index>(cols));
  }
  ConstMatMap<T> view(std::size_t rows, std::size_t cols) const {
    assert(rows * cols == size());
    return ConstMatMap<T>(data(), static_cast<Eigen::Index>(rows),
                          static_cast<Eigen::Index>(cols));
  }

  // Time slice of a [B, T, D] tensor as a [rows, D] map (rows <= B), starting
  // at batch row `row0`.
  StridedMap<T> time_slice(std::size_t t, std::size_t row0, std::size_t rows) {
    assert(rank() == 3);
    const std::size_t tt = shape_[1], d = shape_[2];
    return StridedMap<T>(data() + row0 * tt * d + t * d,
                         static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(d),
                         Eigen::OuterStride<>(static_cast<Eigen::Index>(tt * d)));
  }
  ConstStridedMap<T> time_slice(std::size_t t, std::size_t row0, std::size_t rows) const {
    assert(rank() == 3);
    const std::size_t tt = shape_[1], d = shape_[2];
    return ConstStridedMap<T>(data() + row0 * tt * d + t * d,
                              static_cast<Eigen::Index>(rows),
                              static_cast<Eigen::Index>(d),
                              Eigen::OuterStride<>(static_cast<Eigen::Index>(tt * d)));
  }

  // Rank-2 row block with the strided map type (interchangeable with
  // time_slice results).
  ConstStridedMap<T> strided_rows(std::size_t row0, std::size_t nrows) const {
    assert(rank() == 2);
    return ConstStridedMap<T>(data() + row0 * shape_[1], static_cast<Eigen::Index>(nrows),
                              static_cast<Eigen::Index>(shape_[1]),
                              Eigen::OuterStride<>(static_cast<Eigen::Index>(shape_[1])));
  }

  // Contiguous row block [rows, cols] of a rank-2 tensor.
  MatMap<T> rows(std::size_t row0, std::size_t nrows) {
    assert(rank() == 2);
    return MatMap<T>(data() + row0 * shape_[1], static_cast<Eigen::Index>(nrows),
                     static_cast<Eigen::Index>(shape_[1]));
  }
  ConstMatMap<T> rows(std::size_t row0, std::size_t nrows) const {
    assert(rank() == 2);
    return ConstMatMap<T>(data() + row0 * shape_[1], static_cast<Eigen::Index>(nrows),
                          static_cast<Eigen::Index>(shape_[1]));
  }

  // NaN/Inf hook; active in debug builds only.
  void check_finite([[maybe_unused]] const char* where) const {
#ifndef NDEBUG
    for (const T& v : data_) {
      if (!std::isfinite(static_cast<double>(v))) {
        throw std::runtime_error(std::string("non-finite value after ") + where);
      }
    }
#endif
  }

 private:
  std::vector<std::size_t> shape_;
  std::vector<T> data_;
};

using Tensorf = Tensor<float>;
using Tensord = Tensor<double>;

}  // namespace hetenc::nn
