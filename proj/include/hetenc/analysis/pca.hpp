#pragma once

#include <span>
#include <vector>

namespace hetenc::analysis {

// Eigendecomposition of a symmetric matrix via cyclic Jacobi rotations.
// Eigenvalues come out in descending order with matching unit eigenvectors
// (rows of `vectors`).
void jacobi_eigen_symmetric(const std::vector<std::vector<double>>& a,
                            std::vector<double>& values,
                            std::vector<std::vector<double>>& vectors);

struct PcaModel {
  std::vector<double> mean;                      // [d]
  std::vector<std::vector<double>> components;   // k rows, orthonormal
  std::vector<double> explained_variance;        // non-increasing
};

// Top-k principal components of the sample covariance (divisor n-1). Sign
// convention: the largest-magnitude entry of each component is positive.
// Throws std::invalid_argument on fewer than k+1 vectors or zero covariance.
PcaModel pca_fit(const std::vector<std::vector<double>>& rows, int k = 2);

std::vector<double> pca_project(const PcaModel& model, std::span<const double> v);

}  // namespace hetenc::analysis
