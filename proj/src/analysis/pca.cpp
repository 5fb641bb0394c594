#include "hetenc/analysis/pca.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace hetenc::analysis {

void jacobi_eigen_symmetric(const std::vector<std::vector<double>>& input,
                            std::vector<double>& values,
                            std::vector<std::vector<double>>& vectors) {
  const std::size_t n = input.size();
  std::vector<std::vector<double>> a = input;
  std::vector<std::vector<double>> v(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) v[i][i] = 1.0;

  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) scale = std::max(scale, std::abs(a[i][j]));
  }
  const double tol = scale > 0.0 ? 1e-14 * scale : 0.0;

  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) off += a[p][q] * a[p][q];
    }
    if (std::sqrt(off) <= tol) break;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (std::abs(a[p][q]) <= tol * 1e-2) continue;
        const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k][p], akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p][k], aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v[k][p], vkq = v[k][q];
          v[k][p] = c * vkp - s * vkq;
          v[k][q] = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t x, std::size_t y) { return a[x][x] > a[y][y]; });
  values.assign(n, 0.0);
  vectors.assign(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    values[i] = a[order[i]][order[i]];
    for (std::size_t k = 0; k < n; ++k) vectors[i][k] = v[k][order[i]];
  }
}

PcaModel pca_fit(const std::vector<std::vector<double>>& rows, int k) {
  const std::size_t n = rows.size();
  if (n < static_cast<std::size_t>(k) + 1) {
    throw std::invalid_argument("pca_fit: need at least k+1 vectors");
  }
  const std::size_t d = rows[0].size();
  PcaModel model;
  model.mean.assign(d, 0.0);
  for (const auto& r : rows) {
    for (std::size_t j = 0; j < d; ++j) model.mean[j] += r[j];
  }
  for (double& m : model.mean) m /= static_cast<double>(n);

  std::vector<std::vector<double>> cov(d, std::vector<double>(d, 0.0));
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < d; ++i) {
      const double di = r[i] - model.mean[i];
      for (std::size_t j = i; j < d; ++j) cov[i][j] += di * (r[j] - model.mean[j]);
    }
  }
  double total = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i; j < d; ++j) {
      cov[i][j] /= static_cast<double>(n - 1);
      cov[j][i] = cov[i][j];
    }
    total += cov[i][i];
  }
  if (total <= 0.0) throw std::invalid_argument("pca_fit: degenerate covariance");

  std::vector<double> values;
  std::vector<std::vector<double>> vectors;
  jacobi_eigen_symmetric(cov, values, vectors);
  for (int c = 0; c < k; ++c) {
    std::vector<double> comp = vectors[c];
    std::size_t arg = 0;
    for (std::size_t j = 1; j < d; ++j) {
      if (std::abs(comp[j]) > std::abs(comp[arg])) arg = j;
    }
    if (comp[arg] < 0.0) {
      for (double& x : comp) x = -x;
    }
    model.components.push_back(std::move(comp));
    model.explained_variance.push_back(values[c]);
  }
  return model;
}

std::vector<double> pca_project(const PcaModel& model, std::span<const double> v) {
  std::vector<double> out(model.components.size(), 0.0);
  for (std::size_t c = 0; c < model.components.size(); ++c) {
    for (std::size_t j = 0; j < v.size(); ++j) {
      out[c] += (v[j] - model.mean[j]) * model.components[c][j];
    }
  }
  return out;
}

}  // namespace hetenc::analysis
