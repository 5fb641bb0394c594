#include "hetenc/sim/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace hetenc::sim {

namespace {

template <typename T>
double latent_similarity_impl(std::span<const T> a, std::span<const T> b, double eps) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("latent_similarity: dimension mismatch");
  }
  double sq = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = static_cast<double>(a[i]) - static_cast<double>(b[i]);
    sq += d * d;
  }
  return -std::log(std::sqrt(sq) + eps);
}

}  // namespace

double latent_similarity(std::span<const double> a, std::span<const double> b, double eps) {
  return latent_similarity_impl(a, b, eps);
}

double latent_similarity(std::span<const float> a, std::span<const float> b, double eps) {
  return latent_similarity_impl(a, b, eps);
}

double pearson_r2(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 3) {
    throw std::invalid_argument("pearson_r2: need equal lengths >= 3");
  }
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) {
    throw std::invalid_argument("pearson_r2: degenerate variance");
  }
  const double r = sxy / std::sqrt(sxx * syy);
  return r * r;
}

}  // namespace hetenc::sim
