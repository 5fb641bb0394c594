#include "hetenc/sim/align.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

namespace hetenc::sim {

namespace {

constexpr std::int64_t kScale = 10000;
constexpr std::int64_t kNegInf = std::numeric_limits<std::int64_t>::min() / 4;

std::int64_t quantize(double v) {
  const double scaled = v * static_cast<double>(kScale);
  const double rounded = std::nearbyint(scaled);
  if (std::abs(scaled - rounded) > 1e-6) {
    throw std::invalid_argument("align_score: params must be multiples of 1e-4");
  }
  return static_cast<std::int64_t>(rounded);
}

}  // namespace

double align_score(const std::string& s1, const std::string& s2,
                   const AlignmentParams& params) {
  if (s1.empty() || s2.empty()) {
    throw std::invalid_argument("align_score: empty sequence");
  }
  const std::int64_t match = quantize(params.match);
  const std::int64_t mismatch = quantize(params.mismatch);
  const std::int64_t open = quantize(params.gap_open);
  const std::int64_t extend = quantize(params.gap_extend);

  const std::size_t n = s1.size(), m = s2.size();
  // Three lanes: M ends in a substitution column, X in a gap in s2 (s1 char
  // against '-'), Y in a gap in s1. Rolling rows over s2.
  std::vector<std::int64_t> M(m + 1), X(m + 1), Y(m + 1);
  std::vector<std::int64_t> Mp(m + 1), Xp(m + 1), Yp(m + 1);

  Mp[0] = 0;
  Xp[0] = Yp[0] = kNegInf;
  for (std::size_t j = 1; j <= m; ++j) {
    Mp[j] = kNegInf;
    Xp[j] = kNegInf;
    Yp[j] = open + static_cast<std::int64_t>(j - 1) * extend;
  }

  for (std::size_t i = 1; i <= n; ++i) {
    M[0] = kNegInf;
    Y[0] = kNegInf;
    X[0] = open + static_cast<std::int64_t>(i - 1) * extend;
    for (std::size_t j = 1; j <= m; ++j) {
      const std::int64_t sub = (s1[i - 1] == s2[j - 1]) ? match : mismatch;
      M[j] = std::max({Mp[j - 1], Xp[j - 1], Yp[j - 1]}) + sub;
      X[j] = std::max({Mp[j] + open, Xp[j] + extend, Yp[j] + open});
      Y[j] = std::max({M[j - 1] + open, X[j - 1] + open, Y[j - 1] + extend});
    }
    std::swap(M, Mp);
    std::swap(X, Xp);
    std::swap(Y, Yp);
  }
  const std::int64_t best = std::max({Mp[m], Xp[m], Yp[m]});
  return static_cast<double>(best) / static_cast<double>(kScale);
}

}  // namespace hetenc::sim
