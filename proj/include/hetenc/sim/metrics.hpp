#pragma once

#include <span>

namespace hetenc::sim {

// -ln(||a - b|| + eps). The clamp keeps identical vectors at a large finite
// value (-ln(1e-9) ~ 20.72). Throws std::invalid_argument on dimension
// mismatch.
double latent_similarity(std::span<const double> a, std::span<const double> b,
                         double eps = 1e-9);
double latent_similarity(std::span<const float> a, std::span<const float> b,
                         double eps = 1e-9);

// Squared Pearson correlation. Requires equal lengths >= 3 and non-zero
// variance on both sides; throws std::invalid_argument otherwise.
double pearson_r2(std::span<const double> x, std::span<const double> y);

}  // namespace hetenc::sim
