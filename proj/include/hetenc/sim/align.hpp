#pragma once

#include <string>

namespace hetenc::sim {

// Global alignment scoring. A gap of length L costs gap_open + (L-1) *
// gap_extend; end gaps are charged like internal ones. Scores are quantized
// to 1/10000 units internally so equal-score alignments compare exactly.
struct AlignmentParams {
  double match = 1.0;
  double mismatch = -1.0;
  double gap_open = -0.5;
  double gap_extend = -0.05;
};

// Maximal global alignment score (Gotoh three-lane dynamic program).
double align_score(const std::string& s1, const std::string& s2,
                   const AlignmentParams& params = {});

}  // namespace hetenc::sim
