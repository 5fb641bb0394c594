#pragma once

// Independent reference implementations used only to check the library.
// Everything here is deliberately brute-force and kept free of the code
// paths it verifies.

#include <functional>
#include <string>
#include <vector>

#include "hetenc/chem/mol_graph.hpp"
#include "hetenc/sim/align.hpp"

namespace oracles {

// Graph isomorphism by backtracking over atom permutations (feasible for
// molecules up to ~10 heavy atoms). Honors element, aromatic flag, hydrogen
// count and bond orders.
bool brute_force_isomorphic(const hetenc::chem::MolGraph& a, const hetenc::chem::MolGraph& b);

// Maximal global alignment score by enumerating every alignment (no
// column may be a gap in both sequences). Affine gaps: open for the first
// column of a run, extend for the rest; end gaps count. Integer-scaled
// exactly like the production scorer so equality is exact.
double align_enumerate(const std::string& s1, const std::string& s2,
                       const hetenc::sim::AlignmentParams& params = {});

// Hydrogen filling via explicit kekulization: aromatic bonds are assigned
// single/double so that no atom exceeds its valence and the number of double
// bonds is maximal; returns the total hydrogen count. -1 if no assignment
// exists (not an aromatic system our model accepts).
int kekulized_hydrogen_count(const hetenc::chem::MolGraph& mol);

// Central finite differences over a flat parameter view.
// loss() must re-run the full forward pass against the current parameters.
struct GradCheckResult {
  double max_rel_error = 0.0;
  std::size_t checked = 0;
};
GradCheckResult finite_difference_check(const std::vector<double*>& params,
                                        const std::vector<std::size_t>& sizes,
                                        const std::vector<const double*>& analytic,
                                        const std::function<double()>& loss, double h = 1e-5);

}  // namespace oracles
