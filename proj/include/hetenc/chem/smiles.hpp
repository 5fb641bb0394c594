#pragma once

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "hetenc/chem/mol_graph.hpp"

namespace hetenc::chem {

// Parses the supported SMILES subset: organic-subset atoms (B C N O F S Cl Br I),
// aromatic lowercase forms (b c n o s), bracket atoms [<symbol><H><count>],
// bond symbols - = #, branches, ring closures 1-9. No charges, isotopes or
// stereo. Throws ChemError on invalid input.
MolGraph parse_smiles(const std::string& text);

// Non-throwing wrapper; nullopt on any parse error.
std::optional<MolGraph> try_parse_smiles(const std::string& text);

// Canonical atom ranks via Morgan-style iterative refinement with deterministic
// tie-breaking. Ranks form a permutation of 0..n-1 and depend only on the
// molecular graph, not on the input atom order.
std::vector<int> canonical_ranks(const MolGraph& mol);

// Deterministic canonical SMILES: DFS from the rank-0 atom, neighbors in
// ascending rank. Throws RingClosureOverflow if more than 9 ring closures
// would be open at once.
std::string write_canonical(const MolGraph& mol);

// Random enumeration: DFS from a uniformly random atom with uniformly random
// neighbor order. The result parses back to an isomorphic molecule.
std::string write_random(const MolGraph& mol, std::mt19937_64& rng);

}  // namespace hetenc::chem
