#pragma once

#include <array>
#include <string>

#include "hetenc/chem/mol_graph.hpp"

namespace hetenc::chem {

// Counts of {single, double, triple, aromatic} bonds.
struct BondFormula {
  int single = 0;
  int double_ = 0;
  int triple = 0;
  int aromatic = 0;

  bool operator==(const BondFormula&) const = default;
};

// Skeleton graph: every atom becomes carbon, every bond single, aromatic flags
// cleared; side chains are kept. Scaffolds are comparison objects — compare
// them through scaffold_key().
MolGraph generalized_scaffold(const MolGraph& mol);

// Canonical string of the scaffold, usable as an equality key.
std::string scaffold_key(const MolGraph& mol);

// Molecular formula in Hill order (C, H, then alphabetical; without carbon,
// fully alphabetical).
std::string sum_formula(const MolGraph& mol);

BondFormula bond_formula(const MolGraph& mol);

// Graph identity via canonical-string equality.
bool same_molecule(const MolGraph& a, const MolGraph& b);

}  // namespace hetenc::chem
