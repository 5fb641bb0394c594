#include "hetenc/chem/descriptors.hpp"

#include <algorithm>
#include <map>

#include "hetenc/chem/smiles.hpp"

namespace hetenc::chem {

MolGraph generalized_scaffold(const MolGraph& mol) {
  std::vector<Atom> atoms(mol.atom_count());
  for (auto& a : atoms) a = Atom{Element::C, false, std::nullopt, 0};
  std::vector<Bond> bonds(mol.bonds().begin(), mol.bonds().end());
  for (Bond& b : bonds) b.order = BondOrder::Single;
  return MolGraph::unchecked(std::move(atoms), std::move(bonds));
}

std::string scaffold_key(const MolGraph& mol) {
  return write_canonical(generalized_scaffold(mol));
}

std::string sum_formula(const MolGraph& mol) {
  std::map<std::string, int> counts;
  int hydrogens = 0;
  for (const Atom& a : mol.atoms()) {
    ++counts[std::string(symbol(a.element))];
    hydrogens += a.hydrogens;
  }
  auto fmt = [](const std::string& sym, int n) {
    return n == 1 ? sym : sym + std::to_string(n);
  };
  std::string out;
  const bool has_carbon = counts.count("C") > 0;
  if (has_carbon) {
    out += fmt("C", counts["C"]);
    counts.erase("C");
    if (hydrogens > 0) out += fmt("H", hydrogens);
  } else if (hydrogens > 0) {
    counts["H"] = hydrogens;
  }
  for (const auto& [sym, n] : counts) out += fmt(sym, n);
  return out;
}

BondFormula bond_formula(const MolGraph& mol) {
  BondFormula f;
  for (const Bond& b : mol.bonds()) {
    switch (b.order) {
      case BondOrder::Single: ++f.single; break;
      case BondOrder::Double: ++f.double_; break;
      case BondOrder::Triple: ++f.triple; break;
      case BondOrder::Aromatic: ++f.aromatic; break;
    }
  }
  return f;
}

bool same_molecule(const MolGraph& a, const MolGraph& b) {
  if (a.atom_count() != b.atom_count() || a.bond_count() != b.bond_count()) return false;
  return write_canonical(a) == write_canonical(b);
}

}  // namespace hetenc::chem
