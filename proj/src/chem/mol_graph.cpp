#include "hetenc/chem/mol_graph.hpp"

#include <algorithm>
#include <functional>

namespace hetenc::chem {

std::string_view to_string(ChemErrorKind k) {
  switch (k) {
    case ChemErrorKind::UnbalancedParenthesis: return "UnbalancedParenthesis";
    case ChemErrorKind::UnclosedRing: return "UnclosedRing";
    case ChemErrorKind::UnknownElement: return "UnknownElement";
    case ChemErrorKind::ValenceViolation: return "ValenceViolation";
    case ChemErrorKind::AromaticPerceptionError: return "AromaticPerceptionError";
    case ChemErrorKind::RingBondConflict: return "RingBondConflict";
    case ChemErrorKind::RingClosureOverflow: return "RingClosureOverflow";
    case ChemErrorKind::MalformedInput: return "MalformedInput";
  }
  return "ChemError";
}

void MolGraph::build_adjacency() {
  const int n = atom_count();
  adj_start_.assign(n + 1, 0);
  for (const Bond& b : bonds_) {
    ++adj_start_[b.a + 1];
    ++adj_start_[b.b + 1];
  }
  for (int i = 0; i < n; ++i) adj_start_[i + 1] += adj_start_[i];
  adjacency_.resize(bonds_.size() * 2);
  std::vector<int> cursor(adj_start_.begin(), adj_start_.end() - 1);
  for (int bi = 0; bi < bond_count(); ++bi) {
    const Bond& b = bonds_[bi];
    adjacency_[cursor[b.a]++] = {b.b, bi};
    adjacency_[cursor[b.b]++] = {b.a, bi};
  }
}

// Bridge detection via DFS low-link; a bond is in a ring iff it is not a bridge.
void MolGraph::mark_ring_bonds() {
  const int n = atom_count();
  in_ring_.assign(bonds_.size(), true);
  std::vector<int> disc(n, -1), low(n, 0);
  int timer = 0;
  // Iterative DFS to stay safe on long chains.
  struct Frame {
    int atom;
    int parent_bond;
    std::size_t next;
  };
  std::vector<Frame> stack;
  for (int root = 0; root < n; ++root) {
    if (disc[root] != -1) continue;
    stack.push_back({root, -1, 0});
    disc[root] = low[root] = timer++;
    while (!stack.empty()) {
      Frame& f = stack.back();
      auto adj = neighbors(f.atom);
      if (f.next < adj.size()) {
        AdjEntry e = adj[f.next++];
        if (e.bond == f.parent_bond) continue;
        if (disc[e.neighbor] == -1) {
          disc[e.neighbor] = low[e.neighbor] = timer++;
          stack.push_back({e.neighbor, e.bond, 0});
        } else {
          low[f.atom] = std::min(low[f.atom], disc[e.neighbor]);
        }
      } else {
        stack.pop_back();
        if (!stack.empty()) {
          Frame& p = stack.back();
          low[p.atom] = std::min(low[p.atom], low[f.atom]);
          if (low[f.atom] > disc[p.atom]) in_ring_[f.parent_bond] = false;
        }
      }
    }
  }
}

bool MolGraph::atom_in_ring(int atom) const {
  for (const AdjEntry& e : neighbors(atom)) {
    if (in_ring_[e.bond]) return true;
  }
  return false;
}

int MolGraph::bond_between(int a, int b) const {
  for (const AdjEntry& e : neighbors(a)) {
    if (e.neighbor == b) return e.bond;
  }
  return -1;
}

namespace {

int sigma_contribution(BondOrder o) {
  switch (o) {
    case BondOrder::Single: return 1;
    case BondOrder::Double: return 2;
    case BondOrder::Triple: return 3;
    case BondOrder::Aromatic: return 1;  // sigma framework; pi handled per atom
  }
  return 1;
}

int smallest_valence_at_least(Element e, int needed) {
  for (int v : valences(e)) {
    if (v >= needed) return v;
  }
  return -1;
}

}  // namespace

// Hydrogen model: every atom fills its smallest admissible valence. Aromatic
// bonds contribute 1 to the sigma sum; an aromatic atom additionally consumes
// one valence unit for its pi bond when it has a unit to spare after sigma
// bonds and any bracket H count (so pyrrole-type [nH] donates a lone pair and
// gets no pi correction, pyridine-type n does).
void MolGraph::resolve_hydrogens(bool validate) {
  for (int i = 0; i < atom_count(); ++i) {
    Atom& a = atoms_[i];
    int sigma = 0;
    for (const AdjEntry& e : neighbors(i)) sigma += sigma_contribution(bonds_[e.bond].order);
    const int eh = a.explicit_h.value_or(0);
    int pi = 0;
    if (a.aromatic) {
      int v0 = smallest_valence_at_least(a.element, sigma + eh);
      if (v0 - (sigma + eh) >= 1) pi = 1;
    }
    const int v = smallest_valence_at_least(a.element, sigma + eh + pi);
    if (v < 0) {
      if (validate) {
        throw ChemError(ChemErrorKind::ValenceViolation,
                        "atom " + std::to_string(i) + " (" + std::string(symbol(a.element)) +
                            ") exceeds its maximum valence");
      }
      a.hydrogens = eh;
      continue;
    }
    a.hydrogens = eh + (v - sigma - eh - pi);
  }
}

MolGraph MolGraph::build(std::vector<Atom> atoms, std::vector<Bond> bonds,
                         const std::vector<bool>& unspecified) {
  MolGraph m;
  m.atoms_ = std::move(atoms);
  m.bonds_ = std::move(bonds);
  m.build_adjacency();
  m.mark_ring_bonds();
  for (int bi = 0; bi < m.bond_count(); ++bi) {
    Bond& b = m.bonds_[bi];
    const bool both_aromatic = m.atoms_[b.a].aromatic && m.atoms_[b.b].aromatic;
    if (bi < static_cast<int>(unspecified.size()) && unspecified[bi] && both_aromatic) {
      b.order = m.in_ring_[bi] ? BondOrder::Aromatic : BondOrder::Single;
    }
    if (b.order == BondOrder::Aromatic && !both_aromatic) {
      throw ChemError(ChemErrorKind::AromaticPerceptionError,
                      "aromatic bond with non-aromatic endpoint");
    }
  }
  for (int i = 0; i < m.atom_count(); ++i) {
    if (m.atoms_[i].aromatic && !m.atom_in_ring(i)) {
      throw ChemError(ChemErrorKind::AromaticPerceptionError,
                      "aromatic atom " + std::to_string(i) + " is not in a ring");
    }
  }
  m.resolve_hydrogens(/*validate=*/true);
  return m;
}

MolGraph MolGraph::unchecked(std::vector<Atom> atoms, std::vector<Bond> bonds) {
  MolGraph m;
  m.atoms_ = std::move(atoms);
  m.bonds_ = std::move(bonds);
  m.build_adjacency();
  m.mark_ring_bonds();
  m.resolve_hydrogens(/*validate=*/false);
  return m;
}

}  // namespace hetenc::chem
