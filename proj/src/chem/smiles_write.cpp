#include <algorithm>
#include <cctype>
#include <functional>
#include <string>
#include <vector>

#include "hetenc/chem/smiles.hpp"

namespace hetenc::chem {

namespace {

// Hydrogen count a bare (unbracketed) token would resolve to in this bonding
// context, or -1 when no valence fits. Mirrors MolGraph::resolve_hydrogens.
int bare_token_hydrogens(const MolGraph& mol, int atom) {
  const Atom& a = mol.atom(atom);
  int sigma = 0;
  for (const AdjEntry& e : mol.neighbors(atom)) {
    switch (mol.bond(e.bond).order) {
      case BondOrder::Single: sigma += 1; break;
      case BondOrder::Double: sigma += 2; break;
      case BondOrder::Triple: sigma += 3; break;
      case BondOrder::Aromatic: sigma += 1; break;
    }
  }
  auto fit = [&](int needed) {
    for (int v : valences(a.element)) {
      if (v >= needed) return v;
    }
    return -1;
  };
  int pi = 0;
  if (a.aromatic) {
    const int v0 = fit(sigma);
    if (v0 < 0) return -1;
    if (v0 - sigma >= 1) pi = 1;
  }
  const int v = fit(sigma + pi);
  if (v < 0) return -1;
  return v - sigma - pi;
}

std::string atom_token(const MolGraph& mol, int atom) {
  const Atom& a = mol.atom(atom);
  std::string sym(symbol(a.element));
  if (a.aromatic) {
    for (char& c : sym) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  if (bare_token_hydrogens(mol, atom) == a.hydrogens) return sym;
  // Bracket form carries the hydrogen count the bare token cannot express
  // (pyrrole-type [nH] is the normal case).
  std::string out = "[" + sym;
  if (a.hydrogens == 1) {
    out += "H";
  } else if (a.hydrogens > 1) {
    out += "H" + std::to_string(a.hydrogens);
  }
  out += "]";
  return out;
}

const char* bond_token(const MolGraph& mol, int bond) {
  const Bond& b = mol.bond(bond);
  switch (b.order) {
    case BondOrder::Double: return "=";
    case BondOrder::Triple: return "#";
    case BondOrder::Aromatic: return "";
    case BondOrder::Single:
      // A single bond between two aromatic atoms (e.g. a biaryl link) must be
      // written explicitly or it would read back as aromatic inside a ring.
      if (mol.atom(b.a).aromatic && mol.atom(b.b).aromatic) return "-";
      return "";
  }
  return "";
}

using OrderFn = std::function<void(int atom, std::vector<AdjEntry>&)>;

struct AtomPlan {
  std::vector<int> ring_bonds;               // discovery order
  std::vector<std::pair<int, int>> children; // (bond, child atom)
};

// One DFS pass decides the spanning tree and ring-closure bonds; emission
// then replays it, assigning the lowest free closure digit at each opening.
std::string write_with_order(const MolGraph& mol, int start, const OrderFn& order) {
  const int n = mol.atom_count();
  std::vector<AtomPlan> plan(n);
  std::vector<bool> visited(n, false);
  std::vector<bool> bond_done(mol.bond_count(), false);

  struct Frame {
    int atom;
    std::vector<AdjEntry> adj;
    std::size_t next = 0;
  };
  std::vector<Frame> stack;
  auto open_frame = [&](int atom, int parent_bond) {
    visited[atom] = true;
    std::vector<AdjEntry> adj;
    for (const AdjEntry& e : mol.neighbors(atom)) {
      if (e.bond != parent_bond) adj.push_back(e);
    }
    order(atom, adj);
    stack.push_back({atom, std::move(adj)});
  };
  open_frame(start, -1);
  while (!stack.empty()) {
    Frame& f = stack.back();
    if (f.next >= f.adj.size()) {
      stack.pop_back();
      continue;
    }
    const AdjEntry e = f.adj[f.next++];
    if (bond_done[e.bond]) continue;
    if (visited[e.neighbor]) {
      bond_done[e.bond] = true;
      plan[f.atom].ring_bonds.push_back(e.bond);
      plan[e.neighbor].ring_bonds.push_back(e.bond);
    } else {
      bond_done[e.bond] = true;
      plan[f.atom].children.emplace_back(e.bond, e.neighbor);
      open_frame(e.neighbor, e.bond);
    }
  }

  std::string out;
  std::vector<int> digit_of_bond(mol.bond_count(), -1);
  bool digit_free[10];
  std::fill(std::begin(digit_free), std::end(digit_free), true);

  std::function<void(int)> emit = [&](int atom) {
    out += atom_token(mol, atom);
    for (int rb : plan[atom].ring_bonds) {
      if (digit_of_bond[rb] < 0) {
        int d = 1;
        while (d <= 9 && !digit_free[d]) ++d;
        if (d > 9) {
          throw ChemError(ChemErrorKind::RingClosureOverflow,
                          "more than 9 ring closures open at once");
        }
        digit_free[d] = false;
        digit_of_bond[rb] = d;
        out += bond_token(mol, rb);
        out += static_cast<char>('0' + d);
      } else {
        const int d = digit_of_bond[rb];
        digit_free[d] = true;
        out += static_cast<char>('0' + d);
      }
    }
    const auto& kids = plan[atom].children;
    for (std::size_t i = 0; i < kids.size(); ++i) {
      const bool last = (i + 1 == kids.size());
      if (!last) out += "(";
      out += bond_token(mol, kids[i].first);
      emit(kids[i].second);
      if (!last) out += ")";
    }
  };
  emit(start);
  return out;
}

}  // namespace

std::string write_canonical(const MolGraph& mol) {
  const std::vector<int> ranks = canonical_ranks(mol);
  int start = 0;
  for (int i = 0; i < mol.atom_count(); ++i) {
    if (ranks[i] == 0) start = i;
  }
  OrderFn by_rank = [&ranks](int, std::vector<AdjEntry>& adj) {
    std::sort(adj.begin(), adj.end(),
              [&](const AdjEntry& x, const AdjEntry& y) {
                return ranks[x.neighbor] < ranks[y.neighbor];
              });
  };
  return write_with_order(mol, start, by_rank);
}

std::string write_random(const MolGraph& mol, std::mt19937_64& rng) {
  const int n = mol.atom_count();
  auto draw = [&rng](std::size_t bound) {  // uniform in [0, bound)
    return static_cast<std::size_t>(rng() % bound);
  };
  const int start = static_cast<int>(draw(n));
  OrderFn shuffle = [&](int, std::vector<AdjEntry>& adj) {
    for (std::size_t i = adj.size(); i > 1; --i) {
      std::swap(adj[i - 1], adj[draw(i)]);
    }
  };
  return write_with_order(mol, start, shuffle);
}

}  // namespace hetenc::chem
