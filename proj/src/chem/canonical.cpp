#include <algorithm>
#include <numeric>
#include <vector>

#include "hetenc/chem/smiles.hpp"

namespace hetenc::chem {

namespace {

using Key = std::vector<int>;

int class_count(const std::vector<int>& cls) {
  return cls.empty() ? 0 : *std::max_element(cls.begin(), cls.end()) + 1;
}

// Dense ranks of atoms ordered by key content; equal keys share a rank.
std::vector<int> dense_rank(const std::vector<Key>& keys) {
  const int n = static_cast<int>(keys.size());
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return keys[a] < keys[b]; });
  std::vector<int> cls(n, 0);
  int rank = 0;
  for (int i = 0; i < n; ++i) {
    if (i > 0 && keys[order[i]] != keys[order[i - 1]]) ++rank;
    cls[order[i]] = rank;
  }
  return cls;
}

Key initial_key(const MolGraph& mol, int i) {
  const Atom& a = mol.atom(i);
  Key k{mol.degree(i), atomic_number(a.element), a.aromatic ? 1 : 0, a.hydrogens};
  std::vector<int> orders;
  for (const AdjEntry& e : mol.neighbors(i)) {
    orders.push_back(static_cast<int>(mol.bond(e.bond).order));
  }
  std::sort(orders.begin(), orders.end());
  k.insert(k.end(), orders.begin(), orders.end());
  return k;
}

std::vector<int> initial_classes(const MolGraph& mol) {
  std::vector<Key> keys(mol.atom_count());
  for (int i = 0; i < mol.atom_count(); ++i) keys[i] = initial_key(mol, i);
  return dense_rank(keys);
}

// Neighbor-multiset refinement to a stable partition. Keys embed the current
// class, so the partition only ever splits; stability is reached when the
// class count stops growing.
std::vector<int> refine(const MolGraph& mol, std::vector<int> cls) {
  const int n = mol.atom_count();
  int nc = class_count(cls);
  for (;;) {
    std::vector<Key> keys(n);
    for (int i = 0; i < n; ++i) {
      Key k{cls[i]};
      std::vector<std::pair<int, int>> nb;
      for (const AdjEntry& e : mol.neighbors(i)) {
        nb.emplace_back(static_cast<int>(mol.bond(e.bond).order), cls[e.neighbor]);
      }
      std::sort(nb.begin(), nb.end());
      for (const auto& [o, c] : nb) {
        k.push_back(o);
        k.push_back(c);
      }
      keys[i] = std::move(k);
    }
    std::vector<int> next = dense_rank(keys);
    const int next_nc = class_count(next);
    if (next_nc == nc) return next;
    cls = std::move(next);
    nc = next_nc;
  }
}

// Give atom `target` its own class, placed ahead of the remainder of its
// former class; everything else shifts accordingly.
std::vector<int> individualize(const std::vector<int>& cls, int target) {
  const int c = cls[target];
  std::vector<int> out(cls.size());
  for (std::size_t i = 0; i < cls.size(); ++i) {
    if (cls[i] < c) {
      out[i] = cls[i];
    } else if (static_cast<int>(i) == target) {
      out[i] = c;
    } else if (cls[i] == c) {
      out[i] = c + 1;
    } else {
      out[i] = cls[i] + 1;
    }
  }
  return out;
}

// Relabeling-invariant signature of the partition reached after
// individualizing `target`: per class, its size, the members' initial
// invariant and the class-level edge profile. Used only to order tie-break
// candidates, so it needs to be a function of graph structure alone.
Key individualized_signature(const MolGraph& mol, const std::vector<int>& cls, int target) {
  std::vector<int> refined = refine(mol, individualize(cls, target));
  const int nc = class_count(refined);
  std::vector<int> repr(nc, -1);
  for (int i = 0; i < mol.atom_count(); ++i) {
    if (repr[refined[i]] < 0) repr[refined[i]] = i;
  }
  std::vector<int> size(nc, 0);
  for (int c : refined) ++size[c];
  Key sig;
  for (int c = 0; c < nc; ++c) {
    const int r = repr[c];
    sig.push_back(size[c]);
    Key k0 = initial_key(mol, r);
    sig.insert(sig.end(), k0.begin(), k0.end());
    std::vector<std::pair<int, int>> nb;
    for (const AdjEntry& e : mol.neighbors(r)) {
      nb.emplace_back(static_cast<int>(mol.bond(e.bond).order), refined[e.neighbor]);
    }
    std::sort(nb.begin(), nb.end());
    for (const auto& [o, cc] : nb) {
      sig.push_back(o);
      sig.push_back(cc);
    }
    sig.push_back(-1);  // class separator
  }
  return sig;
}

}  // namespace

std::vector<int> canonical_ranks(const MolGraph& mol) {
  const int n = mol.atom_count();
  if (n == 1) return {0};
  std::vector<int> cls = refine(mol, initial_classes(mol));
  while (class_count(cls) < n) {
    int tied = -1;
    std::vector<int> size(class_count(cls), 0);
    for (int c : cls) ++size[c];
    for (int c = 0; c < class_count(cls); ++c) {
      if (size[c] > 1) {
        tied = c;
        break;
      }
    }
    int best_atom = -1;
    Key best_sig;
    for (int i = 0; i < n; ++i) {
      if (cls[i] != tied) continue;
      Key sig = individualized_signature(mol, cls, i);
      if (best_atom < 0 || sig < best_sig) {
        best_atom = i;
        best_sig = std::move(sig);
      }
    }
    cls = refine(mol, individualize(cls, best_atom));
  }
  return cls;
}

}  // namespace hetenc::chem
