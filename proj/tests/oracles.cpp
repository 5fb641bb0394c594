#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

namespace oracles {

using hetenc::chem::AdjEntry;
using hetenc::chem::Atom;
using hetenc::chem::BondOrder;
using hetenc::chem::MolGraph;

namespace {

bool atoms_compatible(const Atom& x, const Atom& y) {
  return x.element == y.element && x.aromatic == y.aromatic && x.hydrogens == y.hydrogens;
}

bool extend_mapping(const MolGraph& a, const MolGraph& b, std::vector<int>& map,
                    std::vector<bool>& used, int next) {
  const int n = a.atom_count();
  if (next == n) return true;
  for (int cand = 0; cand < n; ++cand) {
    if (used[cand] || !atoms_compatible(a.atom(next), b.atom(cand))) continue;
    if (a.degree(next) != b.degree(cand)) continue;
    bool ok = true;
    for (const AdjEntry& e : a.neighbors(next)) {
      if (e.neighbor >= next) continue;  // only check already-mapped endpoints
      const int mapped = map[e.neighbor];
      const int bond = b.bond_between(cand, mapped);
      if (bond < 0 || b.bond(bond).order != a.bond(e.bond).order) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    // Also reject extra bonds between cand and mapped atoms that a lacks.
    for (const AdjEntry& e : b.neighbors(cand)) {
      int pre = -1;
      for (int i = 0; i < next; ++i) {
        if (map[i] == e.neighbor) pre = i;
      }
      if (pre >= 0 && a.bond_between(next, pre) < 0) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    map[next] = cand;
    used[cand] = true;
    if (extend_mapping(a, b, map, used, next + 1)) return true;
    used[cand] = false;
  }
  return false;
}

}  // namespace

bool brute_force_isomorphic(const MolGraph& a, const MolGraph& b) {
  if (a.atom_count() != b.atom_count() || a.bond_count() != b.bond_count()) return false;
  std::vector<int> map(a.atom_count(), -1);
  std::vector<bool> used(a.atom_count(), false);
  return extend_mapping(a, b, map, used, 0);
}

namespace {

constexpr std::int64_t kScale = 10000;

struct AlignCtx {
  const std::string* s1;
  const std::string* s2;
  std::int64_t match, mismatch, open, extend;
  std::int64_t best;
};

enum class LastMove { none, sub, gap1, gap2 };

// Enumerates every alignment, accumulating the column scores left to right.
void enumerate(AlignCtx& ctx, std::size_t i, std::size_t j, LastMove last, std::int64_t acc) {
  const std::size_t n = ctx.s1->size(), m = ctx.s2->size();
  if (i == n && j == m) {
    ctx.best = std::max(ctx.best, acc);
    return;
  }
  if (i < n && j < m) {
    const std::int64_t sub =
        (*ctx.s1)[i] == (*ctx.s2)[j] ? ctx.match : ctx.mismatch;
    enumerate(ctx, i + 1, j + 1, LastMove::sub, acc + sub);
  }
  if (i < n) {  // char of s1 against a gap in s2
    const std::int64_t cost = last == LastMove::gap2 ? ctx.extend : ctx.open;
    enumerate(ctx, i + 1, j, LastMove::gap2, acc + cost);
  }
  if (j < m) {  // gap in s1
    const std::int64_t cost = last == LastMove::gap1 ? ctx.extend : ctx.open;
    enumerate(ctx, i, j + 1, LastMove::gap1, acc + cost);
  }
}

}  // namespace

double align_enumerate(const std::string& s1, const std::string& s2,
                       const hetenc::sim::AlignmentParams& params) {
  AlignCtx ctx;
  ctx.s1 = &s1;
  ctx.s2 = &s2;
  auto q = [](double v) { return static_cast<std::int64_t>(std::nearbyint(v * kScale)); };
  ctx.match = q(params.match);
  ctx.mismatch = q(params.mismatch);
  ctx.open = q(params.gap_open);
  ctx.extend = q(params.gap_extend);
  ctx.best = std::numeric_limits<std::int64_t>::min();
  enumerate(ctx, 0, 0, LastMove::none, 0);
  return static_cast<double>(ctx.best) / static_cast<double>(kScale);
}

namespace {

int smallest_valence_fit(hetenc::chem::Element e, int needed) {
  for (int v : hetenc::chem::valences(e)) {
    if (v >= needed) return v;
  }
  return -1;
}

}  // namespace

int kekulized_hydrogen_count(const MolGraph& mol) {
  std::vector<int> aromatic_bonds;
  for (int b = 0; b < mol.bond_count(); ++b) {
    if (mol.bond(b).order == BondOrder::Aromatic) aromatic_bonds.push_back(b);
  }
  if (aromatic_bonds.size() > 20) return -1;

  int best_doubles = -1;
  int best_h = -1;
  for (std::uint32_t mask = 0; mask < (1u << aromatic_bonds.size()); ++mask) {
    std::vector<int> order_sum(mol.atom_count(), 0);
    for (int b = 0; b < mol.bond_count(); ++b) {
      int contrib = 0;
      switch (mol.bond(b).order) {
        case BondOrder::Single: contrib = 1; break;
        case BondOrder::Double: contrib = 2; break;
        case BondOrder::Triple: contrib = 3; break;
        case BondOrder::Aromatic: contrib = 1; break;  // doubles added below
      }
      order_sum[mol.bond(b).a] += contrib;
      order_sum[mol.bond(b).b] += contrib;
    }
    std::vector<int> doubles_at(mol.atom_count(), 0);
    int n_doubles = 0;
    for (std::size_t k = 0; k < aromatic_bonds.size(); ++k) {
      if (mask & (1u << k)) {
        const auto& bond = mol.bond(aromatic_bonds[k]);
        ++order_sum[bond.a];
        ++order_sum[bond.b];
        ++doubles_at[bond.a];
        ++doubles_at[bond.b];
        ++n_doubles;
      }
    }
    bool feasible = true;
    int h_total = 0;
    for (int i = 0; i < mol.atom_count() && feasible; ++i) {
      const Atom& atom = mol.atom(i);
      if (atom.aromatic && doubles_at[i] > 1) feasible = false;
      const int eh = atom.explicit_h.value_or(0);
      const int v = smallest_valence_fit(atom.element, order_sum[i] + eh);
      if (v < 0) {
        feasible = false;
      } else {
        h_total += v - order_sum[i];
      }
    }
    if (!feasible) continue;
    // Prefer the assignment with the most double bonds; among those, the one
    // that adds the fewest hydrogens (rules out sulfur expanding its valence
    // where a carbon could carry the double bond instead).
    if (n_doubles > best_doubles || (n_doubles == best_doubles && h_total < best_h)) {
      best_doubles = n_doubles;
      best_h = h_total;
    }
  }
  return best_h;
}

GradCheckResult finite_difference_check(const std::vector<double*>& params,
                                        const std::vector<std::size_t>& sizes,
                                        const std::vector<const double*>& analytic,
                                        const std::function<double()>& loss, double h) {
  GradCheckResult result;
  for (std::size_t g = 0; g < params.size(); ++g) {
    for (std::size_t i = 0; i < sizes[g]; ++i) {
      double& w = params[g][i];
      const double saved = w;
      w = saved + h;
      const double up = loss();
      w = saved - h;
      const double down = loss();
      w = saved;
      const double fd = (up - down) / (2.0 * h);
      const double an = analytic[g][i];
      const double denom = std::max({1.0, std::abs(fd), std::abs(an)});
      result.max_rel_error = std::max(result.max_rel_error, std::abs(fd - an) / denom);
      ++result.checked;
    }
  }
  return result;
}

}  // namespace oracles
