#include "hetenc/data/generator.hpp"

#include <algorithm>
#include <deque>
#include <set>

#include "hetenc/chem/smiles.hpp"

namespace hetenc::data {

namespace {

struct State {
  std::vector<chem::Atom> atoms;
  std::vector<chem::Bond> bonds;
  std::vector<int> free;  // remaining valence per atom
};

chem::MolGraph to_graph(const State& s) {
  return chem::MolGraph::build(s.atoms, s.bonds, std::vector<bool>(s.bonds.size(), false));
}

bool adjacent(const State& s, int a, int b) {
  for (const chem::Bond& bond : s.bonds) {
    if ((bond.a == a && bond.b == b) || (bond.a == b && bond.b == a)) return true;
  }
  return false;
}

}  // namespace

std::vector<std::string> generate_molecules(int max_atoms,
                                            const std::vector<chem::Element>& elements) {
  std::set<std::string> seen;
  std::deque<State> queue;

  auto offer = [&](State next) {
    const std::string canon = chem::write_canonical(to_graph(next));
    if (seen.insert(canon).second) queue.push_back(std::move(next));
  };

  for (chem::Element e : elements) {
    State s;
    s.atoms.push_back({e, false, std::nullopt, 0});
    s.free.push_back(chem::valences(e)[0]);
    offer(std::move(s));
  }

  while (!queue.empty()) {
    State cur = std::move(queue.front());
    queue.pop_front();
    const int n = static_cast<int>(cur.atoms.size());

    // Grow by one atom on any open valence.
    if (n < max_atoms) {
      for (int a = 0; a < n; ++a) {
        if (cur.free[a] < 1) continue;
        for (chem::Element e : elements) {
          const int cap = chem::valences(e)[0];
          const int max_order = std::min({cur.free[a], cap, 3});
          for (int order = 1; order <= max_order; ++order) {
            State next = cur;
            next.atoms.push_back({e, false, std::nullopt, 0});
            next.free.push_back(cap - order);
            next.free[a] -= order;
            next.bonds.push_back({a, n, static_cast<chem::BondOrder>(order)});
            offer(std::move(next));
          }
        }
      }
    }

    // Close rings between non-adjacent open atoms.
    for (int a = 0; a < n; ++a) {
      for (int b = a + 1; b < n; ++b) {
        if (cur.free[a] < 1 || cur.free[b] < 1 || adjacent(cur, a, b)) continue;
        const int max_order = std::min({cur.free[a], cur.free[b], 3});
        for (int order = 1; order <= max_order; ++order) {
          State next = cur;
          next.free[a] -= order;
          next.free[b] -= order;
          next.bonds.push_back({a, b, static_cast<chem::BondOrder>(order)});
          offer(std::move(next));
        }
      }
    }
  }

  std::vector<std::string> out(seen.begin(), seen.end());
  return out;
}

}  // namespace hetenc::data
