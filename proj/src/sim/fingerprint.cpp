#include "hetenc/sim/fingerprint.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace hetenc::sim {

namespace {

constexpr std::uint64_t kSeed = 0x9e3779b97f4a7c15ull;

struct Fnv1a {
  std::uint64_t h = 0xcbf29ce484222325ull ^ kSeed;
  void mix(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      h ^= (v >> (8 * i)) & 0xff;
      h *= 0x100000001b3ull;
    }
  }
};

std::uint64_t hash_ints(std::initializer_list<std::uint64_t> vals) {
  Fnv1a f;
  for (auto v : vals) f.mix(v);
  return f.h;
}

}  // namespace

int Fingerprint::popcount() const {
  return static_cast<int>(std::count(bits_.begin(), bits_.end(), true));
}

Fingerprint morgan_fingerprint(const chem::MolGraph& mol, int radius, std::size_t nbits) {
  if (radius < 0 || nbits == 0 || !std::has_single_bit(nbits)) {
    throw std::invalid_argument("morgan_fingerprint: radius >= 0, nbits power of two");
  }
  const int n = mol.atom_count();
  Fingerprint fp(nbits);

  // r = 0: atom invariant tuple.
  std::vector<std::uint64_t> id(n);
  for (int i = 0; i < n; ++i) {
    const chem::Atom& a = mol.atom(i);
    id[i] = hash_ints({0ull, static_cast<std::uint64_t>(atomic_number(a.element)),
                       static_cast<std::uint64_t>(mol.degree(i)),
                       static_cast<std::uint64_t>(a.hydrogens), a.aromatic ? 1ull : 0ull});
    fp.set(id[i] % nbits);
  }

  // r > 0: hash (r, own identifier at r-1, sorted (bond order, neighbor
  // identifier at r-1)). Atoms without neighbors contribute nothing here.
  for (int r = 1; r <= radius; ++r) {
    std::vector<std::uint64_t> next(n);
    for (int i = 0; i < n; ++i) {
      auto nbrs = mol.neighbors(i);
      if (nbrs.empty()) {
        next[i] = id[i];
        continue;
      }
      std::vector<std::pair<std::uint64_t, std::uint64_t>> env;
      for (const chem::AdjEntry& e : nbrs) {
        env.emplace_back(static_cast<std::uint64_t>(mol.bond(e.bond).order), id[e.neighbor]);
      }
      std::sort(env.begin(), env.end());
      Fnv1a f;
      f.mix(static_cast<std::uint64_t>(r));
      f.mix(id[i]);
      for (const auto& [o, v] : env) {
        f.mix(o);
        f.mix(v);
      }
      next[i] = f.h;
      fp.set(next[i] % nbits);
    }
    id = std::move(next);
  }
  return fp;
}

double tanimoto(const Fingerprint& a, const Fingerprint& b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("tanimoto: fingerprint length mismatch");
  }
  int inter = 0, uni = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const bool x = a.test(i), y = b.test(i);
    inter += (x && y) ? 1 : 0;
    uni += (x || y) ? 1 : 0;
  }
  if (uni == 0) return 1.0;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

}  // namespace hetenc::sim
