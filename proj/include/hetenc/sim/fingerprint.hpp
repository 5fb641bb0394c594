#pragma once

#include <cstdint>
#include <vector>

#include "hetenc/chem/mol_graph.hpp"

namespace hetenc::sim {

// Hashed circular-substructure bit set. The hash is a fixed 64-bit FNV-1a
// with a pinned seed, so bit patterns are identical across platforms and runs
// (bit-compatibility with external toolkits is not a goal).
class Fingerprint {
 public:
  Fingerprint() = default;
  explicit Fingerprint(std::size_t nbits) : bits_(nbits, false) {}

  std::size_t size() const { return bits_.size(); }
  bool test(std::size_t i) const { return bits_[i]; }
  void set(std::size_t i) { bits_[i] = true; }
  int popcount() const;

  bool operator==(const Fingerprint&) const = default;

 private:
  std::vector<bool> bits_;
};

// Circular environment fingerprint: for each atom and each radius r in
// 0..=radius an environment identifier is hashed and mapped to a bit by
// modulo. radius >= 0, nbits a power of two.
Fingerprint morgan_fingerprint(const chem::MolGraph& mol, int radius = 2,
                               std::size_t nbits = 2048);

// |a AND b| / |a OR b|; 1.0 when both are empty. Throws std::invalid_argument
// on length mismatch.
double tanimoto(const Fingerprint& a, const Fingerprint& b);

}  // namespace hetenc::sim
