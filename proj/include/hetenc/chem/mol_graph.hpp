#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "hetenc/chem/elements.hpp"

namespace hetenc::chem {

enum class BondOrder : std::uint8_t { Single = 1, Double = 2, Triple = 3, Aromatic = 4 };

enum class ChemErrorKind {
  UnbalancedParenthesis,
  UnclosedRing,
  UnknownElement,
  ValenceViolation,
  AromaticPerceptionError,
  RingBondConflict,
  RingClosureOverflow,
  MalformedInput,
};

std::string_view to_string(ChemErrorKind k);

class ChemError : public std::runtime_error {
 public:
  ChemError(ChemErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}
  ChemErrorKind kind() const { return kind_; }

 private:
  ChemErrorKind kind_;
};

struct Atom {
  Element element = Element::C;
  bool aromatic = false;
  std::optional<int> explicit_h;  // bracket H count, if the atom came from a bracket
  int hydrogens = 0;              // total H (explicit + implicit) after valence resolution
};

struct Bond {
  int a = -1;
  int b = -1;
  BondOrder order = BondOrder::Single;

  int other(int atom) const { return atom == a ? b : a; }
};

struct AdjEntry {
  int neighbor;
  int bond;
};

// Immutable molecular graph. Construction resolves hydrogen counts against the
// per-element valence model and validates the aromatic flags; all accessors are
// const and safe for concurrent use.
class MolGraph {
 public:
  // Validating constructor: resolves hydrogens, rejects valence violations and
  // aromatic atoms outside rings. `unspecified` marks bonds written without an
  // explicit order symbol; those become aromatic when both endpoints are
  // aromatic and the bond lies in a ring, single otherwise.
  static MolGraph build(std::vector<Atom> atoms, std::vector<Bond> bonds,
                        const std::vector<bool>& unspecified);

  // Comparison-only graphs (scaffolds) skip valence validation; hydrogens are
  // filled best-effort and may be zero on over-coordinated atoms.
  static MolGraph unchecked(std::vector<Atom> atoms, std::vector<Bond> bonds);

  int atom_count() const { return static_cast<int>(atoms_.size()); }
  int bond_count() const { return static_cast<int>(bonds_.size()); }
  const Atom& atom(int i) const { return atoms_[i]; }
  const Bond& bond(int i) const { return bonds_[i]; }
  std::span<const Atom> atoms() const { return atoms_; }
  std::span<const Bond> bonds() const { return bonds_; }
  std::span<const AdjEntry> neighbors(int atom) const {
    return {adjacency_.data() + adj_start_[atom],
            static_cast<std::size_t>(adj_start_[atom + 1] - adj_start_[atom])};
  }
  int degree(int atom) const { return adj_start_[atom + 1] - adj_start_[atom]; }

  // Index of the bond between a and b, or -1.
  int bond_between(int a, int b) const;

  // True when the bond participates in a cycle (is not a bridge).
  bool bond_in_ring(int bond) const { return in_ring_[bond]; }
  bool atom_in_ring(int atom) const;

 private:
  MolGraph() = default;
  void build_adjacency();
  void mark_ring_bonds();
  void resolve_hydrogens(bool validate);

  std::vector<Atom> atoms_;
  std::vector<Bond> bonds_;
  std::vector<AdjEntry> adjacency_;
  std::vector<int> adj_start_;
  std::vector<bool> in_ring_;
};

}  // namespace hetenc::chem
