#include <array>
#include <cctype>
#include <string>
#include <vector>

#include "hetenc/chem/smiles.hpp"

namespace hetenc::chem {

namespace {

struct RingSlot {
  int atom = -1;
  std::optional<BondOrder> order;  // explicit symbol before the digit, if any
};

BondOrder order_from_symbol(char c) {
  switch (c) {
    case '-': return BondOrder::Single;
    case '=': return BondOrder::Double;
    case '#': return BondOrder::Triple;
  }
  throw ChemError(ChemErrorKind::MalformedInput, std::string("not a bond symbol: ") + c);
}

class Parser {
 public:
  explicit Parser(const std::string& text) : s_(text) {}

  MolGraph run() {
    if (s_.empty()) throw ChemError(ChemErrorKind::MalformedInput, "empty SMILES");
    while (pos_ < s_.size()) step();
    if (!branch_stack_.empty()) {
      throw ChemError(ChemErrorKind::UnbalancedParenthesis, "unclosed '(' at end of input");
    }
    if (pending_) {
      throw ChemError(ChemErrorKind::MalformedInput, "dangling bond symbol at end of input");
    }
    for (const RingSlot& r : rings_) {
      if (r.atom != -1) throw ChemError(ChemErrorKind::UnclosedRing, "unclosed ring digit");
    }
    if (atoms_.empty()) throw ChemError(ChemErrorKind::MalformedInput, "no atoms");
    return MolGraph::build(std::move(atoms_), std::move(bonds_), unspecified_);
  }

 private:
  void step() {
    const char c = s_[pos_];
    if (static_cast<unsigned char>(c) >= 0x80) {
      throw ChemError(ChemErrorKind::MalformedInput, "non-ASCII byte in SMILES");
    }
    switch (c) {
      case '(':
        if (prev_ < 0 || pending_) {
          throw ChemError(ChemErrorKind::UnbalancedParenthesis, "branch without preceding atom");
        }
        branch_stack_.push_back(prev_);
        ++pos_;
        return;
      case ')':
        if (branch_stack_.empty()) {
          throw ChemError(ChemErrorKind::UnbalancedParenthesis, "')' without matching '('");
        }
        if (pending_) throw ChemError(ChemErrorKind::MalformedInput, "bond symbol before ')'");
        prev_ = branch_stack_.back();
        branch_stack_.pop_back();
        ++pos_;
        return;
      case '-':
      case '=':
      case '#':
        if (prev_ < 0) throw ChemError(ChemErrorKind::MalformedInput, "leading bond symbol");
        if (pending_) throw ChemError(ChemErrorKind::MalformedInput, "doubled bond symbol");
        pending_ = order_from_symbol(c);
        ++pos_;
        return;
      case '[':
        add_atom(parse_bracket());
        return;
      default:
        break;
    }
    if (c >= '1' && c <= '9') {
      ring_closure(c - '1');
      ++pos_;
      return;
    }
    if (c == '%') {
      throw ChemError(ChemErrorKind::RingClosureOverflow, "%nn ring closures unsupported");
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      add_atom(parse_organic_atom());
      return;
    }
    throw ChemError(ChemErrorKind::MalformedInput,
                    "unexpected character '" + std::string(1, c) + "'");
  }

  Atom parse_organic_atom() {
    // Two-letter symbols take precedence (Cl, Br).
    if (pos_ + 1 < s_.size()) {
      auto two = element_from_symbol(s_.substr(pos_, 2));
      if (two) {
        pos_ += 2;
        return Atom{*two, false, std::nullopt, 0};
      }
    }
    const char c = s_[pos_];
    if (std::islower(static_cast<unsigned char>(c))) {
      char upper = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
      auto e = element_from_symbol(std::string(1, upper));
      if (!e || !aromatic_capable(*e)) {
        throw ChemError(ChemErrorKind::UnknownElement,
                        "unknown aromatic atom '" + std::string(1, c) + "'");
      }
      ++pos_;
      return Atom{*e, true, std::nullopt, 0};
    }
    auto e = element_from_symbol(std::string(1, c));
    if (!e) {
      throw ChemError(ChemErrorKind::UnknownElement,
                      "unknown element '" + std::string(1, c) + "'");
    }
    ++pos_;
    return Atom{*e, false, std::nullopt, 0};
  }

  Atom parse_bracket() {
    ++pos_;  // consume '['
    if (pos_ >= s_.size()) throw ChemError(ChemErrorKind::MalformedInput, "unterminated bracket");
    Atom atom;
    bool have_element = false;
    // Element: two-letter first, then one letter (case decides aromaticity).
    if (pos_ + 1 < s_.size()) {
      auto two = element_from_symbol(s_.substr(pos_, 2));
      if (two) {
        atom.element = *two;
        pos_ += 2;
        have_element = true;
      }
    }
    if (!have_element) {
      const char c = s_[pos_];
      if (!std::isalpha(static_cast<unsigned char>(c))) {
        throw ChemError(ChemErrorKind::MalformedInput,
                        "bad bracket atom (charge/isotope/stereo unsupported)");
      }
      const bool lower = std::islower(static_cast<unsigned char>(c)) != 0;
      char upper = lower ? static_cast<char>(std::toupper(static_cast<unsigned char>(c))) : c;
      auto e = element_from_symbol(std::string(1, upper));
      if (!e) {
        throw ChemError(ChemErrorKind::UnknownElement,
                        "unknown bracket element '" + std::string(1, c) + "'");
      }
      if (lower && !aromatic_capable(*e)) {
        throw ChemError(ChemErrorKind::UnknownElement,
                        "element cannot be aromatic: '" + std::string(1, c) + "'");
      }
      atom.element = *e;
      atom.aromatic = lower;
      ++pos_;
    }
    int eh = 0;
    if (pos_ < s_.size() && s_[pos_] == 'H') {
      ++pos_;
      eh = 1;
      int digits = 0;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
        if (digits == 0) eh = 0;
        eh = eh * 10 + (s_[pos_] - '0');
        ++digits;
        ++pos_;
      }
    }
    atom.explicit_h = eh;
    if (pos_ >= s_.size() || s_[pos_] != ']') {
      throw ChemError(ChemErrorKind::MalformedInput,
                      "bad bracket atom (charge/isotope/stereo unsupported)");
    }
    ++pos_;
    return atom;
  }

  void add_atom(Atom atom) {
    const int idx = static_cast<int>(atoms_.size());
    atoms_.push_back(atom);
    if (prev_ >= 0) {
      add_bond(prev_, idx, pending_);
    } else if (pending_) {
      throw ChemError(ChemErrorKind::MalformedInput, "bond symbol before first atom");
    }
    pending_.reset();
    prev_ = idx;
  }

  void ring_closure(int digit) {
    if (prev_ < 0) throw ChemError(ChemErrorKind::MalformedInput, "ring digit before any atom");
    RingSlot& slot = rings_[digit];
    if (slot.atom < 0) {
      slot.atom = prev_;
      slot.order = pending_;
      pending_.reset();
      return;
    }
    if (slot.atom == prev_) {
      throw ChemError(ChemErrorKind::RingBondConflict, "ring closure to the same atom");
    }
    std::optional<BondOrder> order;
    if (slot.order && pending_ && *slot.order != *pending_) {
      throw ChemError(ChemErrorKind::RingBondConflict, "conflicting ring bond orders");
    }
    order = slot.order ? slot.order : pending_;
    add_bond(slot.atom, prev_, order);
    slot = RingSlot{};
    pending_.reset();
  }

  void add_bond(int a, int b, std::optional<BondOrder> order) {
    for (const Bond& bond : bonds_) {
      if ((bond.a == a && bond.b == b) || (bond.a == b && bond.b == a)) {
        throw ChemError(ChemErrorKind::RingBondConflict, "duplicate bond between atoms");
      }
    }
    bonds_.push_back({a, b, order.value_or(BondOrder::Single)});
    unspecified_.push_back(!order.has_value());
  }

  const std::string& s_;
  std::size_t pos_ = 0;
  int prev_ = -1;
  std::optional<BondOrder> pending_;
  std::vector<int> branch_stack_;
  std::array<RingSlot, 9> rings_;
  std::vector<Atom> atoms_;
  std::vector<Bond> bonds_;
  std::vector<bool> unspecified_;
};

}  // namespace

MolGraph parse_smiles(const std::string& text) { return Parser(text).run(); }

std::optional<MolGraph> try_parse_smiles(const std::string& text) {
  try {
    return parse_smiles(text);
  } catch (const ChemError&) {
    return std::nullopt;
  }
}

}  // namespace hetenc::chem
