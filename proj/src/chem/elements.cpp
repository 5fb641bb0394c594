#include "hetenc/chem/elements.hpp"

#include <array>

namespace hetenc::chem {

namespace {

struct ElementInfo {
  std::string_view symbol;
  int atomic_number;
  std::array<int, 3> valences;  // ascending, 0-terminated
  bool aromatic;
};

constexpr std::array<ElementInfo, kElementCount> kTable = {{
    {"B", 5, {3, 0, 0}, true},
    {"C", 6, {4, 0, 0}, true},
    {"N", 7, {3, 0, 0}, true},
    {"O", 8, {2, 0, 0}, true},
    {"F", 9, {1, 0, 0}, false},
    {"S", 16, {2, 4, 6}, true},
    {"Cl", 17, {1, 0, 0}, false},
    {"Br", 35, {1, 0, 0}, false},
    {"I", 53, {1, 0, 0}, false},
}};

}  // namespace

int atomic_number(Element e) { return kTable[static_cast<int>(e)].atomic_number; }

std::string_view symbol(Element e) { return kTable[static_cast<int>(e)].symbol; }

std::span<const int> valences(Element e) {
  const auto& v = kTable[static_cast<int>(e)].valences;
  std::size_t n = 1;
  while (n < v.size() && v[n] != 0) ++n;
  return {v.data(), n};
}

bool aromatic_capable(Element e) { return kTable[static_cast<int>(e)].aromatic; }

std::optional<Element> element_from_symbol(std::string_view s) {
  for (int i = 0; i < kElementCount; ++i) {
    if (kTable[i].symbol == s) return static_cast<Element>(i);
  }
  return std::nullopt;
}

}  // namespace hetenc::chem
