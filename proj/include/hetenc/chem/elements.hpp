#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>

namespace hetenc::chem {

// Supported element set. Everything else is rejected at parse time.
enum class Element : std::uint8_t { B, C, N, O, F, S, Cl, Br, I };

inline constexpr int kElementCount = 9;

int atomic_number(Element e);
std::string_view symbol(Element e);

// Valence alternatives in ascending order (S has 2, 4, 6; all others one value).
std::span<const int> valences(Element e);

// Elements that may carry the aromatic flag (lowercase in SMILES).
bool aromatic_capable(Element e);

std::optional<Element> element_from_symbol(std::string_view s);

}  // namespace hetenc::chem
