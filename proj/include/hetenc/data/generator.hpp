#pragma once

#include <string>
#include <vector>

#include "hetenc/chem/elements.hpp"

namespace hetenc::data {

// Exhaustively enumerates the distinct connected molecules with at most
// max_atoms heavy atoms over the given element set (single/double/triple
// bonds, valence respected, no aromatics — rings come out kekulized).
// Returns sorted canonical SMILES. Used as the offline desk-scale corpus.
std::vector<std::string> generate_molecules(
    int max_atoms,
    const std::vector<chem::Element>& elements = {chem::Element::C, chem::Element::N,
                                                  chem::Element::O, chem::Element::F});

}  // namespace hetenc::data
