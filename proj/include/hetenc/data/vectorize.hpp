#pragma once

#include <span>
#include <string>
#include <vector>

#include "hetenc/encdec/tokenizer.hpp"
#include "hetenc/nn/tensor.hpp"

namespace hetenc::data {

struct OneHotBatch {
  nn::Tensorf tensor;                  // [batch, max_len, charset]
  std::vector<std::size_t> lengths;    // positions used incl. start/end
  std::vector<std::string> charset;
};

// Frames each SMILES as [start, tokens..., end, pad...] one-hot rows.
// Throws TokenNotInCharset / SequenceTooLong.
OneHotBatch vectorize(std::span<const std::string> smiles, const encdec::Tokenizer& tk,
                      std::size_t max_len);

// Inverse of vectorize (argmax per position, specials stripped).
std::vector<std::string> devectorize(const OneHotBatch& batch, const encdec::Tokenizer& tk);

}  // namespace hetenc::data
