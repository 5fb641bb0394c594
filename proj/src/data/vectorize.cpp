#include "hetenc/data/vectorize.hpp"

#include "hetenc/encdec/onehot.hpp"

namespace hetenc::data {

OneHotBatch vectorize(std::span<const std::string> smiles, const encdec::Tokenizer& tk,
                      std::size_t max_len) {
  OneHotBatch batch;
  batch.charset = tk.tokens();
  std::vector<std::vector<int>> ids;
  ids.reserve(smiles.size());
  for (const std::string& s : smiles) {
    ids.push_back(tk.encode(s));
    batch.lengths.push_back(ids.back().size() + 2);
  }
  batch.tensor = encdec::one_hot_full<float>(ids, max_len, tk.size());
  return batch;
}

std::vector<std::string> devectorize(const OneHotBatch& batch, const encdec::Tokenizer& tk) {
  const std::size_t b = batch.tensor.dim(0), t = batch.tensor.dim(1), v = batch.tensor.dim(2);
  std::vector<std::string> out;
  out.reserve(b);
  for (std::size_t r = 0; r < b; ++r) {
    std::vector<int> ids;
    for (std::size_t p = 0; p < t; ++p) {
      const float* row = batch.tensor.data() + (r * t + p) * v;
      int best = 0;
      for (std::size_t j = 1; j < v; ++j) {
        if (row[j] > row[best]) best = static_cast<int>(j);
      }
      ids.push_back(best);
    }
    out.push_back(tk.decode(ids));
  }
  return out;
}

}  // namespace hetenc::data
