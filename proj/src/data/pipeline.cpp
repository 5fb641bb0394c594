#include "hetenc/data/pipeline.hpp"

namespace hetenc::data {

encdec::Tokenizer build_model_tokenizer(const Corpus& corpus) {
  std::vector<std::string> strings;
  strings.reserve(corpus.size() + 1);
  for (const auto& r : corpus.records) strings.push_back(r.canonical);
  strings.push_back("()123456789");
  return encdec::Tokenizer::build(strings);
}

std::size_t max_token_count(const encdec::Tokenizer& tk, const Corpus& corpus) {
  std::size_t mx = 0;
  for (const auto& r : corpus.records) mx = std::max(mx, tk.encode(r.canonical).size());
  return mx;
}

std::size_t auto_max_len(const encdec::Tokenizer& tk, const Corpus& train, const Corpus& test) {
  std::size_t mx = max_token_count(tk, train);
  if (!test.records.empty()) mx = std::max(mx, max_token_count(tk, test));
  return mx + 2 + std::max<std::size_t>(4, mx / 4);
}

std::vector<std::pair<std::string, std::string>> make_pairs_bounded(
    const Corpus& corpus, const DataMode& mode, std::mt19937_64& rng,
    const encdec::Tokenizer& tk, std::size_t max_len) {
  auto pairs = make_pairs(corpus, mode, rng);
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (tk.encode(pairs[i].first).size() + 2 > max_len) {
      pairs[i].first = corpus.records[i].canonical;
    }
    if (tk.encode(pairs[i].second).size() + 2 > max_len) {
      pairs[i].second = corpus.records[i].canonical;
    }
  }
  return pairs;
}

}  // namespace hetenc::data
