#pragma once

#include "hetenc/data/corpus.hpp"
#include "hetenc/encdec/tokenizer.hpp"

namespace hetenc::data {

// Model charset for a corpus. Branch and ring tokens are always included:
// enumerated forms of an otherwise linear canonical string can introduce
// parentheses or extra ring digits the canonical corpus never shows.
encdec::Tokenizer build_model_tokenizer(const Corpus& corpus);

// Longest framed token count over the corpus canonicals.
std::size_t max_token_count(const encdec::Tokenizer& tk, const Corpus& corpus);

// max_len with headroom for enumerated forms (they can run a few tokens
// longer than the canonical string).
std::size_t auto_max_len(const encdec::Tokenizer& tk, const Corpus& train, const Corpus& test);

// make_pairs with a length guard: an enumerated draw that would not fit in
// max_len falls back to the record's canonical form, so training never
// aborts mid-epoch.
std::vector<std::pair<std::string, std::string>> make_pairs_bounded(
    const Corpus& corpus, const DataMode& mode, std::mt19937_64& rng,
    const encdec::Tokenizer& tk, std::size_t max_len);

}  // namespace hetenc::data
