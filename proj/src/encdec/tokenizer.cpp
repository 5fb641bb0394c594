#include "hetenc/encdec/tokenizer.hpp"

#include <algorithm>
#include <set>

namespace hetenc::encdec {

std::vector<std::string> tokenize_smiles(const std::string& smiles) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < smiles.size();) {
    if (i + 1 < smiles.size() &&
        (smiles.compare(i, 2, "Cl") == 0 || smiles.compare(i, 2, "Br") == 0)) {
      out.push_back(smiles.substr(i, 2));
      i += 2;
    } else {
      out.push_back(smiles.substr(i, 1));
      i += 1;
    }
  }
  return out;
}

Tokenizer Tokenizer::build(std::span<const std::string> corpus) {
  std::set<std::string> seen;
  for (const std::string& s : corpus) {
    for (std::string& t : tokenize_smiles(s)) seen.insert(std::move(t));
  }
  std::vector<std::string> tokens{kPadText, kStartText, kEndText};
  tokens.insert(tokens.end(), seen.begin(), seen.end());
  return from_tokens(std::move(tokens));
}

Tokenizer Tokenizer::from_tokens(std::vector<std::string> tokens) {
  if (tokens.size() < 4 || tokens[kPad] != kPadText || tokens[kStart] != kStartText ||
      tokens[kEnd] != kEndText) {
    throw EncdecError(EncdecErrorKind::InvalidConfig,
                      "charset must start with the pad/start/end tokens");
  }
  Tokenizer tk;
  tk.tokens_ = std::move(tokens);
  for (std::size_t i = 0; i < tk.tokens_.size(); ++i) {
    tk.index_[tk.tokens_[i]] = static_cast<int>(i);
  }
  return tk;
}

std::vector<int> Tokenizer::encode(const std::string& smiles) const {
  std::vector<int> ids;
  for (const std::string& t : tokenize_smiles(smiles)) {
    auto it = index_.find(t);
    if (it == index_.end()) {
      throw EncdecError(EncdecErrorKind::TokenNotInCharset,
                        "token '" + t + "' not in charset");
    }
    ids.push_back(it->second);
  }
  return ids;
}

std::string Tokenizer::decode(std::span<const int> ids) const {
  std::string out;
  for (int id : ids) {
    if (id == kPad || id == kStart || id == kEnd) continue;
    out += tokens_[id];
  }
  return out;
}

}  // namespace hetenc::encdec
