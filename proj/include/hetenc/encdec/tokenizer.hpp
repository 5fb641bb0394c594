#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace hetenc::encdec {

enum class EncdecErrorKind {
  TokenNotInCharset,
  SequenceTooLong,
  InvalidConfig,
};

class EncdecError : public std::runtime_error {
 public:
  EncdecError(EncdecErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  EncdecErrorKind kind() const { return kind_; }

 private:
  EncdecErrorKind kind_;
};

// Splits a SMILES string into tokens; two-character element symbols (Cl, Br)
// stay whole, everything else is one character.
std::vector<std::string> tokenize_smiles(const std::string& smiles);

// Token table with pad/start/end reserved at fixed indices. The token list is
// the model charset and is persisted in checkpoints.
class Tokenizer {
 public:
  static constexpr int kPad = 0;
  static constexpr int kStart = 1;
  static constexpr int kEnd = 2;
  static constexpr const char* kPadText = "_";
  static constexpr const char* kStartText = "^";
  static constexpr const char* kEndText = "$";

  // Charset = specials + sorted distinct tokens of the corpus.
  static Tokenizer build(std::span<const std::string> corpus);
  // Restore from a persisted token list (specials must be at the front).
  static Tokenizer from_tokens(std::vector<std::string> tokens);

  const std::vector<std::string>& tokens() const { return tokens_; }
  std::size_t size() const { return tokens_.size(); }
  const std::string& token_text(int id) const { return tokens_[id]; }

  // SMILES -> token ids (no specials added). Throws TokenNotInCharset.
  std::vector<int> encode(const std::string& smiles) const;
  // Token ids -> SMILES text; special tokens contribute nothing.
  std::string decode(std::span<const int> ids) const;

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, int> index_;
};

}  // namespace hetenc::encdec
