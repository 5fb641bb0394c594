#pragma once

#include <vector>

#include "hetenc/encdec/tokenizer.hpp"
#include "hetenc/nn/tensor.hpp"

namespace hetenc::encdec {

// Writes one row [start, ids..., end, pad...] of length max_len as one-hot
// positions into dst (row-major [max_len, vocab], zero-initialized).
template <typename T>
void fill_one_hot_row(T* dst, const std::vector<int>& ids, std::size_t max_len,
                      std::size_t vocab) {
  if (ids.size() + 2 > max_len) {
    throw EncdecError(EncdecErrorKind::SequenceTooLong,
                      "sequence needs " + std::to_string(ids.size() + 2) +
                          " positions, max_len is " + std::to_string(max_len));
  }
  auto put = [&](std::size_t pos, int id) { dst[pos * vocab + static_cast<std::size_t>(id)] = T(1); };
  put(0, Tokenizer::kStart);
  for (std::size_t i = 0; i < ids.size(); ++i) put(i + 1, ids[i]);
  put(ids.size() + 1, Tokenizer::kEnd);
  for (std::size_t p = ids.size() + 2; p < max_len; ++p) put(p, Tokenizer::kPad);
}

// [B, max_len, vocab] one-hot batch of framed sequences.
template <typename T>
nn::Tensor<T> one_hot_full(const std::vector<std::vector<int>>& seqs, std::size_t max_len,
                           std::size_t vocab) {
  nn::Tensor<T> x({seqs.size(), max_len, vocab});
  for (std::size_t r = 0; r < seqs.size(); ++r) {
    fill_one_hot_row(x.data() + r * max_len * vocab, seqs[r], max_len, vocab);
  }
  return x;
}

// Teacher forcing views of a target sequence: the decoder input is the framed
// sequence without its last position, the target without its first.
template <typename T>
struct TeacherBatch {
  nn::Tensor<T> x_enc;   // [B, max_len, V]
  nn::Tensor<T> x_dec;   // [B, max_len-1, V]
  nn::Tensor<T> target;  // [B, max_len-1, V]
};

template <typename T>
TeacherBatch<T> make_teacher_batch(const std::vector<std::vector<int>>& enc_seqs,
                                   const std::vector<std::vector<int>>& dec_seqs,
                                   std::size_t max_len, std::size_t vocab) {
  TeacherBatch<T> b;
  b.x_enc = one_hot_full<T>(enc_seqs, max_len, vocab);
  nn::Tensor<T> full = one_hot_full<T>(dec_seqs, max_len, vocab);
  const std::size_t n = dec_seqs.size(), t = max_len - 1;
  b.x_dec = nn::Tensor<T>({n, t, vocab});
  b.target = nn::Tensor<T>({n, t, vocab});
  for (std::size_t r = 0; r < n; ++r) {
    const T* src = full.data() + r * max_len * vocab;
    std::copy(src, src + t * vocab, b.x_dec.data() + r * t * vocab);
    std::copy(src + vocab, src + max_len * vocab, b.target.data() + r * t * vocab);
  }
  return b;
}

}  // namespace hetenc::encdec
