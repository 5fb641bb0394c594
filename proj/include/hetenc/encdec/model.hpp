#pragma once

#include <cstdint>
#include <memory>
#include <type_traits>
#include <random>
#include <string>
#include <vector>

#include "hetenc/encdec/tokenizer.hpp"
#include "hetenc/nn/adam.hpp"
#include "hetenc/nn/dense.hpp"
#include "hetenc/nn/init.hpp"
#include "hetenc/nn/lstm.hpp"
#include "hetenc/nn/loss.hpp"
#include "hetenc/nn/rng.hpp"
#include "hetenc/nn/tensor.hpp"

namespace hetenc::encdec {

struct ModelConfig {
  std::vector<std::string> charset;  // specials first; see Tokenizer
  std::size_t max_len = 35;          // incl. start/end positions
  int encoder_layers = 1;
  std::size_t encoder_cells = 64;
  bool bidirectional = false;
  std::size_t bottleneck_dim = 64;
  int decoder_layers = 1;
  std::size_t decoder_cells = 64;
  std::uint64_t seed = 1;

  std::size_t charset_size() const { return charset.size(); }
  // Width of the concatenated final (C, H) encoder states.
  std::size_t encoder_state_dim() const {
    return static_cast<std::size_t>(encoder_layers) * (bidirectional ? 2 : 1) * 2 *
           encoder_cells;
  }
  std::string to_json() const;
  static ModelConfig from_json(const std::string& json);
  void validate() const;
};

// Architecture presets: "gdb-small" (1x64, bottleneck 64), "gdb-2layer"
// (2x128, bottleneck 64), "large-bidi" (2x128 bidirectional encoder,
// bottleneck 256, 2x256 decoder). Charset/max_len stay unset.
ModelConfig preset_config(const std::string& name);
// Learning rate the preset was tuned with.
double preset_initial_lr(const std::string& name);

// Encoder LSTM stack -> ReLU bottleneck -> per-layer ReLU state-init denses
// -> decoder LSTM stack (teacher forcing) -> softmax over the charset.
template <typename T>
struct SeqModelT {
  ModelConfig cfg;
  std::vector<nn::Lstm<T>> enc_fwd;
  std::vector<nn::Lstm<T>> enc_bwd;       // bidirectional only
  nn::Dense<T> bottleneck;                // relu
  std::vector<nn::Dense<T>> state_init;   // [c, h] per decoder layer, relu
  std::vector<nn::Lstm<T>> dec;
  nn::Dense<T> out;                       // softmax head

  std::size_t parameter_count() const;
  std::vector<std::pair<std::string, nn::Tensor<T>*>> named_params();
  std::vector<std::pair<std::string, const nn::Tensor<T>*>> named_params() const;
};

using SeqModel = SeqModelT<float>;

template <typename T>
SeqModelT<T> build_model(const ModelConfig& cfg);

// Mirrors the model parameters; used for gradient accumulation.
template <typename T>
struct SeqGrads {
  std::vector<nn::LstmGrads<T>> enc_fwd, enc_bwd;
  nn::Tensor<T> bottleneck_w, bottleneck_b;
  std::vector<std::pair<nn::Tensor<T>, nn::Tensor<T>>> state_init;
  std::vector<nn::LstmGrads<T>> dec;
  nn::Tensor<T> out_w, out_b;

  void add(const SeqGrads& other);
  std::vector<const nn::Tensor<T>*> flat() const;
  std::vector<nn::Tensor<T>*> flat();
};

template <typename T>
SeqGrads<T> zero_grads(const SeqModelT<T>& model);

// Forward activations kept for the backward pass.
template <typename T>
struct ForwardCache {
  std::vector<nn::LstmCache<T>> enc_fwd, enc_bwd;
  std::vector<nn::Tensor<T>> enc_layer_inputs;  // inputs of encoder layers > 0
  std::vector<nn::Tensor<T>> enc_bwd_inputs;    // time-reversed lanes
  nn::Tensor<T> state_vec;                      // [B, encoder_state_dim]
  nn::Tensor<T> z;                               // [B, bottleneck]
  std::vector<nn::Tensor<T>> init_states;        // state_init outputs
  std::vector<nn::LstmCache<T>> dec_caches;
  std::vector<nn::Tensor<T>> dec_layer_inputs;   // inputs of decoder layers > 0
  nn::Tensor<T> probs;                           // [B, Tdec, V]
};

// Teacher-forced forward: x_enc is [B, T, V], x_dec the shifted gold sequence
// [B, Tdec, V]. Returns softmax probabilities [B, Tdec, V].
template <typename T>
nn::Tensor<T> model_forward(const SeqModelT<T>& model, const nn::Tensor<T>& x_enc,
                            const nn::Tensor<T>& x_dec,
                            std::type_identity_t<ForwardCache<T>>* cache);

// Full reverse pass from the fused softmax/cross-entropy gradient.
template <typename T>
void model_backward(const SeqModelT<T>& model, const ForwardCache<T>& cache,
                    const nn::Tensor<T>& x_enc, const nn::Tensor<T>& x_dec,
                    const nn::Tensor<T>& d_logits, SeqGrads<T>& grads);

// Bottleneck activations for a batch of already one-hot sequences [B, T, V].
template <typename T>
nn::Tensor<T> encode_batch(const SeqModelT<T>& model, const nn::Tensor<T>& x_enc);

struct DecodeResult {
  std::string smiles;
  bool truncated = false;        // no end token within max_len
  bool pad_before_end = false;   // model-quality warning, not an error
  std::vector<std::vector<float>> step_probs;  // filled when requested
};

class SeqModelRunner;  // fwd decl for decode helpers

// Greedy decode from a latent vector; argmax ties go to the lowest token id.
DecodeResult decode_greedy(const SeqModel& model, std::span<const float> z);

// Temperature multinomial sampling; per-step probability rows are recorded
// when record_probs is set.
DecodeResult decode_multinomial(const SeqModel& model, std::span<const float> z,
                                double temperature, std::mt19937_64& rng,
                                bool record_probs = false);

// Single-sequence encode through the model tokenizer.
std::vector<float> encode_smiles(const SeqModel& model, const Tokenizer& tk,
                                 const std::string& smiles);

// Checkpoint round trip (float models). Loading validates tensor shapes
// against the embedded config.
void save_model(const SeqModel& model, const std::string& path);
SeqModel load_model(const std::string& path);

}  // namespace hetenc::encdec

#include "hetenc/encdec/model_impl.hpp"
