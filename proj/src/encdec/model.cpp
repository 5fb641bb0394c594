#include "hetenc/encdec/model.hpp"

#include <cmath>

#include <json.hpp>

#include "hetenc/encdec/onehot.hpp"
#include "hetenc/nn/checkpoint.hpp"

namespace hetenc::encdec {

using nlohmann::json;

std::string ModelConfig::to_json() const {
  json j;
  j["charset"] = charset;
  j["max_len"] = max_len;
  j["encoder_layers"] = encoder_layers;
  j["encoder_cells"] = encoder_cells;
  j["bidirectional"] = bidirectional;
  j["bottleneck_dim"] = bottleneck_dim;
  j["decoder_layers"] = decoder_layers;
  j["decoder_cells"] = decoder_cells;
  j["seed"] = seed;
  return j.dump();
}

ModelConfig ModelConfig::from_json(const std::string& text) {
  json j = json::parse(text);
  ModelConfig cfg;
  cfg.charset = j.at("charset").get<std::vector<std::string>>();
  cfg.max_len = j.at("max_len").get<std::size_t>();
  cfg.encoder_layers = j.at("encoder_layers").get<int>();
  cfg.encoder_cells = j.at("encoder_cells").get<std::size_t>();
  cfg.bidirectional = j.at("bidirectional").get<bool>();
  cfg.bottleneck_dim = j.at("bottleneck_dim").get<std::size_t>();
  cfg.decoder_layers = j.at("decoder_layers").get<int>();
  cfg.decoder_cells = j.at("decoder_cells").get<std::size_t>();
  cfg.seed = j.at("seed").get<std::uint64_t>();
  return cfg;
}

void ModelConfig::validate() const {
  if (charset.size() < 4) {
    throw EncdecError(EncdecErrorKind::InvalidConfig, "charset too small");
  }
  Tokenizer::from_tokens(charset);  // checks the specials
  if (max_len < 3 || encoder_layers < 1 || decoder_layers < 1 || encoder_cells < 1 ||
      decoder_cells < 1 || bottleneck_dim < 1) {
    throw EncdecError(EncdecErrorKind::InvalidConfig, "invalid model dimensions");
  }
}

ModelConfig preset_config(const std::string& name) {
  ModelConfig cfg;
  if (name == "gdb-small") {
    cfg.encoder_layers = 1;
    cfg.encoder_cells = 64;
    cfg.decoder_layers = 1;
    cfg.decoder_cells = 64;
    cfg.bottleneck_dim = 64;
    cfg.bidirectional = false;
  } else if (name == "gdb-2layer") {
    cfg.encoder_layers = 2;
    cfg.encoder_cells = 128;
    cfg.decoder_layers = 2;
    cfg.decoder_cells = 128;
    cfg.bottleneck_dim = 64;
    cfg.bidirectional = false;
  } else if (name == "large-bidi") {
    cfg.encoder_layers = 2;
    cfg.encoder_cells = 128;
    cfg.bidirectional = true;
    cfg.bottleneck_dim = 256;
    cfg.decoder_layers = 2;
    cfg.decoder_cells = 256;
    cfg.max_len = 102;
  } else {
    throw EncdecError(EncdecErrorKind::InvalidConfig, "unknown preset: " + name);
  }
  return cfg;
}

double preset_initial_lr(const std::string& name) {
  // 0.01 keeps the bottleneck alive on desk-scale corpora; the higher rates
  // published for the million-molecule runs collapse it here.
  if (name == "gdb-small") return 0.01;
  if (name == "gdb-2layer") return 0.01;
  if (name == "large-bidi") return 0.005;
  throw EncdecError(EncdecErrorKind::InvalidConfig, "unknown preset: " + name);
}

namespace {

struct DecoderRun {
  std::vector<nn::LstmState<float>> states;
};

DecoderRun init_decoder(const SeqModel& m, std::span<const float> z) {
  if (z.size() != m.cfg.bottleneck_dim) {
    throw EncdecError(EncdecErrorKind::InvalidConfig, "latent dimension mismatch");
  }
  nn::Tensorf zt({1, m.cfg.bottleneck_dim});
  std::copy(z.begin(), z.end(), zt.data());
  DecoderRun run;
  for (std::size_t l = 0; l < m.dec.size(); ++l) {
    nn::Tensorf c = dense_forward(m.state_init[2 * l], zt);
    nn::Tensorf h = dense_forward(m.state_init[2 * l + 1], zt);
    run.states.push_back({std::move(h), std::move(c)});
  }
  return run;
}

// One decoder step from a token id; returns the temperature-scaled softmax
// distribution over the charset.
std::vector<double> decoder_step(const SeqModel& m, DecoderRun& run, int token,
                                 double temperature) {
  const std::size_t v = m.cfg.charset_size();
  nn::Tensorf x({1, v});
  x[static_cast<std::size_t>(token)] = 1.0f;
  for (std::size_t l = 0; l < m.dec.size(); ++l) {
    x = nn::lstm_step(m.dec[l], x, run.states[l]);
  }
  std::vector<double> logits(v);
  for (std::size_t j = 0; j < v; ++j) {
    double acc = static_cast<double>(m.out.b[j]);
    for (std::size_t k = 0; k < m.cfg.decoder_cells; ++k) {
      acc += static_cast<double>(x[k]) * static_cast<double>(m.out.W[k * v + j]);
    }
    logits[j] = acc / temperature;
  }
  const double mx = *std::max_element(logits.begin(), logits.end());
  double sum = 0.0;
  for (double& p : logits) {
    p = std::exp(p - mx);
    sum += p;
  }
  for (double& p : logits) p /= sum;
  return logits;
}

DecodeResult run_decode(const SeqModel& m, std::span<const float> z, double temperature,
                        std::mt19937_64* rng, bool record_probs) {
  DecoderRun run = init_decoder(m, z);
  const Tokenizer tk = Tokenizer::from_tokens(m.cfg.charset);
  DecodeResult res;
  int token = Tokenizer::kStart;
  bool ended = false;
  for (std::size_t step = 0; step + 1 < m.cfg.max_len; ++step) {
    std::vector<double> probs = decoder_step(m, run, token, temperature);
    if (record_probs) {
      res.step_probs.emplace_back(probs.begin(), probs.end());
    }
    int next = 0;
    if (rng == nullptr) {
      // Greedy; ties go to the lowest token index.
      for (std::size_t j = 1; j < probs.size(); ++j) {
        if (probs[j] > probs[next]) next = static_cast<int>(j);
      }
    } else {
      const double u = nn::uniform_unit(*rng);
      double cdf = 0.0;
      next = static_cast<int>(probs.size()) - 1;
      for (std::size_t j = 0; j < probs.size(); ++j) {
        cdf += probs[j];
        if (u < cdf) {
          next = static_cast<int>(j);
          break;
        }
      }
    }
    if (next == Tokenizer::kEnd) {
      ended = true;
      break;
    }
    if (next == Tokenizer::kPad) res.pad_before_end = true;
    if (next != Tokenizer::kPad && next != Tokenizer::kStart) res.smiles += tk.token_text(next);
    token = next;
  }
  res.truncated = !ended;
  return res;
}

}  // namespace

DecodeResult decode_greedy(const SeqModel& model, std::span<const float> z) {
  return run_decode(model, z, 1.0, nullptr, false);
}

DecodeResult decode_multinomial(const SeqModel& model, std::span<const float> z,
                                double temperature, std::mt19937_64& rng, bool record_probs) {
  if (temperature <= 0.0) {
    throw EncdecError(EncdecErrorKind::InvalidConfig, "temperature must be positive");
  }
  return run_decode(model, z, temperature, &rng, record_probs);
}

std::vector<float> encode_smiles(const SeqModel& model, const Tokenizer& tk,
                                 const std::string& smiles) {
  std::vector<std::vector<int>> ids{tk.encode(smiles)};
  nn::Tensorf x = one_hot_full<float>(ids, model.cfg.max_len, model.cfg.charset_size());
  nn::Tensorf z = encode_batch(model, x);
  return std::vector<float>(z.data(), z.data() + z.size());
}

void save_model(const SeqModel& model, const std::string& path) {
  std::vector<nn::NamedTensor> tensors;
  for (const auto& [name, t] : model.named_params()) {
    tensors.push_back({name, t->shape(), std::vector<float>(t->data(), t->data() + t->size())});
  }
  nn::save_checkpoint(path, model.cfg.to_json(), tensors);
}

SeqModel load_model(const std::string& path) {
  nn::Checkpoint ck = nn::load_checkpoint(path);
  ModelConfig cfg = ModelConfig::from_json(ck.config_json);
  SeqModel model = build_model<float>(cfg);
  for (auto& [name, t] : model.named_params()) {
    const nn::NamedTensor& src = ck.require(name);
    if (src.shape != t->shape()) {
      throw nn::CheckpointError(nn::CheckpointErrorKind::VersionMismatch,
                                "tensor shape mismatch for " + name);
    }
    std::copy(src.data.begin(), src.data.end(), t->data());
  }
  return model;
}

}  // namespace hetenc::encdec
