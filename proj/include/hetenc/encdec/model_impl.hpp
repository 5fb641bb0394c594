#pragma once

// Template bodies for model.hpp; include that header instead of this one.

namespace hetenc::encdec {

namespace detail {

// Reversed copy along the time axis of a [B, T, D] tensor.
template <typename T>
nn::Tensor<T> reverse_time(const nn::Tensor<T>& x) {
  const std::size_t b = x.dim(0), t = x.dim(1), d = x.dim(2);
  nn::Tensor<T> out({b, t, d});
  for (std::size_t i = 0; i < b; ++i) {
    for (std::size_t s = 0; s < t; ++s) {
      const T* src = x.data() + (i * t + s) * d;
      T* dst = out.data() + (i * t + (t - 1 - s)) * d;
      std::copy(src, src + d, dst);
    }
  }
  return out;
}

// Feature-axis concat of two [B, T, D] tensors.
template <typename T>
nn::Tensor<T> concat_features(const nn::Tensor<T>& a, const nn::Tensor<T>& b) {
  const std::size_t bb = a.dim(0), t = a.dim(1), da = a.dim(2), db = b.dim(2);
  nn::Tensor<T> out({bb, t, da + db});
  for (std::size_t i = 0; i < bb * t; ++i) {
    std::copy(a.data() + i * da, a.data() + (i + 1) * da, out.data() + i * (da + db));
    std::copy(b.data() + i * db, b.data() + (i + 1) * db, out.data() + i * (da + db) + da);
  }
  return out;
}

template <typename T>
void split_features(const nn::Tensor<T>& x, std::size_t da, nn::Tensor<T>& a,
                    nn::Tensor<T>& b) {
  const std::size_t bb = x.dim(0), t = x.dim(1), d = x.dim(2), db = d - da;
  a = nn::Tensor<T>({bb, t, da});
  b = nn::Tensor<T>({bb, t, db});
  for (std::size_t i = 0; i < bb * t; ++i) {
    std::copy(x.data() + i * d, x.data() + i * d + da, a.data() + i * da);
    std::copy(x.data() + i * d + da, x.data() + (i + 1) * d, b.data() + i * db);
  }
}

}  // namespace detail

template <typename T>
SeqModelT<T> build_model(const ModelConfig& cfg) {
  cfg.validate();
  SeqModelT<T> m;
  m.cfg = cfg;
  std::mt19937_64 rng = nn::rng_stream(cfg.seed, 0xA11ull);
  const std::size_t v = cfg.charset_size();
  const std::size_t dirs = cfg.bidirectional ? 2 : 1;

  auto init_lstm = [&](std::size_t in, std::size_t cells) {
    nn::Lstm<T> l = nn::make_lstm<T>(in, cells);
    nn::glorot_uniform(l.W, in, 4 * cells, rng);
    nn::orthogonal_gates(l.U, cells, rng);
    // Forget-gate bias 1 stabilizes early training at high learning rates.
    for (std::size_t i = cells; i < 2 * cells; ++i) l.b[i] = T(1);
    return l;
  };
  auto init_dense = [&](std::size_t in, std::size_t out, nn::Activation act) {
    nn::Dense<T> d = nn::make_dense<T>(in, out, act);
    nn::glorot_uniform(d.W, in, out, rng);
    return d;
  };

  for (int l = 0; l < cfg.encoder_layers; ++l) {
    const std::size_t in = l == 0 ? v : cfg.encoder_cells * dirs;
    m.enc_fwd.push_back(init_lstm(in, cfg.encoder_cells));
    if (cfg.bidirectional) m.enc_bwd.push_back(init_lstm(in, cfg.encoder_cells));
  }
  m.bottleneck = init_dense(cfg.encoder_state_dim(), cfg.bottleneck_dim, nn::Activation::relu);
  for (int l = 0; l < cfg.decoder_layers; ++l) {
    m.state_init.push_back(init_dense(cfg.bottleneck_dim, cfg.decoder_cells, nn::Activation::relu));
    m.state_init.push_back(init_dense(cfg.bottleneck_dim, cfg.decoder_cells, nn::Activation::relu));
    const std::size_t in = l == 0 ? v : cfg.decoder_cells;
    m.dec.push_back(init_lstm(in, cfg.decoder_cells));
  }
  m.out = init_dense(cfg.decoder_cells, v, nn::Activation::softmax);
  return m;
}

template <typename T>
std::vector<std::pair<std::string, nn::Tensor<T>*>> SeqModelT<T>::named_params() {
  std::vector<std::pair<std::string, nn::Tensor<T>*>> list;
  for (std::size_t l = 0; l < enc_fwd.size(); ++l) {
    const std::string p = "enc." + std::to_string(l) + ".";
    list.emplace_back(p + "W", &enc_fwd[l].W);
    list.emplace_back(p + "U", &enc_fwd[l].U);
    list.emplace_back(p + "b", &enc_fwd[l].b);
    if (!enc_bwd.empty()) {
      const std::string q = "enc_rev." + std::to_string(l) + ".";
      list.emplace_back(q + "W", &enc_bwd[l].W);
      list.emplace_back(q + "U", &enc_bwd[l].U);
      list.emplace_back(q + "b", &enc_bwd[l].b);
    }
  }
  list.emplace_back("bottleneck.W", &bottleneck.W);
  list.emplace_back("bottleneck.b", &bottleneck.b);
  for (std::size_t k = 0; k < state_init.size(); ++k) {
    const std::string p = "state_init." + std::to_string(k) + ".";
    list.emplace_back(p + "W", &state_init[k].W);
    list.emplace_back(p + "b", &state_init[k].b);
  }
  for (std::size_t l = 0; l < dec.size(); ++l) {
    const std::string p = "dec." + std::to_string(l) + ".";
    list.emplace_back(p + "W", &dec[l].W);
    list.emplace_back(p + "U", &dec[l].U);
    list.emplace_back(p + "b", &dec[l].b);
  }
  list.emplace_back("out.W", &out.W);
  list.emplace_back("out.b", &out.b);
  return list;
}

template <typename T>
std::vector<std::pair<std::string, const nn::Tensor<T>*>> SeqModelT<T>::named_params() const {
  auto& self = const_cast<SeqModelT<T>&>(*this);
  std::vector<std::pair<std::string, const nn::Tensor<T>*>> out;
  for (auto& [name, ptr] : self.named_params()) out.emplace_back(name, ptr);
  return out;
}

template <typename T>
std::size_t SeqModelT<T>::parameter_count() const {
  std::size_t n = 0;
  for (const auto& [name, ptr] : named_params()) n += ptr->size();
  return n;
}

template <typename T>
SeqGrads<T> zero_grads(const SeqModelT<T>& model) {
  SeqGrads<T> g;
  auto zero_like = [](const nn::Tensor<T>& t) { return nn::Tensor<T>(t.shape()); };
  for (const auto& l : model.enc_fwd) g.enc_fwd.push_back({zero_like(l.W), zero_like(l.U), zero_like(l.b)});
  for (const auto& l : model.enc_bwd) g.enc_bwd.push_back({zero_like(l.W), zero_like(l.U), zero_like(l.b)});
  g.bottleneck_w = zero_like(model.bottleneck.W);
  g.bottleneck_b = zero_like(model.bottleneck.b);
  for (const auto& d : model.state_init) g.state_init.emplace_back(zero_like(d.W), zero_like(d.b));
  for (const auto& l : model.dec) g.dec.push_back({zero_like(l.W), zero_like(l.U), zero_like(l.b)});
  g.out_w = zero_like(model.out.W);
  g.out_b = zero_like(model.out.b);
  return g;
}

template <typename T>
std::vector<const nn::Tensor<T>*> SeqGrads<T>::flat() const {
  auto& self = const_cast<SeqGrads<T>&>(*this);
  std::vector<const nn::Tensor<T>*> out;
  for (nn::Tensor<T>* p : self.flat()) out.push_back(p);
  return out;
}

template <typename T>
std::vector<nn::Tensor<T>*> SeqGrads<T>::flat() {
  std::vector<nn::Tensor<T>*> out;
  for (std::size_t l = 0; l < enc_fwd.size(); ++l) {
    out.push_back(&enc_fwd[l].W);
    out.push_back(&enc_fwd[l].U);
    out.push_back(&enc_fwd[l].b);
    if (!enc_bwd.empty()) {
      out.push_back(&enc_bwd[l].W);
      out.push_back(&enc_bwd[l].U);
      out.push_back(&enc_bwd[l].b);
    }
  }
  out.push_back(&bottleneck_w);
  out.push_back(&bottleneck_b);
  for (auto& [w, b] : state_init) {
    out.push_back(&w);
    out.push_back(&b);
  }
  for (auto& l : dec) {
    out.push_back(&l.W);
    out.push_back(&l.U);
    out.push_back(&l.b);
  }
  out.push_back(&out_w);
  out.push_back(&out_b);
  return out;
}

template <typename T>
void SeqGrads<T>::add(const SeqGrads<T>& other) {
  auto mine = flat();
  auto theirs = other.flat();
  for (std::size_t i = 0; i < mine.size(); ++i) {
    for (std::size_t j = 0; j < mine[i]->size(); ++j) (*mine[i])[j] += (*theirs[i])[j];
  }
}

// Encoder stack shared by training forward and encode_batch. Returns the
// bottleneck activations; fills `cache` when given.
template <typename T>
nn::Tensor<T> run_encoder(const SeqModelT<T>& model, const nn::Tensor<T>& x_enc,
                          std::type_identity_t<ForwardCache<T>>* cache) {
  const ModelConfig& cfg = model.cfg;
  const std::size_t batch = x_enc.dim(0);
  const std::size_t cells = cfg.encoder_cells;
  const bool bidi = cfg.bidirectional;
  const std::size_t layers = model.enc_fwd.size();

  std::vector<nn::Tensor<T>> local_inputs;  // used when no cache is recorded
  local_inputs.reserve(layers);
  if (cache) {
    cache->enc_fwd.resize(layers);
    if (bidi) cache->enc_bwd.resize(layers);
    cache->enc_layer_inputs.reserve(layers);
    cache->enc_bwd_inputs.reserve(layers);
  }

  nn::Tensor<T> state_vec({batch, cfg.encoder_state_dim()});
  std::size_t col = 0;
  auto put_state = [&](const nn::Tensor<T>& s) {
    for (std::size_t r = 0; r < batch; ++r) {
      std::copy(s.data() + r * cells, s.data() + (r + 1) * cells,
                state_vec.data() + r * cfg.encoder_state_dim() + col);
    }
    col += cells;
  };

  const nn::Tensor<T>* input = &x_enc;
  for (std::size_t l = 0; l < layers; ++l) {
    auto [out_f, fin_f] = nn::lstm_forward(model.enc_fwd[l], *input, nullptr,
                                           cache ? &cache->enc_fwd[l] : nullptr);
    nn::Tensor<T> merged;
    if (bidi) {
      nn::Tensor<T> rev = detail::reverse_time(*input);
      const nn::Tensor<T>* rev_ptr = &rev;
      if (cache) {
        cache->enc_bwd_inputs.push_back(std::move(rev));
        rev_ptr = &cache->enc_bwd_inputs.back();
      }
      auto [out_b, fin_b] = nn::lstm_forward(model.enc_bwd[l], *rev_ptr, nullptr,
                                             cache ? &cache->enc_bwd[l] : nullptr);
      merged = detail::concat_features(out_f, detail::reverse_time(out_b));
      put_state(fin_f.c);
      put_state(fin_f.h);
      put_state(fin_b.c);
      put_state(fin_b.h);
    } else {
      merged = std::move(out_f);
      put_state(fin_f.c);
      put_state(fin_f.h);
    }
    if (l + 1 < layers) {
      auto& store = cache ? cache->enc_layer_inputs : local_inputs;
      store.push_back(std::move(merged));
      input = &store.back();
    }
  }

  nn::Tensor<T> z = dense_forward(model.bottleneck, state_vec);
  if (cache) {
    cache->state_vec = std::move(state_vec);
    cache->z = z;
  }
  return z;
}

template <typename T>
nn::Tensor<T> encode_batch(const SeqModelT<T>& model, const nn::Tensor<T>& x_enc) {
  return run_encoder(model, x_enc, nullptr);
}

template <typename T>
nn::Tensor<T> model_forward(const SeqModelT<T>& model, const nn::Tensor<T>& x_enc,
                            const nn::Tensor<T>& x_dec,
                            std::type_identity_t<ForwardCache<T>>* cache) {
  const ModelConfig& cfg = model.cfg;
  const std::size_t batch = x_enc.dim(0), t_dec = x_dec.dim(1);
  nn::Tensor<T> z = run_encoder(model, x_enc, cache);

  std::vector<nn::Tensor<T>> init_states;
  init_states.reserve(model.state_init.size());
  for (const auto& d : model.state_init) init_states.push_back(dense_forward(d, z));

  const std::size_t layers = model.dec.size();
  std::vector<nn::Tensor<T>> local_inputs;
  local_inputs.reserve(layers);
  if (cache) {
    cache->dec_caches.resize(layers);
    cache->dec_layer_inputs.reserve(layers);
    cache->init_states = init_states;  // relu masks for the backward pass
  }

  const nn::Tensor<T>* input = &x_dec;
  nn::Tensor<T> top;
  for (std::size_t l = 0; l < layers; ++l) {
    nn::LstmState<T> init{init_states[2 * l + 1], init_states[2 * l]};  // h, c
    auto [out, fin] = nn::lstm_forward(model.dec[l], *input, &init,
                                       cache ? &cache->dec_caches[l] : nullptr);
    if (l + 1 < layers) {
      auto& store = cache ? cache->dec_layer_inputs : local_inputs;
      store.push_back(std::move(out));
      input = &store.back();
    } else {
      top = std::move(out);
    }
  }

  nn::Tensor<T> probs = dense_forward(model.out, top);
  probs.reshape({batch, t_dec, cfg.charset_size()});
  if (cache) cache->probs = probs;
  return probs;
}

template <typename T>
void model_backward(const SeqModelT<T>& model, const ForwardCache<T>& cache,
                    const nn::Tensor<T>& x_enc, const nn::Tensor<T>& x_dec,
                    const nn::Tensor<T>& d_logits, SeqGrads<T>& grads) {
  const ModelConfig& cfg = model.cfg;
  const std::size_t batch = x_enc.dim(0), t_dec = x_dec.dim(1);
  const std::size_t cells = cfg.encoder_cells;
  const bool bidi = cfg.bidirectional;

  // Softmax head (gradient is already w.r.t. the logits).
  const nn::Tensor<T>& top = cache.dec_caches.back().outputs;
  nn::Tensor<T> d_top = dense_backward_pre(model.out, top, d_logits, grads.out_w, grads.out_b);
  d_top.reshape({batch, t_dec, cfg.decoder_cells});

  // Decoder stack, then the state-init denses feeding each layer.
  nn::Tensor<T> dz({batch, cfg.bottleneck_dim});
  nn::Tensor<T> d_seq = std::move(d_top);
  for (std::size_t l = model.dec.size(); l-- > 0;) {
    nn::Tensor<T> dh0, dc0;
    nn::Tensor<T> dx = nn::lstm_backward(model.dec[l], cache.dec_caches[l], d_seq, nullptr,
                                         nullptr, grads.dec[l], &dh0, &dc0);
    nn::Tensor<T> dzc = dense_backward(model.state_init[2 * l], cache.z,
                                       cache.init_states[2 * l], dc0,
                                       grads.state_init[2 * l].first,
                                       grads.state_init[2 * l].second);
    nn::Tensor<T> dzh = dense_backward(model.state_init[2 * l + 1], cache.z,
                                       cache.init_states[2 * l + 1], dh0,
                                       grads.state_init[2 * l + 1].first,
                                       grads.state_init[2 * l + 1].second);
    dz.mat() += dzc.mat() + dzh.mat();
    d_seq = std::move(dx);
  }

  // Bottleneck back to the concatenated encoder states.
  nn::Tensor<T> d_state = dense_backward(model.bottleneck, cache.state_vec, cache.z, dz,
                                         grads.bottleneck_w, grads.bottleneck_b);

  // Unpack per-lane final-state gradients in the same order they were packed.
  const std::size_t layers = model.enc_fwd.size();
  std::size_t col = 0;
  auto take_state = [&]() {
    nn::Tensor<T> s({batch, cells});
    for (std::size_t r = 0; r < batch; ++r) {
      std::copy(d_state.data() + r * cfg.encoder_state_dim() + col,
                d_state.data() + r * cfg.encoder_state_dim() + col + cells,
                s.data() + r * cells);
    }
    col += cells;
    return s;
  };
  std::vector<nn::Tensor<T>> dc_f(layers), dh_f(layers), dc_b(layers), dh_b(layers);
  for (std::size_t l = 0; l < layers; ++l) {
    dc_f[l] = take_state();
    dh_f[l] = take_state();
    if (bidi) {
      dc_b[l] = take_state();
      dh_b[l] = take_state();
    }
  }

  // Encoder stack top-down. d_out_f is in natural time order, d_out_b in the
  // backward lane's own (reversed) order.
  nn::Tensor<T> d_out_f, d_out_b;
  for (std::size_t l = layers; l-- > 0;) {
    nn::Tensor<T> dx_f = nn::lstm_backward(model.enc_fwd[l], cache.enc_fwd[l], d_out_f,
                                           &dh_f[l], &dc_f[l], grads.enc_fwd[l]);
    nn::Tensor<T> dx_total;
    if (bidi) {
      nn::Tensor<T> dx_b = nn::lstm_backward(model.enc_bwd[l], cache.enc_bwd[l], d_out_b,
                                             &dh_b[l], &dc_b[l], grads.enc_bwd[l]);
      nn::Tensor<T> dx_b_nat = detail::reverse_time(dx_b);
      dx_total = std::move(dx_f);
      dx_total.view(dx_total.size(), 1) += dx_b_nat.view(dx_b_nat.size(), 1);
    } else {
      dx_total = std::move(dx_f);
    }
    if (l > 0) {
      if (bidi) {
        nn::Tensor<T> first, second;
        detail::split_features(dx_total, cells, first, second);
        d_out_f = std::move(first);
        d_out_b = detail::reverse_time(second);
      } else {
        d_out_f = std::move(dx_total);
      }
    }
  }
}

}  // namespace hetenc::encdec
