#include "hetenc/encdec/train.hpp"

#include <cstdio>
#include <limits>
#include <numeric>

#include "hetenc/encdec/onehot.hpp"
#include "hetenc/nn/loss.hpp"
#include "hetenc/nn/threading.hpp"

namespace hetenc::encdec {

namespace {

constexpr std::size_t kChunkRows = 32;  // fixed so results are thread-count independent

using IdPair = std::pair<std::vector<int>, std::vector<int>>;

std::vector<IdPair> tokenize_pairs(const Tokenizer& tk,
                                   const std::vector<std::pair<std::string, std::string>>& pairs) {
  std::vector<IdPair> out;
  out.reserve(pairs.size());
  for (const auto& [in, target] : pairs) {
    out.emplace_back(tk.encode(in), tk.encode(target));
  }
  return out;
}

// Forward (and optionally backward) over one batch, chunked over rows.
// Returns the summed cross entropy; chunk results reduce in chunk order.
double run_batch(SeqModel& model, const std::vector<const IdPair*>& rows, bool learn,
                 SeqGrads<float>* total_grads) {
  const std::size_t batch = rows.size();
  const std::size_t v = model.cfg.charset_size();
  const std::size_t t_dec = model.cfg.max_len - 1;
  const float grad_scale = 1.0f / static_cast<float>(batch * t_dec);
  const std::size_t chunks = (batch + kChunkRows - 1) / kChunkRows;

  std::vector<double> chunk_loss(chunks, 0.0);
  std::vector<SeqGrads<float>> chunk_grads;
  if (learn) {
    chunk_grads.reserve(chunks);
    for (std::size_t c = 0; c < chunks; ++c) chunk_grads.push_back(zero_grads(model));
  }

  nn::parallel_chunks(batch, kChunkRows, [&](std::size_t ci, std::size_t lo, std::size_t hi) {
    std::vector<std::vector<int>> enc_ids, dec_ids;
    enc_ids.reserve(hi - lo);
    dec_ids.reserve(hi - lo);
    for (std::size_t r = lo; r < hi; ++r) {
      enc_ids.push_back(rows[r]->first);
      dec_ids.push_back(rows[r]->second);
    }
    TeacherBatch<float> tb = make_teacher_batch<float>(enc_ids, dec_ids, model.cfg.max_len, v);
    if (learn) {
      ForwardCache<float> cache;
      nn::Tensorf probs = model_forward(model, tb.x_enc, tb.x_dec, &cache);
      auto loss = nn::softmax_cross_entropy_sum(probs, tb.target, grad_scale);
      chunk_loss[ci] = loss.loss;
      model_backward(model, cache, tb.x_enc, tb.x_dec, loss.d_logits, chunk_grads[ci]);
    } else {
      nn::Tensorf probs = model_forward(model, tb.x_enc, tb.x_dec, nullptr);
      chunk_loss[ci] = nn::softmax_cross_entropy_sum(probs, tb.target, grad_scale).loss;
    }
  });

  if (learn) {
    for (std::size_t c = 0; c < chunks; ++c) total_grads->add(chunk_grads[c]);
  }
  return std::accumulate(chunk_loss.begin(), chunk_loss.end(), 0.0);
}

}  // namespace

std::string TrainLog::to_csv(const std::string& comment) const {
  std::string out;
  if (!comment.empty()) out += "# " + comment + "\n";
  out += "epoch,train_loss,test_loss,lr\n";
  char buf[160];
  for (const EpochLog& e : epochs) {
    std::snprintf(buf, sizeof(buf), "%d,%.12g,%.12g,%.9g\n", e.epoch, e.train_loss,
                  e.test_loss, e.lr);
    out += buf;
  }
  return out;
}

TrainLog train_model(SeqModel& model, const PairProvider& train_pairs,
                     const std::vector<std::pair<std::string, std::string>>& test_pairs,
                     const TrainOptions& opts) {
  const Tokenizer tk = Tokenizer::from_tokens(model.cfg.charset);
  const std::size_t t_dec = model.cfg.max_len - 1;

  auto params = model.named_params();
  std::vector<nn::Tensorf*> param_ptrs;
  for (auto& [name, p] : params) param_ptrs.push_back(p);

  nn::AdamState<float> adam;
  double lr = opts.schedule.initial_lr;

  const std::vector<IdPair> test_ids = tokenize_pairs(tk, test_pairs);

  TrainLog log;
  std::vector<double> test_history;
  std::vector<nn::Tensorf> best_params;
  double best_loss = std::numeric_limits<double>::infinity();

  for (int epoch = 1; epoch <= opts.epochs; ++epoch) {
    const std::vector<IdPair> ids = tokenize_pairs(tk, train_pairs(epoch));
    std::vector<std::size_t> order(ids.size());
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 shuffle_rng = nn::rng_stream(opts.seed, 0x7EA1ull, static_cast<std::uint64_t>(epoch));
    nn::shuffle_indices(order, shuffle_rng);

    double loss_sum = 0.0;
    std::size_t seen = 0;
    for (std::size_t start = 0; start < order.size(); start += opts.batch_size) {
      const std::size_t end = std::min(order.size(), start + opts.batch_size);
      std::vector<const IdPair*> rows;
      rows.reserve(end - start);
      for (std::size_t i = start; i < end; ++i) rows.push_back(&ids[order[i]]);

      SeqGrads<float> grads = zero_grads(model);
      loss_sum += run_batch(model, rows, /*learn=*/true, &grads);
      seen += rows.size();

      auto grad_ptrs = grads.flat();
      nn::clip_global_norm(grad_ptrs, opts.grad_clip);
      std::vector<const nn::Tensorf*> grad_view(grad_ptrs.begin(), grad_ptrs.end());
      nn::adam_step(adam, static_cast<float>(lr), param_ptrs, grad_view);
    }
    const double train_loss = loss_sum / static_cast<double>(seen * t_dec);

    double test_loss = 0.0;
    if (!test_ids.empty()) {
      std::vector<const IdPair*> rows;
      rows.reserve(test_ids.size());
      for (const IdPair& p : test_ids) rows.push_back(&p);
      test_loss = run_batch(model, rows, /*learn=*/false, nullptr) /
                  static_cast<double>(test_ids.size() * t_dec);
    } else {
      test_loss = train_loss;
    }
    test_history.push_back(test_loss);

    const nn::ScheduleAction action = nn::schedule_update(opts.schedule, test_history);
    EpochLog row{epoch, train_loss, test_loss, lr, nn::to_string(action)};
    log.epochs.push_back(row);
    if (opts.verbose) {
      std::fprintf(stderr, "epoch %d train %.6f test %.6f lr %.5f %s\n", epoch, train_loss,
                   test_loss, lr, nn::to_string(action));
    }

    if (test_loss < best_loss) {
      best_loss = test_loss;
      if (opts.schedule.checkpoint_on_improvement) {
        best_params.clear();
        for (nn::Tensorf* p : param_ptrs) best_params.push_back(*p);
      }
    }
    if (action == nn::ScheduleAction::reduce_lr) lr *= opts.schedule.lr_factor;
    if (action == nn::ScheduleAction::stop) break;
  }

  if (!best_params.empty()) {
    for (std::size_t i = 0; i < param_ptrs.size(); ++i) *param_ptrs[i] = best_params[i];
  }
  return log;
}

}  // namespace hetenc::encdec
