#include "hetenc/qsar/qsar.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <json.hpp>

#include "hetenc/chem/smiles.hpp"
#include "hetenc/encdec/onehot.hpp"
#include "hetenc/nn/adam.hpp"
#include "hetenc/nn/rng.hpp"
#include "hetenc/nn/schedule.hpp"
#include "hetenc/nn/threading.hpp"
#include "hetenc/sim/fingerprint.hpp"
#include "hetenc/sim/metrics.hpp"

namespace hetenc::qsar {

using nlohmann::json;

FeatureKind feature_kind_from_string(const std::string& s) {
  if (s == "ecfp4" || s == "ecfp4_1024") return FeatureKind::ecfp4_1024;
  if (s == "latent") return FeatureKind::latent;
  throw std::invalid_argument("unknown feature kind: " + s);
}

std::string to_string(FeatureKind k) {
  return k == FeatureKind::ecfp4_1024 ? "ecfp4_1024" : "latent";
}

FeatureMatrix featurize(const data::QsarTable& table, FeatureKind kind,
                        const encdec::SeqModel* model) {
  FeatureMatrix fm;
  fm.kind = kind;
  if (kind == FeatureKind::ecfp4_1024) {
    fm.dim = 1024;
    for (const data::QsarRecord& r : table.records) {
      const chem::MolGraph mol = chem::parse_smiles(r.smiles);
      const sim::Fingerprint fp = sim::morgan_fingerprint(mol, 2, 1024);
      std::vector<float> row(1024, 0.0f);
      for (std::size_t b = 0; b < 1024; ++b) row[b] = fp.test(b) ? 1.0f : 0.0f;
      fm.rows.push_back(std::move(row));
    }
    return fm;
  }
  if (model == nullptr) {
    throw std::invalid_argument("latent features need a trained model");
  }
  const encdec::Tokenizer tk = encdec::Tokenizer::from_tokens(model->cfg.charset);
  fm.dim = model->cfg.bottleneck_dim;
  for (const data::QsarRecord& r : table.records) {
    fm.rows.push_back(encdec::encode_smiles(*model, tk, r.smiles));
  }
  return fm;
}

std::string HyperParams::to_json() const {
  json j;
  j["input_dropout"] = input_dropout;
  j["units"] = units;
  j["l2"] = l2;
  j["maxnorm"] = maxnorm;
  j["init"] = init;
  j["batch_norm"] = batch_norm;
  j["activation"] = activation;
  j["dropout"] = dropout;
  j["hidden_layers"] = hidden_layers;
  j["lr"] = lr;
  j["optimizer"] = optimizer;
  return j.dump();
}

HyperParams sample_hyperparams(std::mt19937_64& rng) {
  static const char* kInits[] = {"lecun_uniform", "glorot_uniform", "he_uniform",
                                 "lecun_normal", "glorot_normal", "he_normal"};
  auto uni = [&](double lo, double hi) { return lo + (hi - lo) * nn::uniform_unit(rng); };
  auto log_uni = [&](double lo, double hi) {
    return std::exp(uni(std::log(lo), std::log(hi)));
  };
  HyperParams hp;
  hp.input_dropout = uni(0.0, 0.95);
  hp.units = 2 + static_cast<int>(nn::uniform_below(rng, 1023));  // [2, 1024]
  hp.l2 = log_uni(1e-6, 0.1);
  hp.maxnorm = uni(0.5, 6.0);
  hp.init = kInits[nn::uniform_below(rng, 6)];
  hp.batch_norm = false;  // reduced preset
  hp.activation = nn::uniform_below(rng, 2) == 0 ? "relu" : "selu";
  hp.dropout = uni(0.0, 0.95);
  hp.hidden_layers = 1 + static_cast<int>(nn::uniform_below(rng, 6));  // [1, 6]
  hp.lr = log_uni(1e-5, 0.1);
  hp.optimizer = nn::uniform_below(rng, 2) == 0 ? "adam" : "sgd";  // reduced preset
  return hp;
}

namespace {

constexpr double kSeluLambda = 1.0507009873554805;
constexpr double kSeluAlpha = 1.6732632423543772;

// Small feed-forward regressor: input dropout, `hidden_layers` dense layers
// with relu/selu + dropout, linear scalar output. L2 on all kernels, maxnorm
// column clipping after each update.
class MlpRegressor {
 public:
  MlpRegressor(std::size_t in_dim, const HyperParams& hp, std::uint64_t seed)
      : hp_(hp), rng_(nn::rng_stream(seed, 0x91f3ull)) {
    std::size_t prev = in_dim;
    for (int l = 0; l <= hp.hidden_layers; ++l) {
      const bool last = l == hp.hidden_layers;
      const std::size_t width = last ? 1 : static_cast<std::size_t>(hp.units);
      nn::Tensorf w({prev, width});
      init_kernel(w, prev, width);
      weights_.push_back(std::move(w));
      biases_.emplace_back(std::vector<std::size_t>{width});
      prev = width;
    }
  }

  // Mean squared error over the rows; updates parameters when learn is set.
  double run_epoch(const std::vector<const std::vector<float>*>& rows,
                   const std::vector<double>& targets, bool learn, double lr,
                   nn::AdamState<float>& adam, std::size_t batch) {
    double se = 0.0;
    std::vector<std::size_t> order(rows.size());
    std::iota(order.begin(), order.end(), 0);
    if (learn) nn::shuffle_indices(order, rng_);
    for (std::size_t start = 0; start < order.size(); start += batch) {
      const std::size_t end = std::min(order.size(), start + batch);
      se += run_batch(rows, targets, order, start, end, learn, lr, adam);
    }
    return se / static_cast<double>(rows.size());
  }

  std::vector<double> predict(const std::vector<const std::vector<float>*>& rows) {
    std::vector<double> out;
    out.reserve(rows.size());
    std::vector<float> x, next;
    for (const auto* row : rows) {
      x = *row;
      for (std::size_t l = 0; l < weights_.size(); ++l) {
        forward_layer(l, x, next, nullptr);
        x.swap(next);
      }
      out.push_back(static_cast<double>(x[0]));
    }
    return out;
  }

  std::vector<nn::Tensorf> snapshot() const {
    std::vector<nn::Tensorf> s = weights_;
    s.insert(s.end(), biases_.begin(), biases_.end());
    return s;
  }
  void restore(const std::vector<nn::Tensorf>& s) {
    const std::size_t n = weights_.size();
    for (std::size_t i = 0; i < n; ++i) weights_[i] = s[i];
    for (std::size_t i = 0; i < n; ++i) biases_[i] = s[n + i];
  }

 private:
  void init_kernel(nn::Tensorf& w, std::size_t fan_in, std::size_t fan_out) {
    const std::string& k = hp_.init;
    const double fin = static_cast<double>(fan_in), fout = static_cast<double>(fan_out);
    if (k == "lecun_uniform" || k == "he_uniform" || k == "glorot_uniform") {
      double limit = k == "lecun_uniform" ? std::sqrt(3.0 / fin)
                     : k == "he_uniform"  ? std::sqrt(6.0 / fin)
                                          : std::sqrt(6.0 / (fin + fout));
      for (std::size_t i = 0; i < w.size(); ++i) {
        w[i] = static_cast<float>((2.0 * nn::uniform_unit(rng_) - 1.0) * limit);
      }
    } else {
      double sigma = k == "lecun_normal" ? std::sqrt(1.0 / fin)
                     : k == "he_normal"  ? std::sqrt(2.0 / fin)
                                         : std::sqrt(2.0 / (fin + fout));
      for (std::size_t i = 0; i < w.size(); ++i) {
        w[i] = static_cast<float>(nn::normal_unit(rng_) * sigma);
      }
    }
  }

  // y = act(x W + b) for one row; mask receives the dropout keep flags.
  void forward_layer(std::size_t l, const std::vector<float>& x, std::vector<float>& y,
                     std::vector<float>* pre) {
    const nn::Tensorf& w = weights_[l];
    const nn::Tensorf& b = biases_[l];
    const std::size_t in = w.dim(0), out = w.dim(1);
    y.assign(out, 0.0f);
    for (std::size_t i = 0; i < in; ++i) {
      const float xi = x[i];
      if (xi == 0.0f) continue;
      const float* wrow = w.data() + i * out;
      for (std::size_t j = 0; j < out; ++j) y[j] += xi * wrow[j];
    }
    for (std::size_t j = 0; j < out; ++j) y[j] += b[j];
    if (pre) *pre = y;
    if (l + 1 == weights_.size()) return;  // linear output
    if (hp_.activation == "relu") {
      for (float& v : y) v = v > 0.0f ? v : 0.0f;
    } else {
      for (float& v : y) {
        v = static_cast<float>(v > 0.0f ? kSeluLambda * v
                                        : kSeluLambda * kSeluAlpha * (std::exp(v) - 1.0));
      }
    }
  }

  double run_batch(const std::vector<const std::vector<float>*>& rows,
                   const std::vector<double>& targets, const std::vector<std::size_t>& order,
                   std::size_t start, std::size_t end, bool learn, double lr,
                   nn::AdamState<float>& adam) {
    const std::size_t layers = weights_.size();
    std::vector<nn::Tensorf> gw, gb;
    if (learn) {
      for (std::size_t l = 0; l < layers; ++l) {
        gw.emplace_back(weights_[l].shape());
        gb.emplace_back(biases_[l].shape());
      }
    }
    double se = 0.0;
    const double inv_n = 1.0 / static_cast<double>(end - start);
    std::vector<std::vector<float>> acts(layers + 1), pres(layers);
    // Dropout masks store 0 or the inverted-dropout scale, indexed like acts.
    std::vector<std::vector<float>> keep(layers + 1);
    for (std::size_t r = start; r < end; ++r) {
      const std::vector<float>& raw = *rows[order[r]];
      acts[0] = raw;
      for (auto& k : keep) k.clear();
      if (learn && hp_.input_dropout > 0.0) {
        apply_dropout(acts[0], hp_.input_dropout, keep[0]);
      }
      for (std::size_t l = 0; l < layers; ++l) {
        forward_layer(l, acts[l], acts[l + 1], &pres[l]);
        if (learn && l + 1 < layers && hp_.dropout > 0.0) {
          apply_dropout(acts[l + 1], hp_.dropout, keep[l + 1]);
        }
      }
      const double err = static_cast<double>(acts[layers][0]) - targets[order[r]];
      se += err * err;
      if (!learn) continue;

      // Backward for this row.
      std::vector<float> d = {static_cast<float>(2.0 * err * inv_n)};
      for (std::size_t l = layers; l-- > 0;) {
        const nn::Tensorf& w = weights_[l];
        const std::size_t in = w.dim(0), out = w.dim(1);
        if (l + 1 != layers) {  // dropout, then activation derivative
          if (!keep[l + 1].empty()) {
            for (std::size_t j = 0; j < out; ++j) d[j] *= keep[l + 1][j];
          }
          for (std::size_t j = 0; j < out; ++j) {
            const float pre = pres[l][j];
            if (hp_.activation == "relu") {
              d[j] = pre > 0.0f ? d[j] : 0.0f;
            } else {
              const double deriv = pre > 0.0f
                                       ? kSeluLambda
                                       : kSeluLambda * kSeluAlpha * std::exp(pre);
              d[j] = static_cast<float>(d[j] * deriv);
            }
          }
        }
        for (std::size_t j = 0; j < out; ++j) gb[l][j] += d[j];
        std::vector<float> dx(in, 0.0f);
        for (std::size_t i = 0; i < in; ++i) {
          const float xi = acts[l][i];
          float* gwrow = gw[l].data() + i * out;
          const float* wrow = w.data() + i * out;
          float acc = 0.0f;
          for (std::size_t j = 0; j < out; ++j) {
            gwrow[j] += xi * d[j];
            acc += wrow[j] * d[j];
          }
          dx[i] = acc;
        }
        d.swap(dx);
      }
    }
    if (learn) {
      // L2 on all kernels.
      for (std::size_t l = 0; l < layers; ++l) {
        for (std::size_t i = 0; i < gw[l].size(); ++i) {
          gw[l][i] += static_cast<float>(2.0 * hp_.l2) * weights_[l][i];
        }
      }
      std::vector<nn::Tensorf*> params;
      std::vector<const nn::Tensorf*> grads;
      for (std::size_t l = 0; l < layers; ++l) {
        params.push_back(&weights_[l]);
        grads.push_back(&gw[l]);
        params.push_back(&biases_[l]);
        grads.push_back(&gb[l]);
      }
      if (hp_.optimizer == "adam") {
        nn::adam_step(adam, static_cast<float>(lr), params, grads);
      } else {
        nn::sgd_step(static_cast<float>(lr), params, grads);
      }
      apply_maxnorm();
    }
    return se;
  }

  void apply_dropout(std::vector<float>& x, double rate, std::vector<float>& mask) {
    const float scale = static_cast<float>(1.0 / (1.0 - rate));
    mask.assign(x.size(), scale);
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (nn::uniform_unit(rng_) < rate) {
        x[i] = 0.0f;
        mask[i] = 0.0f;
      } else {
        x[i] *= scale;
      }
    }
  }

  // Column-wise (per output unit) kernel norm constraint.
  void apply_maxnorm() {
    for (nn::Tensorf& w : weights_) {
      const std::size_t in = w.dim(0), out = w.dim(1);
      for (std::size_t j = 0; j < out; ++j) {
        double sq = 0.0;
        for (std::size_t i = 0; i < in; ++i) {
          sq += static_cast<double>(w[i * out + j]) * static_cast<double>(w[i * out + j]);
        }
        const double norm = std::sqrt(sq);
        if (norm > hp_.maxnorm) {
          const float s = static_cast<float>(hp_.maxnorm / norm);
          for (std::size_t i = 0; i < in; ++i) w[i * out + j] *= s;
        }
      }
    }
  }

  HyperParams hp_;
  std::mt19937_64 rng_;
  std::vector<nn::Tensorf> weights_;
  std::vector<nn::Tensorf> biases_;
};

struct FoldData {
  std::vector<const std::vector<float>*> train_rows, val_rows;
  std::vector<double> train_y, val_y;
};

FoldData make_fold(const FeatureMatrix& x, const std::vector<double>& y,
                   const std::vector<int>& assign, int fold) {
  FoldData fd;
  for (std::size_t i = 0; i < x.rows.size(); ++i) {
    if (assign[i] == fold) {
      fd.val_rows.push_back(&x.rows[i]);
      fd.val_y.push_back(y[i]);
    } else {
      fd.train_rows.push_back(&x.rows[i]);
      fd.train_y.push_back(y[i]);
    }
  }
  return fd;
}

// Trains one model with target standardization and best-epoch restoration;
// returns validation RMSE (unstandardized).
double train_one(MlpRegressor& mlp, const FoldData& fd, const HyperParams& hp, int epochs,
                 std::size_t batch, double* y_mean_out, double* y_std_out) {
  double mean = 0.0;
  for (double v : fd.train_y) mean += v;
  mean /= static_cast<double>(fd.train_y.size());
  double var = 0.0;
  for (double v : fd.train_y) var += (v - mean) * (v - mean);
  var /= static_cast<double>(fd.train_y.size());
  const double stdev = var > 0.0 ? std::sqrt(var) : 1.0;
  if (y_mean_out) *y_mean_out = mean;
  if (y_std_out) *y_std_out = stdev;

  std::vector<double> ty(fd.train_y.size());
  for (std::size_t i = 0; i < ty.size(); ++i) ty[i] = (fd.train_y[i] - mean) / stdev;

  nn::AdamState<float> adam;
  double lr = hp.lr;
  nn::TrainSchedule sched;
  sched.initial_lr = hp.lr;
  sched.plateau_patience = 4;
  sched.early_stop_patience = 10;
  std::vector<double> history;
  std::vector<nn::Tensorf> best;
  double best_val = std::numeric_limits<double>::infinity();

  for (int e = 0; e < epochs; ++e) {
    mlp.run_epoch(fd.train_rows, ty, true, lr, adam, batch);
    std::vector<double> pred = mlp.predict(fd.val_rows);
    double se = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
      const double err = (pred[i] * stdev + mean) - fd.val_y[i];
      se += err * err;
    }
    const double val_rmse = std::sqrt(se / static_cast<double>(pred.size()));
    history.push_back(val_rmse);
    if (val_rmse < best_val) {
      best_val = val_rmse;
      best = mlp.snapshot();
    }
    const nn::ScheduleAction action = nn::schedule_update(sched, history);
    if (action == nn::ScheduleAction::reduce_lr) lr *= sched.lr_factor;
    if (action == nn::ScheduleAction::stop) break;
  }
  if (!best.empty()) mlp.restore(best);
  return best_val;
}

}  // namespace

std::vector<int> fold_assignment(std::size_t n, int folds, std::uint64_t seed) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng = nn::rng_stream(seed, 0xF01Dull);
  nn::shuffle_indices(order, rng);
  std::vector<int> assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    assign[order[i]] = static_cast<int>(i % static_cast<std::size_t>(folds));
  }
  return assign;
}

SearchResult random_search(const FeatureMatrix& features, const std::vector<double>& targets,
                           const SearchOptions& opts) {
  if (opts.n_trials < 1) throw std::invalid_argument("random_search: n_trials >= 1");
  SearchResult result;
  result.trials.resize(opts.n_trials);

  const std::vector<int> assign = fold_assignment(targets.size(), opts.folds, opts.seed);
  nn::parallel_chunks(opts.n_trials, 1, [&](std::size_t t, std::size_t, std::size_t) {
    std::mt19937_64 rng = nn::rng_stream(opts.seed, 0x7121ull, t);
    TrialResult trial;
    trial.params = sample_hyperparams(rng);
    double sum = 0.0;
    for (int f = 0; f < opts.folds; ++f) {
      const FoldData fd = make_fold(features, targets, assign, f);
      MlpRegressor mlp(features.dim, trial.params,
                       nn::splitmix64(opts.seed ^ (t * 1000 + f)));
      const double val = train_one(mlp, fd, trial.params, opts.epochs, opts.batch,
                                   nullptr, nullptr);
      trial.fold_rmse.push_back(val);
      sum += val;
    }
    trial.cv_rmse = sum / static_cast<double>(opts.folds);
    result.trials[t] = std::move(trial);
  });

  result.best_index = 0;
  for (int t = 1; t < opts.n_trials; ++t) {
    if (result.trials[t].cv_rmse < result.trials[result.best_index].cv_rmse) {
      result.best_index = t;
    }
  }
  result.best = result.trials[result.best_index].params;
  return result;
}

QsarResult train_eval(const FeatureMatrix& train_x, const std::vector<double>& train_y,
                      const FeatureMatrix& test_x, const std::vector<double>& test_y,
                      const HyperParams& hp, const EvalOptions& opts) {
  const std::vector<int> assign = fold_assignment(train_y.size(), opts.folds, opts.seed);
  std::vector<const std::vector<float>*> test_rows;
  for (const auto& r : test_x.rows) test_rows.push_back(&r);

  QsarResult result;
  result.fold_val_rmse.resize(opts.folds);
  std::vector<std::vector<double>> fold_preds(opts.folds);
  nn::parallel_chunks(opts.folds, 1, [&](std::size_t f, std::size_t, std::size_t) {
    const FoldData fd = make_fold(train_x, train_y, assign, static_cast<int>(f));
    MlpRegressor mlp(train_x.dim, hp, nn::splitmix64(opts.seed ^ (0xE0 + f)));
    double mean = 0.0, stdev = 1.0;
    result.fold_val_rmse[f] =
        train_one(mlp, fd, hp, opts.epochs, opts.batch, &mean, &stdev);
    std::vector<double> pred = mlp.predict(test_rows);
    for (double& p : pred) p = p * stdev + mean;
    fold_preds[f] = std::move(pred);
  });

  // Ensemble = exact arithmetic mean of the fold predictions.
  result.predictions.assign(test_rows.size(), 0.0);
  for (int f = 0; f < opts.folds; ++f) {
    for (std::size_t i = 0; i < result.predictions.size(); ++i) {
      result.predictions[i] += fold_preds[f][i];
    }
  }
  for (double& p : result.predictions) p /= static_cast<double>(opts.folds);
  result.fold_predictions = std::move(fold_preds);

  result.rmse = rmse(result.predictions, test_y);
  if (auto r2 = squared_correlation(result.predictions, test_y)) {
    result.r2 = *r2;
  } else {
    result.degenerate = true;
  }
  return result;
}

std::optional<double> squared_correlation(const std::vector<double>& pred,
                                          const std::vector<double>& truth) {
  try {
    return sim::pearson_r2(pred, truth);
  } catch (const std::invalid_argument&) {
    return std::nullopt;
  }
}

double rmse(const std::vector<double>& pred, const std::vector<double>& truth) {
  double se = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    se += (pred[i] - truth[i]) * (pred[i] - truth[i]);
  }
  return std::sqrt(se / static_cast<double>(pred.size()));
}

}  // namespace hetenc::qsar
