#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hetenc/data/qsar_table.hpp"
#include "hetenc/encdec/model.hpp"

namespace hetenc::qsar {

enum class FeatureKind { ecfp4_1024, latent };

FeatureKind feature_kind_from_string(const std::string& s);
std::string to_string(FeatureKind k);

struct FeatureMatrix {
  FeatureKind kind = FeatureKind::ecfp4_1024;
  std::size_t dim = 0;
  std::vector<std::vector<float>> rows;  // aligned with the table records
};

// One feature row per table record: 1024-bit radius-2 circular fingerprints
// as 0/1, or bottleneck activations from a trained model.
FeatureMatrix featurize(const data::QsarTable& table, FeatureKind kind,
                        const encdec::SeqModel* model = nullptr);

// Search space bounds (reduced preset: batch normalization off, optimizers
// limited to adam/sgd — the regressor backend does not implement the rest).
struct HyperParams {
  double input_dropout = 0.0;   // [0, 0.95]
  int units = 64;               // [2, 1024]
  double l2 = 1e-4;             // [1e-6, 0.1], log-uniform
  double maxnorm = 3.0;         // [0.5, 6]
  std::string init = "glorot_uniform";
  bool batch_norm = false;
  std::string activation = "relu";  // relu | selu
  double dropout = 0.0;         // [0, 0.95]
  int hidden_layers = 1;        // [1, 6]
  double lr = 1e-3;             // [1e-5, 0.1], log-uniform
  std::string optimizer = "adam";  // adam | sgd

  std::string to_json() const;
};

// Uniform draw from the bounds (log-uniform for lr and l2).
HyperParams sample_hyperparams(std::mt19937_64& rng);

struct TrialResult {
  HyperParams params;
  double cv_rmse = 0.0;
  std::vector<double> fold_rmse;
};

struct SearchOptions {
  int n_trials = 30;
  int folds = 3;
  int epochs = 60;
  std::size_t batch = 64;
  std::uint64_t seed = 1;
};

struct SearchResult {
  HyperParams best;
  std::vector<TrialResult> trials;  // trial order, deterministic under seed
  int best_index = -1;
};

// Seeded random search minimizing mean k-fold CV RMSE on the training rows.
SearchResult random_search(const FeatureMatrix& features, const std::vector<double>& targets,
                           const SearchOptions& opts);

struct QsarResult {
  double r2 = 0.0;
  double rmse = 0.0;
  bool degenerate = false;  // target variance was zero; r2 undefined
  std::vector<double> fold_val_rmse;
  std::vector<double> predictions;  // ensemble predictions on the test rows
  std::vector<std::vector<double>> fold_predictions;  // per fold, on the test rows
};

struct EvalOptions {
  int folds = 10;
  int epochs = 60;
  std::size_t batch = 64;
  std::uint64_t seed = 1;
};

// k-fold ensemble: each fold model trains on k-1 folds; the test prediction
// is the arithmetic mean of the fold models' predictions.
QsarResult train_eval(const FeatureMatrix& train_x, const std::vector<double>& train_y,
                      const FeatureMatrix& test_x, const std::vector<double>& test_y,
                      const HyperParams& hp, const EvalOptions& opts);

// Deterministic fold assignment: disjoint, exhaustive, seeded.
std::vector<int> fold_assignment(std::size_t n, int folds, std::uint64_t seed);

// Plain r2 / rmse helpers (degenerate -> nullopt r2).
std::optional<double> squared_correlation(const std::vector<double>& pred,
                                          const std::vector<double>& truth);
double rmse(const std::vector<double>& pred, const std::vector<double>& truth);

}  // namespace hetenc::qsar
