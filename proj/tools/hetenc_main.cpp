#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "hetenc/analysis/evaluate.hpp"
#include "hetenc/analysis/pca.hpp"
#include "hetenc/chem/smiles.hpp"
#include "hetenc/data/corpus.hpp"
#include "hetenc/data/generator.hpp"
#include "hetenc/data/pipeline.hpp"
#include "hetenc/data/qsar_table.hpp"
#include "hetenc/encdec/train.hpp"
#include "hetenc/nn/checkpoint.hpp"
#include "hetenc/qsar/qsar.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace hetenc;

namespace {

constexpr const char* kVersion = "hetenc 0.1.0";

std::string error_kind(const std::exception& e) {
  if (auto* ce = dynamic_cast<const chem::ChemError*>(&e)) {
    return std::string(chem::to_string(ce->kind()));
  }
  if (auto* ee = dynamic_cast<const encdec::EncdecError*>(&e)) {
    switch (ee->kind()) {
      case encdec::EncdecErrorKind::TokenNotInCharset: return "TokenNotInCharset";
      case encdec::EncdecErrorKind::SequenceTooLong: return "SequenceTooLong";
      case encdec::EncdecErrorKind::InvalidConfig: return "InvalidConfig";
    }
  }
  if (auto* ke = dynamic_cast<const nn::CheckpointError*>(&e)) {
    return ke->kind() == nn::CheckpointErrorKind::CorruptCheckpoint ? "CorruptCheckpoint"
                                                                    : "VersionMismatch";
  }
  if (dynamic_cast<const data::MalformedCsv*>(&e)) return "MalformedCsv";
  return "RuntimeError";
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string config_hash(const json& config) {
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a(config.dump())));
  return buf;
}

void write_manifest(const std::string& out_dir, const std::string& command, const json& config,
                    std::uint64_t seed, const std::vector<std::string>& outputs) {
  json m;
  m["tool"] = kVersion;
  m["command"] = command;
  m["config"] = config;
  m["config_hash"] = config_hash(config);
  m["seed"] = seed;
  m["outputs"] = outputs;
  std::ofstream os(fs::path(out_dir) / "run_manifest.json", std::ios::trunc);
  os << m.dump(2) << "\n";
}

std::string provenance_comment(const json& config, std::uint64_t seed) {
  return "seed=" + std::to_string(seed) + " config_hash=" + config_hash(config);
}

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open input file: " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(is, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t')) {
      line.pop_back();
    }
    if (line.empty() || line[0] == '#') continue;
    lines.push_back(line);
  }
  return lines;
}

struct TrainArgs {
  std::string config_file;
  std::string train_file, test_file, mode = "can2can", preset = "gdb-small", out_dir;
  int epochs = 300;
  double lr = 0.0;  // 0 -> preset default
  std::size_t batch = 256;
  std::uint64_t seed = 1;
  std::size_t max_len = 0;  // 0 -> auto from corpus
  int early_stop = 0;
  bool verbose = false;
};

void apply_config_file(TrainArgs& a) {
  if (a.config_file.empty()) return;
  std::ifstream is(a.config_file);
  if (!is) throw std::runtime_error("cannot open config file: " + a.config_file);
  json j = json::parse(is);
  if (j.contains("train")) a.train_file = j["train"].get<std::string>();
  if (j.contains("test")) a.test_file = j["test"].get<std::string>();
  if (j.contains("mode")) a.mode = j["mode"].get<std::string>();
  if (j.contains("preset")) a.preset = j["preset"].get<std::string>();
  if (j.contains("epochs")) a.epochs = j["epochs"].get<int>();
  if (j.contains("lr")) a.lr = j["lr"].get<double>();
  if (j.contains("batch")) a.batch = j["batch"].get<std::size_t>();
  if (j.contains("seed")) a.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("max_len")) a.max_len = j["max_len"].get<std::size_t>();
  if (j.contains("early_stop")) a.early_stop = j["early_stop"].get<int>();
  if (j.contains("out_dir")) a.out_dir = j["out_dir"].get<std::string>();
}

int cmd_prep(int generate_atoms, const std::string& input, const std::string& out_dir,
             double ratio, std::uint64_t seed, bool qsar_surrogate) {
  fs::create_directories(out_dir);
  data::LoadReport report;
  data::Corpus corpus;
  if (generate_atoms > 0) {
    const std::vector<std::string> smiles = data::generate_molecules(generate_atoms);
    corpus = data::corpus_from_smiles(smiles, "generated<=" + std::to_string(generate_atoms),
                                      &report);
  } else {
    corpus = data::load_smiles_file(input, &report);
  }
  std::printf("corpus: %zu molecules (%zu rejected, %zu duplicates)\n", corpus.size(),
              report.rejected, report.duplicates);
  for (const std::string& msg : report.messages) std::printf("  rejected %s\n", msg.c_str());

  json config{{"generate", generate_atoms}, {"input", input}, {"ratio", ratio},
              {"qsar_surrogate", qsar_surrogate}};
  const std::string comment = provenance_comment(config, seed);
  data::write_smiles_file((fs::path(out_dir) / "corpus.smi").string(), corpus, comment);
  auto [train, test] = data::split(corpus, ratio, seed);
  data::write_smiles_file((fs::path(out_dir) / "train.smi").string(), train, comment);
  data::write_smiles_file((fs::path(out_dir) / "test.smi").string(), test, comment);
  std::printf("split: %zu train / %zu test\n", train.size(), test.size());

  std::vector<std::string> outputs{"corpus.smi", "train.smi", "test.smi"};
  if (qsar_surrogate) {
    // Row counts and value spans follow the published dataset descriptions.
    data::QsarTable sol = data::make_surrogate_table(corpus, 1297, "solubility", -11.6, 1.6, seed);
    data::write_qsar_csv((fs::path(out_dir) / "solubility.csv").string(), sol, false);
    data::QsarTable bcf = data::make_surrogate_table(corpus, 541, "bcf", -1.7, 5.7, seed + 1);
    data::write_qsar_csv((fs::path(out_dir) / "bcf.csv").string(), bcf, true);
    outputs.push_back("solubility.csv");
    outputs.push_back("bcf.csv");
    std::printf("surrogate QSAR tables: solubility (%zu), bcf (%zu)\n", sol.size(), bcf.size());
  }
  write_manifest(out_dir, "prep", config, seed, outputs);
  return 0;
}

int cmd_train(TrainArgs a) {
  apply_config_file(a);
  if (a.train_file.empty() || a.out_dir.empty()) {
    throw std::runtime_error("train needs --train and --out-dir (or a config file)");
  }
  fs::create_directories(a.out_dir);
  const data::Corpus train = data::load_smiles_file(a.train_file);
  data::Corpus test;
  if (!a.test_file.empty()) test = data::load_smiles_file(a.test_file);
  const data::DataMode mode = data::DataMode::parse(a.mode);

  encdec::ModelConfig cfg = encdec::preset_config(a.preset);
  const encdec::Tokenizer tk = data::build_model_tokenizer(train);
  cfg.charset = tk.tokens();
  cfg.seed = a.seed;
  cfg.max_len = a.max_len > 0 ? a.max_len : data::auto_max_len(tk, train, test);

  encdec::SeqModel model = encdec::build_model<float>(cfg);
  std::printf("model: %zu parameters, charset %zu, max_len %zu\n", model.parameter_count(),
              cfg.charset_size(), cfg.max_len);

  encdec::TrainOptions opts;
  opts.epochs = a.epochs;
  opts.batch_size = a.batch;
  opts.seed = a.seed;
  opts.verbose = a.verbose;
  opts.schedule.initial_lr = a.lr > 0.0 ? a.lr : encdec::preset_initial_lr(a.preset);
  opts.schedule.early_stop_patience = a.early_stop;

  std::mt19937_64 test_rng = nn::rng_stream(a.seed, 0x7E57ull);
  const auto test_pairs = test.records.empty()
                              ? std::vector<std::pair<std::string, std::string>>{}
                              : data::make_pairs_bounded(test, mode, test_rng, tk, cfg.max_len);
  auto provider = [&](int epoch) {
    std::mt19937_64 rng = nn::rng_stream(a.seed, 0xDA7Aull, static_cast<std::uint64_t>(epoch));
    return data::make_pairs_bounded(train, mode, rng, tk, cfg.max_len);
  };

  const encdec::TrainLog log = encdec::train_model(model, provider, test_pairs, opts);

  json config{{"mode", a.mode},     {"preset", a.preset}, {"epochs", a.epochs},
              {"lr", opts.schedule.initial_lr}, {"batch", a.batch},   {"max_len", cfg.max_len},
              {"train", a.train_file}, {"test", a.test_file}, {"early_stop", a.early_stop}};
  const std::string ckpt = (fs::path(a.out_dir) / "model.ckpt").string();
  encdec::save_model(model, ckpt);
  std::ofstream(fs::path(a.out_dir) / "train_log.csv", std::ios::trunc)
      << log.to_csv(provenance_comment(config, a.seed));
  write_manifest(a.out_dir, "train", config, a.seed, {"model.ckpt", "train_log.csv"});
  if (!log.epochs.empty()) {
    std::printf("final: train %.6f test %.6f (%zu epochs)\n", log.epochs.back().train_loss,
                log.epochs.back().test_loss, log.epochs.size());
  }
  return 0;
}

int cmd_encode(const std::string& model_path, const std::string& input,
               const std::string& out_file) {
  const encdec::SeqModel model = encdec::load_model(model_path);
  const encdec::Tokenizer tk = encdec::Tokenizer::from_tokens(model.cfg.charset);
  const std::vector<std::string> smiles = read_lines(input);
  std::ofstream os(out_file, std::ios::trunc);
  if (!os) throw std::runtime_error("cannot write: " + out_file);
  os << "# model_config_hash=" << config_hash(json::parse(model.cfg.to_json()))
     << " seed=" << model.cfg.seed << "\n";
  os << "id";
  for (std::size_t d = 0; d < model.cfg.bottleneck_dim; ++d) os << ",z" << d;
  os << "\n";
  char buf[32];
  for (std::size_t i = 0; i < smiles.size(); ++i) {
    const std::vector<float> z = encdec::encode_smiles(model, tk, smiles[i]);
    os << "s" << i;
    for (float v : z) {
      std::snprintf(buf, sizeof(buf), ",%.9g", static_cast<double>(v));
      os << buf;
    }
    os << "\n";
  }
  std::printf("encoded %zu sequences -> %s\n", smiles.size(), out_file.c_str());
  return 0;
}

int cmd_decode(const std::string& model_path, const std::string& input,
               const std::string& out_file) {
  const encdec::SeqModel model = encdec::load_model(model_path);
  std::ifstream is(input);
  if (!is) throw std::runtime_error("cannot open input file: " + input);
  std::ofstream os(out_file, std::ios::trunc);
  if (!os) throw std::runtime_error("cannot write: " + out_file);
  std::string line;
  std::size_t count = 0;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#' || line.rfind("id,", 0) == 0) continue;
    std::vector<float> z;
    std::size_t pos = line.find(',');
    while (pos != std::string::npos) {
      const std::size_t next = line.find(',', pos + 1);
      z.push_back(std::stof(line.substr(pos + 1, next - pos - 1)));
      pos = next;
    }
    const encdec::DecodeResult dec = encdec::decode_greedy(model, z);
    os << dec.smiles << "\n";
    ++count;
  }
  std::printf("decoded %zu latents -> %s\n", count, out_file.c_str());
  return 0;
}

int cmd_sample(const std::string& model_path, const std::string& smiles, int n, double t,
               std::uint64_t seed, const std::string& out_dir) {
  fs::create_directories(out_dir);
  const encdec::SeqModel model = encdec::load_model(model_path);
  std::vector<encdec::DecodeResult> heatmaps;
  std::vector<std::string> samples;
  const analysis::SamplingStats stats =
      analysis::sampling_stats(model, smiles, n, t, seed, &heatmaps, 2, &samples);
  json config{{"smiles", smiles}, {"n", n}, {"temperature", t}, {"model", model_path}};
  const std::string comment = provenance_comment(config, seed);
  std::ofstream(fs::path(out_dir) / "sampling_stats.json", std::ios::trunc)
      << analysis::sampling_stats_to_json(stats) << "\n";
  {
    std::ofstream so(fs::path(out_dir) / "samples.smi", std::ios::trunc);
    so << "# " << comment << "\n";
    for (const std::string& s : samples) so << s << "\n";
  }
  std::vector<std::string> outputs{"sampling_stats.json", "samples.smi"};
  for (std::size_t i = 0; i < heatmaps.size(); ++i) {
    const std::string name = "heatmap_" + std::to_string(i) + ".csv";
    analysis::write_heatmap_csv((fs::path(out_dir) / name).string(), heatmaps[i],
                                model.cfg.charset, comment);
    outputs.push_back(name);
  }
  write_manifest(out_dir, "sample", config, seed, outputs);
  std::printf("%d samples: %d unique SMILES, %.1f%% correct, %d unique molecules\n", n,
              stats.unique_smiles, stats.pct_correct_molecule, stats.unique_molecules);
  return 0;
}

int cmd_challenge(const std::string& model_path, const std::string& test_file, int molecules,
                  int n_enum, std::uint64_t seed, const std::string& out_dir) {
  fs::create_directories(out_dir);
  const encdec::SeqModel model = encdec::load_model(model_path);
  const data::Corpus test = data::load_smiles_file(test_file);
  if (test.size() < static_cast<std::size_t>(molecules)) {
    throw std::runtime_error("test corpus smaller than the challenge molecule count");
  }
  const analysis::PcaModel pca = analysis::pca_fit(analysis::encode_corpus(model, test), 2);

  std::vector<std::size_t> order(test.size());
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng = nn::rng_stream(seed, 0xC0FEull);
  nn::shuffle_indices(order, rng);
  std::vector<chem::MolGraph> mols;
  for (int i = 0; i < molecules; ++i) mols.push_back(test.records[order[i]].mol);

  const analysis::ChallengeResult result =
      analysis::enumeration_challenge(model, mols, n_enum, pca, seed);
  json config{{"model", model_path}, {"test", test_file}, {"molecules", molecules},
              {"n_enum", n_enum}};
  const std::string comment = provenance_comment(config, seed);
  analysis::write_challenge_csv((fs::path(out_dir) / "challenge.csv").string(), result, comment);
  json stats{{"mean_intra_distance", result.mean_intra_distance},
             {"mean_inter_distance", result.mean_inter_distance},
             {"inter_intra_ratio", result.inter_intra_ratio}};
  std::ofstream(fs::path(out_dir) / "challenge_stats.json", std::ios::trunc)
      << stats.dump(2) << "\n";
  write_manifest(out_dir, "challenge", config, seed, {"challenge.csv", "challenge_stats.json"});
  std::printf("challenge: intra %.4f inter %.4f ratio %.2f\n", result.mean_intra_distance,
              result.mean_inter_distance, result.inter_intra_ratio);
  return 0;
}

int cmd_evaluate(const std::string& model_path, const std::string& test_file, int refs,
                 int taxonomy_sample, std::uint64_t seed, const std::string& out_dir,
                 bool dump_similarity) {
  fs::create_directories(out_dir);
  const encdec::SeqModel model = encdec::load_model(model_path);
  const data::Corpus test = data::load_smiles_file(test_file);

  std::vector<std::size_t> order(test.size());
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng = nn::rng_stream(seed, 0xEFA1ull);
  nn::shuffle_indices(order, rng);
  std::vector<std::size_t> ref_idx(order.begin(),
                                   order.begin() + std::min<std::size_t>(refs, test.size()));

  const analysis::CorrelationResult corr = analysis::similarity_correlations(model, test, ref_idx);
  json config{{"model", model_path}, {"test", test_file}, {"refs", refs},
              {"taxonomy_sample", taxonomy_sample}};
  const std::string comment = provenance_comment(config, seed);
  analysis::write_correlations_csv((fs::path(out_dir) / "correlations.csv").string(), corr,
                                   comment);

  data::Corpus sample = test;
  if (taxonomy_sample > 0 && sample.size() > static_cast<std::size_t>(taxonomy_sample)) {
    sample.records.erase(sample.records.begin() + taxonomy_sample, sample.records.end());
  }
  const analysis::TaxonomyResult tax = analysis::error_taxonomy(model, sample);
  std::ofstream(fs::path(out_dir) / "taxonomy.json", std::ios::trunc)
      << analysis::taxonomy_to_json(tax) << "\n";

  std::vector<std::string> outputs{"correlations.csv", "taxonomy.json"};
  if (dump_similarity && !ref_idx.empty()) {
    analysis::write_similarity_csv((fs::path(out_dir) / "similarity.csv").string(),
                                   analysis::similarity_rows(model, test, ref_idx[0]), comment);
    outputs.push_back("similarity.csv");
  }
  write_manifest(out_dir, "evaluate", config, seed, outputs);
  std::printf("correlations: r2_fp %.3f r2_seq %.3f; taxonomy: %d/%d correct, %d malformed\n",
              corr.mean_r2_fingerprint, corr.mean_r2_sequence, tax.correct, tax.n, tax.malformed);
  return 0;
}

int cmd_qsar(const std::string& table_file, const std::string& name, const std::string& features,
             const std::string& model_path, const std::string& hp_file, int trials, int folds,
             int eval_folds, int epochs, std::uint64_t seed, const std::string& out_dir) {
  fs::create_directories(out_dir);
  const data::QsarTable table = data::load_qsar(table_file, name);
  std::printf("table %s: %zu rows (%zu dropped)\n", name.c_str(), table.size(), table.dropped);

  std::optional<encdec::SeqModel> model;
  const qsar::FeatureKind kind = qsar::feature_kind_from_string(features);
  if (kind == qsar::FeatureKind::latent) {
    if (model_path.empty()) throw std::runtime_error("latent features need --model");
    model = encdec::load_model(model_path);
  }
  const qsar::FeatureMatrix all = qsar::featurize(table, kind, model ? &*model : nullptr);

  qsar::FeatureMatrix train_x{all.kind, all.dim, {}}, test_x{all.kind, all.dim, {}};
  std::vector<double> train_y, test_y;
  for (std::size_t i = 0; i < table.records.size(); ++i) {
    if (table.records[i].test) {
      test_x.rows.push_back(all.rows[i]);
      test_y.push_back(table.records[i].value);
    } else {
      train_x.rows.push_back(all.rows[i]);
      train_y.push_back(table.records[i].value);
    }
  }

  qsar::HyperParams hp;
  json search_log = json::array();
  if (!hp_file.empty()) {
    std::ifstream is(hp_file);
    if (!is) throw std::runtime_error("cannot open hp file: " + hp_file);
    json j = json::parse(is);
    hp.input_dropout = j.value("input_dropout", hp.input_dropout);
    hp.units = j.value("units", hp.units);
    hp.l2 = j.value("l2", hp.l2);
    hp.maxnorm = j.value("maxnorm", hp.maxnorm);
    hp.init = j.value("init", hp.init);
    hp.activation = j.value("activation", hp.activation);
    hp.dropout = j.value("dropout", hp.dropout);
    hp.hidden_layers = j.value("hidden_layers", hp.hidden_layers);
    hp.lr = j.value("lr", hp.lr);
    hp.optimizer = j.value("optimizer", hp.optimizer);
  } else {
    qsar::SearchOptions sopts;
    sopts.n_trials = trials;
    sopts.folds = folds;
    sopts.epochs = epochs;
    sopts.seed = seed;
    const qsar::SearchResult search = qsar::random_search(train_x, train_y, sopts);
    hp = search.best;
    for (const qsar::TrialResult& t : search.trials) {
      search_log.push_back({{"params", json::parse(t.params.to_json())},
                            {"cv_rmse", t.cv_rmse},
                            {"fold_rmse", t.fold_rmse}});
    }
  }

  qsar::EvalOptions eopts;
  eopts.folds = eval_folds;
  eopts.epochs = epochs;
  eopts.seed = seed;
  const qsar::QsarResult result = qsar::train_eval(train_x, train_y, test_x, test_y, hp, eopts);

  json config{{"table", table_file}, {"name", name},   {"features", features},
              {"model", model_path}, {"trials", trials}, {"folds", folds},
              {"eval_folds", eval_folds}, {"epochs", epochs}};
  json report;
  report["dataset"] = name;
  report["features"] = qsar::to_string(kind);
  report["n_train"] = train_y.size();
  report["n_test"] = test_y.size();
  report["dropped_rows"] = table.dropped;
  report["r2"] = result.r2;
  report["rmse"] = result.rmse;
  report["degenerate"] = result.degenerate;
  report["fold_val_rmse"] = result.fold_val_rmse;
  report["hyperparams"] = json::parse(hp.to_json());
  report["seed"] = seed;
  report["config_hash"] = config_hash(config);
  if (!search_log.empty()) report["search_trials"] = search_log;
  std::ofstream(fs::path(out_dir) / "qsar_report.json", std::ios::trunc)
      << report.dump(2) << "\n";
  {
    std::ofstream po(fs::path(out_dir) / "predictions.csv", std::ios::trunc);
    po << "# " << provenance_comment(config, seed) << "\n";
    po << "index,prediction,observed\n";
    char buf[64];
    for (std::size_t i = 0; i < result.predictions.size(); ++i) {
      std::snprintf(buf, sizeof(buf), "%zu,%.9g,%.9g\n", i, result.predictions[i], test_y[i]);
      po << buf;
    }
  }
  write_manifest(out_dir, "qsar", config, seed, {"qsar_report.json", "predictions.csv"});
  std::printf("qsar %s/%s: r2 %.3f rmse %.3f\n", name.c_str(), features.c_str(), result.r2,
              result.rmse);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Chemical auto-/heteroencoders: SMILES corpora, seq2seq training, latent-space "
               "evaluation and QSAR regression"};
  app.require_subcommand(1);

  // prep
  auto* prep = app.add_subcommand("prep", "generate or canonicalize a corpus and split it");
  int gen_atoms = 0;
  std::string prep_input, prep_out;
  double ratio = 0.9;
  std::uint64_t prep_seed = 1;
  bool qsar_surrogate = false;
  prep->add_option("--generate", gen_atoms, "enumerate all molecules up to N heavy atoms");
  prep->add_option("--input", prep_input, "input SMILES file (one per line)");
  prep->add_option("--out-dir", prep_out, "output directory")->required();
  prep->add_option("--split", ratio, "train fraction (default 0.9)");
  prep->add_option("--seed", prep_seed, "split seed");
  prep->add_flag("--qsar-surrogate", qsar_surrogate,
                 "also write offline surrogate QSAR tables (solubility, bcf)");

  // train
  auto* train = app.add_subcommand("train", "train an encoder-decoder on a corpus");
  TrainArgs ta;
  train->add_option("--config", ta.config_file, "JSON config (flags override)");
  train->add_option("--train", ta.train_file, "training SMILES file");
  train->add_option("--test", ta.test_file, "test SMILES file (loss monitoring)");
  train->add_option("--mode", ta.mode, "can2can|enum2can|can2enum|enum2enum");
  train->add_option("--preset", ta.preset, "gdb-small|gdb-2layer|large-bidi");
  train->add_option("--epochs", ta.epochs, "training epochs");
  train->add_option("--lr", ta.lr, "initial learning rate (default: preset)");
  train->add_option("--batch", ta.batch, "mini-batch size");
  train->add_option("--seed", ta.seed, "training seed");
  train->add_option("--max-len", ta.max_len, "sequence length incl. frame (0 = auto)");
  train->add_option("--early-stop", ta.early_stop, "early-stop patience (0 = off)");
  train->add_option("--out-dir", ta.out_dir, "output directory");
  train->add_flag("--verbose", ta.verbose, "per-epoch progress on stderr");

  // encode / decode
  auto* encode = app.add_subcommand("encode", "SMILES file -> latent CSV");
  std::string enc_model, enc_input, enc_out;
  encode->add_option("--model", enc_model)->required();
  encode->add_option("--input", enc_input)->required();
  encode->add_option("--out", enc_out)->required();

  auto* decode = app.add_subcommand("decode", "latent CSV -> SMILES (greedy)");
  std::string dec_model, dec_input, dec_out;
  decode->add_option("--model", dec_model)->required();
  decode->add_option("--input", dec_input)->required();
  decode->add_option("--out", dec_out)->required();

  // sample
  auto* sample = app.add_subcommand("sample", "multinomial sampling from one reference");
  std::string smp_model, smp_smiles, smp_out;
  int smp_n = 200;
  double smp_t = 1.0;
  std::uint64_t smp_seed = 1;
  sample->add_option("--model", smp_model)->required();
  sample->add_option("--smiles", smp_smiles, "reference SMILES")->required();
  sample->add_option("-n,--samples", smp_n, "sample count");
  sample->add_option("-t,--temperature", smp_t, "sampling temperature");
  sample->add_option("--seed", smp_seed);
  sample->add_option("--out-dir", smp_out)->required();

  // challenge
  auto* challenge = app.add_subcommand("challenge", "enumeration challenge PCA projection");
  std::string ch_model, ch_test, ch_out;
  int ch_mols = 3, ch_enum = 10;
  std::uint64_t ch_seed = 1;
  challenge->add_option("--model", ch_model)->required();
  challenge->add_option("--test", ch_test, "test SMILES file (PCA fit)")->required();
  challenge->add_option("--molecules", ch_mols, "number of challenge molecules");
  challenge->add_option("--n-enum", ch_enum, "enumerations per molecule");
  challenge->add_option("--seed", ch_seed);
  challenge->add_option("--out-dir", ch_out)->required();

  // evaluate
  auto* evaluate = app.add_subcommand("evaluate", "similarity correlations + error taxonomy");
  std::string ev_model, ev_test, ev_out;
  int ev_refs = 25, ev_sample = 1000;
  std::uint64_t ev_seed = 1;
  bool ev_dump = false;
  evaluate->add_option("--model", ev_model)->required();
  evaluate->add_option("--test", ev_test)->required();
  evaluate->add_option("--refs", ev_refs, "number of reference molecules");
  evaluate->add_option("--taxonomy-sample", ev_sample, "records to classify (0 = all)");
  evaluate->add_option("--seed", ev_seed);
  evaluate->add_flag("--dump-similarity", ev_dump, "write per-pair similarity.csv for ref 0");
  evaluate->add_option("--out-dir", ev_out)->required();

  // qsar
  auto* qsar_cmd = app.add_subcommand("qsar", "QSAR regression on fingerprints or latents");
  std::string q_table, q_name = "dataset", q_features = "ecfp4", q_model, q_hp, q_out;
  int q_trials = 30, q_folds = 3, q_eval_folds = 10, q_epochs = 60;
  std::uint64_t q_seed = 1;
  qsar_cmd->add_option("--table", q_table, "CSV with smiles,value[,split]")->required();
  qsar_cmd->add_option("--name", q_name, "dataset label");
  qsar_cmd->add_option("--features", q_features, "ecfp4|latent");
  qsar_cmd->add_option("--model", q_model, "checkpoint for latent features");
  qsar_cmd->add_option("--hp-json", q_hp, "reuse hyperparameters instead of searching");
  qsar_cmd->add_option("--trials", q_trials, "random-search trials");
  qsar_cmd->add_option("--folds", q_folds, "search CV folds");
  qsar_cmd->add_option("--eval-folds", q_eval_folds, "ensemble folds");
  qsar_cmd->add_option("--epochs", q_epochs, "regressor epochs");
  qsar_cmd->add_option("--seed", q_seed);
  qsar_cmd->add_option("--out-dir", q_out)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (prep->parsed()) {
      if (gen_atoms <= 0 && prep_input.empty()) {
        std::fprintf(stderr, "{\"error\":\"usage\",\"message\":\"prep needs --generate or --input\"}\n");
        return 2;
      }
      return cmd_prep(gen_atoms, prep_input, prep_out, ratio, prep_seed, qsar_surrogate);
    }
    if (train->parsed()) return cmd_train(ta);
    if (encode->parsed()) return cmd_encode(enc_model, enc_input, enc_out);
    if (decode->parsed()) return cmd_decode(dec_model, dec_input, dec_out);
    if (sample->parsed()) return cmd_sample(smp_model, smp_smiles, smp_n, smp_t, smp_seed, smp_out);
    if (challenge->parsed()) {
      return cmd_challenge(ch_model, ch_test, ch_mols, ch_enum, ch_seed, ch_out);
    }
    if (evaluate->parsed()) {
      return cmd_evaluate(ev_model, ev_test, ev_refs, ev_sample, ev_seed, ev_out, ev_dump);
    }
    if (qsar_cmd->parsed()) {
      return cmd_qsar(q_table, q_name, q_features, q_model, q_hp, q_trials, q_folds,
                      q_eval_folds, q_epochs, q_seed, q_out);
    }
  } catch (const std::exception& e) {
    json err{{"error", error_kind(e)}, {"message", e.what()}};
    std::fprintf(stderr, "%s\n", err.dump().c_str());
    return 1;
  }
  return 0;
}
