#include "hetenc/analysis/evaluate.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>

#include <json.hpp>

#include "hetenc/chem/descriptors.hpp"
#include "hetenc/chem/smiles.hpp"
#include "hetenc/encdec/onehot.hpp"
#include "hetenc/nn/rng.hpp"
#include "hetenc/sim/align.hpp"
#include "hetenc/sim/fingerprint.hpp"
#include "hetenc/sim/metrics.hpp"

namespace hetenc::analysis {

using nlohmann::json;

namespace {

double euclidean(std::span<const double> a, std::span<const double> b) {
  double sq = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    sq += d * d;
  }
  return std::sqrt(sq);
}

std::vector<double> encode_one(const encdec::SeqModel& model, const encdec::Tokenizer& tk,
                               const std::string& smiles) {
  std::vector<float> z = encdec::encode_smiles(model, tk, smiles);
  return std::vector<double>(z.begin(), z.end());
}

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw std::runtime_error("cannot write: " + path);
  return os;
}

}  // namespace

std::vector<std::vector<double>> encode_corpus(const encdec::SeqModel& model,
                                               const data::Corpus& corpus) {
  const encdec::Tokenizer tk = encdec::Tokenizer::from_tokens(model.cfg.charset);
  std::vector<std::vector<int>> ids;
  ids.reserve(corpus.size());
  for (const data::CorpusRecord& r : corpus.records) ids.push_back(tk.encode(r.canonical));
  nn::Tensorf x = encdec::one_hot_full<float>(ids, model.cfg.max_len, model.cfg.charset_size());
  nn::Tensorf z = encode_batch(model, x);
  std::vector<std::vector<double>> out(corpus.size());
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    out[i].assign(z.data() + i * model.cfg.bottleneck_dim,
                  z.data() + (i + 1) * model.cfg.bottleneck_dim);
  }
  return out;
}

ChallengeResult enumeration_challenge(const encdec::SeqModel& model,
                                      const std::vector<chem::MolGraph>& molecules,
                                      int n_enum, const PcaModel& pca, std::uint64_t seed) {
  const encdec::Tokenizer tk = encdec::Tokenizer::from_tokens(model.cfg.charset);
  ChallengeResult result;
  std::vector<std::vector<std::vector<double>>> latents(molecules.size());

  for (std::size_t m = 0; m < molecules.size(); ++m) {
    ChallengeMolecule cm;
    cm.smiles = chem::write_canonical(molecules[m]);
    // Stream keyed on the molecule itself so the dispersion statistics do not
    // depend on presentation order.
    std::uint64_t tag = 0xC4A1ull;
    for (unsigned char c : cm.smiles) tag = tag * 131 + c;
    std::mt19937_64 rng = nn::rng_stream(seed, tag);
    std::set<std::string> forms;
    for (int i = 0; i < n_enum; ++i) {
      const std::string s = chem::write_random(molecules[m], rng);
      forms.insert(s);
      std::vector<double> z = encode_one(model, tk, s);
      std::vector<double> p = pca_project(pca, z);
      cm.points.push_back({p[0], p.size() > 1 ? p[1] : 0.0});
      latents[m].push_back(std::move(z));
    }
    double intra = 0.0;
    int pairs = 0;
    for (std::size_t i = 0; i < latents[m].size(); ++i) {
      for (std::size_t j = i + 1; j < latents[m].size(); ++j) {
        intra += euclidean(latents[m][i], latents[m][j]);
        ++pairs;
      }
    }
    cm.mean_intra_distance = pairs > 0 ? intra / pairs : 0.0;
    result.molecules.push_back(std::move(cm));
  }

  double intra_sum = 0.0;
  for (const ChallengeMolecule& cm : result.molecules) intra_sum += cm.mean_intra_distance;
  result.mean_intra_distance =
      result.molecules.empty() ? 0.0 : intra_sum / static_cast<double>(result.molecules.size());

  double inter = 0.0;
  int inter_pairs = 0;
  for (std::size_t a = 0; a < latents.size(); ++a) {
    for (std::size_t b = a + 1; b < latents.size(); ++b) {
      for (const auto& za : latents[a]) {
        for (const auto& zb : latents[b]) {
          inter += euclidean(za, zb);
          ++inter_pairs;
        }
      }
    }
  }
  result.mean_inter_distance = inter_pairs > 0 ? inter / inter_pairs : 0.0;
  result.inter_intra_ratio = result.mean_intra_distance > 0.0
                                 ? result.mean_inter_distance / result.mean_intra_distance
                                 : 0.0;
  return result;
}

void write_challenge_csv(const std::string& path, const ChallengeResult& result,
                         const std::string& comment) {
  std::ofstream os = open_out(path);
  if (!comment.empty()) os << "# " << comment << "\n";
  os << "molecule,x,y\n";
  char buf[96];
  for (const ChallengeMolecule& cm : result.molecules) {
    for (const auto& p : cm.points) {
      std::snprintf(buf, sizeof(buf), "%s,%.9g,%.9g\n", cm.smiles.c_str(), p[0], p[1]);
      os << buf;
    }
  }
}

namespace {

CorrelationResult correlations_impl(const data::Corpus& test,
                                    const std::vector<std::vector<double>>& latents,
                                    const std::vector<std::size_t>& refs) {
  std::vector<sim::Fingerprint> fps;
  fps.reserve(test.size());
  for (const data::CorpusRecord& r : test.records) {
    fps.push_back(sim::morgan_fingerprint(r.mol, 2, 2048));
  }
  CorrelationResult result;
  for (std::size_t ref : refs) {
    std::vector<double> lat, fp, seq;
    for (std::size_t i = 0; i < test.size(); ++i) {
      if (i == ref) continue;  // the self pair is the eps-clamp outlier
      lat.push_back(sim::latent_similarity(std::span<const double>(latents[ref]),
                                           std::span<const double>(latents[i])));
      fp.push_back(sim::tanimoto(fps[ref], fps[i]));
      seq.push_back(sim::align_score(test.records[ref].canonical, test.records[i].canonical));
    }
    ReferenceCorrelation rc;
    rc.ref_id = test.records[ref].id;
    rc.r2_fingerprint = sim::pearson_r2(lat, fp);
    rc.r2_sequence = sim::pearson_r2(lat, seq);
    result.references.push_back(rc);
    result.mean_r2_fingerprint += rc.r2_fingerprint;
    result.mean_r2_sequence += rc.r2_sequence;
  }
  if (!refs.empty()) {
    result.mean_r2_fingerprint /= static_cast<double>(refs.size());
    result.mean_r2_sequence /= static_cast<double>(refs.size());
  }
  return result;
}

}  // namespace

CorrelationResult similarity_correlations(const encdec::SeqModel& model,
                                          const data::Corpus& test,
                                          const std::vector<std::size_t>& reference_indices) {
  return correlations_impl(test, encode_corpus(model, test), reference_indices);
}

void write_correlations_csv(const std::string& path, const CorrelationResult& result,
                            const std::string& comment) {
  std::ofstream os = open_out(path);
  if (!comment.empty()) os << "# " << comment << "\n";
  os << "ref_id,r2_fingerprint,r2_sequence\n";
  char buf[96];
  for (const ReferenceCorrelation& rc : result.references) {
    std::snprintf(buf, sizeof(buf), "%s,%.9g,%.9g\n", rc.ref_id.c_str(), rc.r2_fingerprint,
                  rc.r2_sequence);
    os << buf;
  }
  std::snprintf(buf, sizeof(buf), "mean,%.9g,%.9g\n", result.mean_r2_fingerprint,
                result.mean_r2_sequence);
  os << buf;
}

std::vector<SimilarityRow> similarity_rows(const encdec::SeqModel& model,
                                           const data::Corpus& test, std::size_t reference) {
  const std::vector<std::vector<double>> latents = encode_corpus(model, test);
  const sim::Fingerprint ref_fp = sim::morgan_fingerprint(test.records[reference].mol, 2, 2048);
  std::vector<SimilarityRow> rows;
  for (std::size_t i = 0; i < test.size(); ++i) {
    if (i == reference) continue;
    SimilarityRow row;
    row.ref_id = test.records[reference].id;
    row.other_id = test.records[i].id;
    row.latent_sim = sim::latent_similarity(std::span<const double>(latents[reference]),
                                            std::span<const double>(latents[i]));
    row.fp_sim = sim::tanimoto(ref_fp, sim::morgan_fingerprint(test.records[i].mol, 2, 2048));
    row.seq_sim = sim::align_score(test.records[reference].canonical, test.records[i].canonical);
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_similarity_csv(const std::string& path, const std::vector<SimilarityRow>& rows,
                          const std::string& comment) {
  std::ofstream os = open_out(path);
  if (!comment.empty()) os << "# " << comment << "\n";
  os << "ref_id,other_id,latent_sim,fp_sim,seq_sim\n";
  char buf[128];
  for (const SimilarityRow& r : rows) {
    std::snprintf(buf, sizeof(buf), "%s,%s,%.9g,%.9g,%.9g\n", r.ref_id.c_str(),
                  r.other_id.c_str(), r.latent_sim, r.fp_sim, r.seq_sim);
    os << buf;
  }
}

ErrorClass classify_decode(const chem::MolGraph& input, const std::string& decoded) {
  ErrorClass cls;
  auto mol = chem::try_parse_smiles(decoded);
  if (!mol) {
    cls.malformed = true;
    return cls;
  }
  if (chem::same_molecule(input, *mol)) {
    cls.correct = true;
    return cls;
  }
  cls.wrong_scaffold = chem::scaffold_key(input) != chem::scaffold_key(*mol);
  cls.wrong_sum_formula = chem::sum_formula(input) != chem::sum_formula(*mol);
  cls.wrong_bond_formula = !(chem::bond_formula(input) == chem::bond_formula(*mol));
  if (!cls.wrong_scaffold && !cls.wrong_sum_formula && !cls.wrong_bond_formula) {
    cls.assembly_order_only = true;
  }
  return cls;
}

TaxonomyResult error_taxonomy(const encdec::SeqModel& model, const data::Corpus& sample) {
  const encdec::Tokenizer tk = encdec::Tokenizer::from_tokens(model.cfg.charset);
  TaxonomyResult result;
  for (const data::CorpusRecord& r : sample.records) {
    std::vector<float> z = encdec::encode_smiles(model, tk, r.canonical);
    const encdec::DecodeResult dec = encdec::decode_greedy(model, z);
    TaxonomyRecord rec{r.id, r.canonical, dec.smiles, classify_decode(r.mol, dec.smiles)};
    ++result.n;
    if (rec.cls.malformed) ++result.malformed;
    if (rec.cls.correct) ++result.correct;
    if (!rec.cls.malformed && !rec.cls.correct) {
      ++result.valid_but_wrong;
      if (rec.cls.wrong_scaffold) ++result.wrong_scaffold;
      if (rec.cls.wrong_sum_formula) ++result.wrong_sum_formula;
      if (rec.cls.wrong_bond_formula) ++result.wrong_bond_formula;
      if (rec.cls.assembly_order_only) ++result.assembly_order_only;
    }
    result.records.push_back(std::move(rec));
  }
  return result;
}

std::string taxonomy_to_json(const TaxonomyResult& result, bool include_records) {
  json j;
  j["n"] = result.n;
  j["malformed"] = result.malformed;
  j["correct"] = result.correct;
  j["valid_but_wrong"] = result.valid_but_wrong;
  j["wrong_scaffold"] = result.wrong_scaffold;
  j["wrong_sum_formula"] = result.wrong_sum_formula;
  j["wrong_bond_formula"] = result.wrong_bond_formula;
  j["assembly_order_only"] = result.assembly_order_only;
  if (include_records) {
    json recs = json::array();
    for (const TaxonomyRecord& r : result.records) {
      json e;
      e["id"] = r.id;
      e["input"] = r.input;
      e["decoded"] = r.decoded;
      const char* label = r.cls.malformed        ? "malformed_smiles"
                          : r.cls.correct        ? "correct"
                          : r.cls.assembly_order_only ? "assembly_order_only"
                                                      : "wrong";
      e["class"] = label;
      e["wrong_scaffold"] = r.cls.wrong_scaffold;
      e["wrong_sum_formula"] = r.cls.wrong_sum_formula;
      e["wrong_bond_formula"] = r.cls.wrong_bond_formula;
      recs.push_back(std::move(e));
    }
    j["records"] = std::move(recs);
  }
  return j.dump(2);
}

SamplingStats sampling_stats(const encdec::SeqModel& model, const std::string& reference,
                             int n, double temperature, std::uint64_t seed,
                             std::vector<encdec::DecodeResult>* heatmaps, int n_heatmaps,
                             std::vector<std::string>* samples_out) {
  const encdec::Tokenizer tk = encdec::Tokenizer::from_tokens(model.cfg.charset);
  const chem::MolGraph ref_mol = chem::parse_smiles(reference);
  const sim::Fingerprint ref_fp = sim::morgan_fingerprint(ref_mol, 2, 2048);
  const std::vector<float> z = encdec::encode_smiles(model, tk, reference);

  SamplingStats stats;
  stats.n_samples = n;
  std::set<std::string> smiles_set, correct_smiles_set, molecule_set;
  int correct = 0, valid = 0;
  double fp_sum = 0.0;
  std::mt19937_64 rng = nn::rng_stream(seed, 0x5A3Bull);
  for (int i = 0; i < n; ++i) {
    const bool record = heatmaps != nullptr && i < n_heatmaps;
    encdec::DecodeResult dec =
        encdec::decode_multinomial(model, z, temperature, rng, record);
    smiles_set.insert(dec.smiles);
    if (samples_out) samples_out->push_back(dec.smiles);
    if (auto mol = chem::try_parse_smiles(dec.smiles)) {
      ++valid;
      molecule_set.insert(chem::write_canonical(*mol));
      fp_sum += sim::tanimoto(ref_fp, sim::morgan_fingerprint(*mol, 2, 2048));
      if (chem::same_molecule(ref_mol, *mol)) {
        ++correct;
        correct_smiles_set.insert(dec.smiles);
      }
    }
    if (record) heatmaps->push_back(std::move(dec));
  }
  stats.unique_smiles = static_cast<int>(smiles_set.size());
  stats.pct_correct_molecule = 100.0 * static_cast<double>(correct) / static_cast<double>(n);
  stats.unique_smiles_for_correct = static_cast<int>(correct_smiles_set.size());
  stats.unique_molecules = static_cast<int>(molecule_set.size());
  stats.mean_fp_similarity = valid > 0 ? fp_sum / static_cast<double>(valid) : 0.0;
  return stats;
}

std::string sampling_stats_to_json(const SamplingStats& stats) {
  json j;
  j["n_samples"] = stats.n_samples;
  j["unique_smiles"] = stats.unique_smiles;
  j["pct_correct_molecule"] = stats.pct_correct_molecule;
  j["unique_smiles_for_correct"] = stats.unique_smiles_for_correct;
  j["unique_molecules"] = stats.unique_molecules;
  j["mean_fp_similarity"] = stats.mean_fp_similarity;
  return j.dump(2);
}

void write_heatmap_csv(const std::string& path, const encdec::DecodeResult& decode,
                       const std::vector<std::string>& charset, const std::string& comment) {
  std::ofstream os = open_out(path);
  if (!comment.empty()) os << "# " << comment << "\n";
  os << "step";
  for (const std::string& t : charset) os << "," << t;
  os << "\n";
  char buf[32];
  for (std::size_t s = 0; s < decode.step_probs.size(); ++s) {
    os << s;
    for (float p : decode.step_probs[s]) {
      std::snprintf(buf, sizeof(buf), ",%.6g", static_cast<double>(p));
      os << buf;
    }
    os << "\n";
  }
}

}  // namespace hetenc::analysis
