#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "hetenc/analysis/pca.hpp"
#include "hetenc/data/corpus.hpp"
#include "hetenc/encdec/model.hpp"

namespace hetenc::analysis {

// Latent vectors (as doubles) for every record of a corpus.
std::vector<std::vector<double>> encode_corpus(const encdec::SeqModel& model,
                                               const data::Corpus& corpus);

// --- Enumeration challenge --------------------------------------------------

struct ChallengeMolecule {
  std::string smiles;                           // canonical reference
  std::vector<std::array<double, 2>> points;    // PCA projections of the enumerations
  double mean_intra_distance = 0.0;             // pairwise latent distance
};

struct ChallengeResult {
  std::vector<ChallengeMolecule> molecules;
  double mean_intra_distance = 0.0;
  double mean_inter_distance = 0.0;  // across molecules
  double inter_intra_ratio = 0.0;
};

// Encodes n_enum random SMILES per molecule, projects them with `pca`
// (fitted on test-set latents) and reports latent-space dispersion.
ChallengeResult enumeration_challenge(const encdec::SeqModel& model,
                                      const std::vector<chem::MolGraph>& molecules,
                                      int n_enum, const PcaModel& pca, std::uint64_t seed);

void write_challenge_csv(const std::string& path, const ChallengeResult& result,
                         const std::string& comment);

// --- Similarity correlations ------------------------------------------------

struct ReferenceCorrelation {
  std::string ref_id;
  double r2_fingerprint = 0.0;
  double r2_sequence = 0.0;
};

struct CorrelationResult {
  std::vector<ReferenceCorrelation> references;
  double mean_r2_fingerprint = 0.0;
  double mean_r2_sequence = 0.0;
};

// For each reference: latent similarity, fingerprint Tanimoto and alignment
// score against every other test molecule (the self pair is excluded), then
// the squared correlations of latent-vs-fingerprint and latent-vs-sequence.
CorrelationResult similarity_correlations(const encdec::SeqModel& model,
                                          const data::Corpus& test,
                                          const std::vector<std::size_t>& reference_indices);

void write_correlations_csv(const std::string& path, const CorrelationResult& result,
                            const std::string& comment);

// Raw per-pair similarity rows for one reference (CSV dump support).
struct SimilarityRow {
  std::string ref_id, other_id;
  double latent_sim, fp_sim, seq_sim;
};
std::vector<SimilarityRow> similarity_rows(const encdec::SeqModel& model,
                                           const data::Corpus& test, std::size_t reference);
void write_similarity_csv(const std::string& path, const std::vector<SimilarityRow>& rows,
                          const std::string& comment);

// --- Reconstruction error taxonomy ------------------------------------------

struct ErrorClass {
  bool malformed = false;
  bool correct = false;
  bool assembly_order_only = false;
  bool wrong_scaffold = false;
  bool wrong_sum_formula = false;
  bool wrong_bond_formula = false;
};

// Pure classifier: decoded string against the input molecule.
ErrorClass classify_decode(const chem::MolGraph& input, const std::string& decoded);

struct TaxonomyRecord {
  std::string id;
  std::string input;
  std::string decoded;
  ErrorClass cls;
};

struct TaxonomyResult {
  std::vector<TaxonomyRecord> records;
  int n = 0;
  int malformed = 0;
  int correct = 0;
  int valid_but_wrong = 0;     // everything below sums into this
  int wrong_scaffold = 0;      // Venn totals (non-exclusive)
  int wrong_sum_formula = 0;
  int wrong_bond_formula = 0;
  int assembly_order_only = 0;
};

// Greedy-decodes every record (encode then decode) and classifies the result.
TaxonomyResult error_taxonomy(const encdec::SeqModel& model, const data::Corpus& sample);

std::string taxonomy_to_json(const TaxonomyResult& result, bool include_records = true);

// --- Multinomial sampling statistics ------------------------------------------

struct SamplingStats {
  int n_samples = 0;
  int unique_smiles = 0;
  double pct_correct_molecule = 0.0;
  int unique_smiles_for_correct = 0;
  int unique_molecules = 0;
  double mean_fp_similarity = 0.0;  // Tanimoto vs the reference, valid samples
};

// Samples n strings at the given temperature from the latent point of
// `reference`; `heatmaps` (optional) receives per-step probability rows for
// the first `n_heatmaps` samples.
SamplingStats sampling_stats(const encdec::SeqModel& model, const std::string& reference,
                             int n, double temperature, std::uint64_t seed,
                             std::vector<encdec::DecodeResult>* heatmaps = nullptr,
                             int n_heatmaps = 2,
                             std::vector<std::string>* samples_out = nullptr);

std::string sampling_stats_to_json(const SamplingStats& stats);

void write_heatmap_csv(const std::string& path, const encdec::DecodeResult& decode,
                       const std::vector<std::string>& charset, const std::string& comment);

}  // namespace hetenc::analysis
