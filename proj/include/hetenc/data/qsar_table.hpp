#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hetenc/data/corpus.hpp"

namespace hetenc::data {

class MalformedCsv : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct QsarRecord {
  std::string smiles;
  double value = 0.0;
  bool test = false;
};

struct QsarTable {
  std::string name;
  std::vector<QsarRecord> records;
  std::size_t dropped = 0;  // rows with unparseable SMILES

  std::size_t size() const { return records.size(); }
  std::pair<double, double> value_span() const;
};

// CSV with header (smiles, value[, split]); split entries are "train"/"test".
// Rows without a split label get a deterministic 75/25 split; rows whose
// SMILES does not parse are counted in `dropped` and skipped.
QsarTable load_qsar(const std::string& path, const std::string& name,
                    std::uint64_t split_seed = 17);

void write_qsar_csv(const std::string& path, const QsarTable& table, bool with_split);

// Offline stand-in for the EPA/solubility tables: molecules drawn from a
// generated corpus, endpoint = a structure-derived score plus seeded noise,
// affinely mapped onto [span_lo, span_hi]. Real datasets are fetched by
// scripts/fetch_qsar_datasets.sh; the surrogate keeps the pipeline testable
// without network access.
QsarTable make_surrogate_table(const Corpus& corpus, std::size_t n_molecules,
                               const std::string& name, double span_lo, double span_hi,
                               std::uint64_t seed);

}  // namespace hetenc::data
