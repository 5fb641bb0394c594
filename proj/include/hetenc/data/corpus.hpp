#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "hetenc/chem/mol_graph.hpp"

namespace hetenc::data {

struct CorpusRecord {
  std::string id;
  std::string canonical;
  chem::MolGraph mol;
};

struct Corpus {
  std::vector<CorpusRecord> records;
  std::string provenance;

  std::size_t size() const { return records.size(); }
};

struct LoadReport {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::size_t duplicates = 0;
  std::vector<std::string> messages;  // one per rejected line, capped
};

// Reads a SMILES list: one per line, '#' comments ignored, trailing
// whitespace stripped. Unparseable lines (including out-of-set elements) are
// reported and skipped, canonical duplicates dropped.
Corpus load_smiles_file(const std::string& path, LoadReport* report = nullptr);

// Builds a corpus from in-memory SMILES (same reporting rules).
Corpus corpus_from_smiles(const std::vector<std::string>& smiles, const std::string& provenance,
                          LoadReport* report = nullptr);

void write_smiles_file(const std::string& path, const Corpus& corpus,
                       const std::string& comment = "");

// Deterministic shuffle split; disjoint and exhaustive.
std::pair<Corpus, Corpus> split(const Corpus& corpus, double ratio, std::uint64_t seed);

enum class Side { canonical, enumerated };

struct DataMode {
  Side encoder = Side::canonical;
  Side decoder = Side::canonical;

  static DataMode parse(const std::string& name);  // can2can, enum2can, ...
  std::string name() const;
};

// One (input, target) SMILES pair per record; enumerated sides are fresh
// independent draws from the given stream.
std::vector<std::pair<std::string, std::string>> make_pairs(const Corpus& corpus,
                                                            const DataMode& mode,
                                                            std::mt19937_64& rng);

}  // namespace hetenc::data
