#include "hetenc/data/corpus.hpp"

#include <fstream>
#include <numeric>
#include <set>
#include <stdexcept>

#include "hetenc/chem/descriptors.hpp"
#include "hetenc/chem/smiles.hpp"
#include "hetenc/nn/rng.hpp"

namespace hetenc::data {

namespace {

std::string strip(const std::string& line) {
  std::size_t end = line.size();
  while (end > 0 && (line[end - 1] == ' ' || line[end - 1] == '\t' || line[end - 1] == '\r' ||
                     line[end - 1] == '\n')) {
    --end;
  }
  return line.substr(0, end);
}

}  // namespace

Corpus corpus_from_smiles(const std::vector<std::string>& smiles, const std::string& provenance,
                          LoadReport* report) {
  Corpus corpus;
  corpus.provenance = provenance;
  std::set<std::string> seen;
  LoadReport local;
  LoadReport& rep = report ? *report : local;
  for (std::size_t i = 0; i < smiles.size(); ++i) {
    try {
      chem::MolGraph mol = chem::parse_smiles(smiles[i]);
      std::string canonical = chem::write_canonical(mol);
      if (!seen.insert(canonical).second) {
        ++rep.duplicates;
        continue;
      }
      corpus.records.push_back(
          {"m" + std::to_string(corpus.records.size()), std::move(canonical), std::move(mol)});
      ++rep.accepted;
    } catch (const chem::ChemError& e) {
      ++rep.rejected;
      if (rep.messages.size() < 50) {
        rep.messages.push_back("line " + std::to_string(i + 1) + ": " + e.what());
      }
    }
  }
  return corpus;
}

Corpus load_smiles_file(const std::string& path, LoadReport* report) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open SMILES file: " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(is, line)) {
    line = strip(line);
    if (line.empty() || line[0] == '#') continue;
    lines.push_back(line);
  }
  return corpus_from_smiles(lines, path, report);
}

void write_smiles_file(const std::string& path, const Corpus& corpus,
                       const std::string& comment) {
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw std::runtime_error("cannot write SMILES file: " + path);
  if (!comment.empty()) os << "# " << comment << "\n";
  for (const CorpusRecord& r : corpus.records) os << r.canonical << "\n";
}

std::pair<Corpus, Corpus> split(const Corpus& corpus, double ratio, std::uint64_t seed) {
  if (corpus.records.empty()) throw std::invalid_argument("split: empty corpus");
  if (ratio <= 0.0 || ratio >= 1.0) throw std::invalid_argument("split: ratio must be in (0,1)");
  std::vector<std::size_t> order(corpus.size());
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng = nn::rng_stream(seed, 0x5917ull);
  nn::shuffle_indices(order, rng);
  const std::size_t n_train = static_cast<std::size_t>(
      static_cast<double>(corpus.size()) * ratio + 0.5);
  Corpus train, test;
  train.provenance = corpus.provenance + ":train";
  test.provenance = corpus.provenance + ":test";
  for (std::size_t i = 0; i < order.size(); ++i) {
    (i < n_train ? train : test).records.push_back(corpus.records[order[i]]);
  }
  return {std::move(train), std::move(test)};
}

DataMode DataMode::parse(const std::string& name) {
  if (name == "can2can") return {Side::canonical, Side::canonical};
  if (name == "enum2can") return {Side::enumerated, Side::canonical};
  if (name == "can2enum") return {Side::canonical, Side::enumerated};
  if (name == "enum2enum") return {Side::enumerated, Side::enumerated};
  throw std::invalid_argument("unknown data mode: " + name);
}

std::string DataMode::name() const {
  std::string a = encoder == Side::canonical ? "can" : "enum";
  std::string b = decoder == Side::canonical ? "can" : "enum";
  return a + "2" + b;
}

std::vector<std::pair<std::string, std::string>> make_pairs(const Corpus& corpus,
                                                            const DataMode& mode,
                                                            std::mt19937_64& rng) {
  std::vector<std::pair<std::string, std::string>> out;
  out.reserve(corpus.size());
  for (const CorpusRecord& r : corpus.records) {
    std::string in = mode.encoder == Side::canonical ? r.canonical : chem::write_random(r.mol, rng);
    std::string target =
        mode.decoder == Side::canonical ? r.canonical : chem::write_random(r.mol, rng);
    out.emplace_back(std::move(in), std::move(target));
  }
  return out;
}

}  // namespace hetenc::data
