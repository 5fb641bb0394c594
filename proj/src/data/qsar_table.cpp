#include "hetenc/data/qsar_table.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

#include "hetenc/chem/descriptors.hpp"
#include "hetenc/chem/smiles.hpp"
#include "hetenc/nn/rng.hpp"

namespace hetenc::data {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  fields.push_back(cur);
  return fields;
}

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

}  // namespace

std::pair<double, double> QsarTable::value_span() const {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const QsarRecord& r : records) {
    lo = std::min(lo, r.value);
    hi = std::max(hi, r.value);
  }
  return {lo, hi};
}

QsarTable load_qsar(const std::string& path, const std::string& name, std::uint64_t split_seed) {
  std::ifstream is(path);
  if (!is) throw MalformedCsv("cannot open QSAR csv: " + path);
  std::string line;
  if (!std::getline(is, line)) throw MalformedCsv("empty QSAR csv: " + path);
  const std::vector<std::string> header = split_csv_line(line);
  int smiles_col = -1, value_col = -1, split_col = -1;
  for (std::size_t i = 0; i < header.size(); ++i) {
    const std::string h = lower(header[i]);
    if (h == "smiles") smiles_col = static_cast<int>(i);
    if (h == "value") value_col = static_cast<int>(i);
    if (h == "split") split_col = static_cast<int>(i);
  }
  if (smiles_col < 0 || value_col < 0) {
    throw MalformedCsv("QSAR csv needs a header with smiles,value[,split]: " + path);
  }

  QsarTable table;
  table.name = name;
  std::vector<std::size_t> unlabeled;
  std::size_t line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    const std::vector<std::string> fields = split_csv_line(line);
    if (fields.size() < header.size()) {
      throw MalformedCsv("row " + std::to_string(line_no) + " has too few fields");
    }
    const std::string& smiles = fields[smiles_col];
    double value = 0.0;
    try {
      value = std::stod(fields[value_col]);
    } catch (const std::exception&) {
      throw MalformedCsv("row " + std::to_string(line_no) + " has a non-numeric value");
    }
    if (!chem::try_parse_smiles(smiles)) {
      ++table.dropped;
      continue;
    }
    QsarRecord rec{smiles, value, false};
    if (split_col >= 0 && !fields[split_col].empty()) {
      const std::string s = lower(fields[split_col]);
      if (s != "train" && s != "test") {
        throw MalformedCsv("row " + std::to_string(line_no) + " has split '" + s + "'");
      }
      rec.test = (s == "test");
    } else {
      unlabeled.push_back(table.records.size());
    }
    table.records.push_back(std::move(rec));
  }

  if (!unlabeled.empty()) {
    // 75/25 with a fixed seed, matching the pre-split EPA convention.
    std::mt19937_64 rng = nn::rng_stream(split_seed, 0x0757ull);
    std::vector<std::size_t> order = unlabeled;
    nn::shuffle_indices(order, rng);
    const std::size_t n_test = order.size() / 4;
    for (std::size_t i = 0; i < n_test; ++i) table.records[order[i]].test = true;
  }
  // A SMILES string may repeat, but never across splits; later occurrences
  // follow the first.
  std::map<std::string, bool> first_split;
  for (QsarRecord& r : table.records) {
    auto [it, inserted] = first_split.emplace(r.smiles, r.test);
    if (!inserted) r.test = it->second;
  }
  return table;
}

void write_qsar_csv(const std::string& path, const QsarTable& table, bool with_split) {
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw std::runtime_error("cannot write QSAR csv: " + path);
  os << (with_split ? "smiles,value,split\n" : "smiles,value\n");
  char buf[64];
  for (const QsarRecord& r : table.records) {
    std::snprintf(buf, sizeof(buf), "%.6g", r.value);
    os << r.smiles << "," << buf;
    if (with_split) os << "," << (r.test ? "test" : "train");
    os << "\n";
  }
}

QsarTable make_surrogate_table(const Corpus& corpus, std::size_t n_molecules,
                               const std::string& name, double span_lo, double span_hi,
                               std::uint64_t seed) {
  if (corpus.size() < n_molecules) {
    throw std::invalid_argument("surrogate table needs a corpus with >= n_molecules records");
  }
  std::vector<std::size_t> order(corpus.size());
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng = nn::rng_stream(seed, 0x50bbull);
  nn::shuffle_indices(order, rng);

  // Structure-derived endpoint: hydrophilic atoms raise it, size and
  // unsaturation lower it; small seeded noise keeps the fit non-trivial.
  std::vector<double> raw(n_molecules);
  QsarTable table;
  table.name = name;
  for (std::size_t i = 0; i < n_molecules; ++i) {
    const CorpusRecord& rec = corpus.records[order[i]];
    int n_c = 0, n_o = 0, n_n = 0, n_f = 0;
    for (const chem::Atom& a : rec.mol.atoms()) {
      switch (a.element) {
        case chem::Element::C: ++n_c; break;
        case chem::Element::O: ++n_o; break;
        case chem::Element::N: ++n_n; break;
        case chem::Element::F: ++n_f; break;
        default: break;
      }
    }
    const chem::BondFormula bf = chem::bond_formula(rec.mol);
    const int rings = rec.mol.bond_count() - rec.mol.atom_count() + 1;
    raw[i] = -0.85 * n_c + 1.1 * n_o + 0.7 * n_n - 0.4 * n_f - 0.5 * rings -
             0.35 * (bf.double_ + 2 * bf.triple) + 0.35 * nn::normal_unit(rng);
    table.records.push_back({rec.canonical, 0.0, false});
  }
  const auto [lo, hi] = std::minmax_element(raw.begin(), raw.end());
  const double scale = (span_hi - span_lo) / std::max(1e-9, *hi - *lo);
  for (std::size_t i = 0; i < n_molecules; ++i) {
    table.records[i].value = span_lo + (raw[i] - *lo) * scale;
    table.records[i].test = false;
  }
  // 75/25 split, deterministic.
  std::vector<std::size_t> idx(n_molecules);
  std::iota(idx.begin(), idx.end(), 0);
  nn::shuffle_indices(idx, rng);
  for (std::size_t i = 0; i < n_molecules / 4; ++i) table.records[idx[i]].test = true;
  return table;
}

}  // namespace hetenc::data
