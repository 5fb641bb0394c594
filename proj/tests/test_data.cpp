#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <set>

#include "hetenc/chem/descriptors.hpp"
#include "hetenc/chem/smiles.hpp"
#include "hetenc/data/corpus.hpp"
#include "hetenc/data/generator.hpp"
#include "hetenc/data/qsar_table.hpp"
#include "hetenc/data/vectorize.hpp"

using namespace hetenc;
namespace fs = std::filesystem;

namespace {

data::Corpus tiny_corpus() {
  return data::corpus_from_smiles(
      {"C", "CC", "CCC", "CCO", "CCN", "C=O", "C#N", "CCCC", "CC(C)C", "C1CC1"}, "tiny");
}

}  // namespace

TEST_CASE("generator enumerates exactly the valid diatomics") {
  // Hand count over {C,N,O,F}: 4 single atoms plus CC,C=C,C#C, CN,C=N,C#N,
  // CO,C=O, CF, NN,N=N,N#N, NO,N=O, NF, OO,O=O, OF, FF.
  const auto mols = data::generate_molecules(2);
  CHECK(mols.size() == 23);
  for (const std::string& s : mols) {
    CHECK(chem::write_canonical(chem::parse_smiles(s)) == s);
  }
}

TEST_CASE("generator output is duplicate-free under isomorphism") {
  const auto mols = data::generate_molecules(4);
  std::set<std::string> seen(mols.begin(), mols.end());
  CHECK(seen.size() == mols.size());
  for (const std::string& s : mols) {
    const chem::MolGraph m = chem::parse_smiles(s);
    CHECK(m.atom_count() <= 4);
  }
}

TEST_CASE("split is deterministic, disjoint, exhaustive") {
  data::Corpus corpus;
  for (int i = 0; i < 1000; ++i) {
    corpus.records.push_back({"m" + std::to_string(i), "id" + std::to_string(i), chem::parse_smiles("C")});
  }
  auto [train, test] = data::split(corpus, 0.9, 42);
  CHECK(train.size() == 900);
  CHECK(test.size() == 100);

  auto [train2, test2] = data::split(corpus, 0.9, 42);
  for (std::size_t i = 0; i < train.size(); ++i) CHECK(train.records[i].id == train2.records[i].id);

  std::set<std::string> ids;
  for (const auto& r : train.records) ids.insert(r.canonical);
  for (const auto& r : test.records) ids.insert(r.canonical);
  CHECK(ids.size() == corpus.size());

  CHECK_THROWS_AS(data::split(data::Corpus{}, 0.9, 1), std::invalid_argument);
}

TEST_CASE("make_pairs per data mode") {
  const data::Corpus corpus = tiny_corpus();
  std::mt19937_64 rng(5);

  auto can = data::make_pairs(corpus, data::DataMode::parse("can2can"), rng);
  for (std::size_t i = 0; i < can.size(); ++i) {
    CHECK(can[i].first == can[i].second);
    CHECK(can[i].first == corpus.records[i].canonical);
  }

  for (const char* mode : {"enum2can", "can2enum", "enum2enum"}) {
    auto pairs = data::make_pairs(corpus, data::DataMode::parse(mode), rng);
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      CHECK(chem::same_molecule(chem::parse_smiles(pairs[i].first), corpus.records[i].mol));
      CHECK(chem::same_molecule(chem::parse_smiles(pairs[i].second), corpus.records[i].mol));
    }
  }

  // enum2enum draws both sides independently: over 100 draws of one molecule
  // both sides vary.
  data::Corpus one;
  one.records.push_back(corpus.records[7]);  // CCCC
  std::set<std::string> lhs, rhs;
  for (int i = 0; i < 100; ++i) {
    auto p = data::make_pairs(one, data::DataMode::parse("enum2enum"), rng);
    lhs.insert(p[0].first);
    rhs.insert(p[0].second);
  }
  CHECK(lhs.size() > 1);
  CHECK(rhs.size() > 1);
}

TEST_CASE("vectorize round trip") {
  const std::vector<std::string> smiles{"CCO", "ClCCl", "C#N"};
  const encdec::Tokenizer tk = encdec::Tokenizer::build(smiles);
  const data::OneHotBatch batch = data::vectorize(smiles, tk, 12);

  CHECK(batch.tensor.dim(0) == 3);
  CHECK(batch.tensor.dim(1) == 12);
  CHECK(batch.tensor.dim(2) == tk.size());
  // Each position is exactly one-hot.
  for (std::size_t r = 0; r < 3; ++r) {
    for (std::size_t p = 0; p < 12; ++p) {
      float sum = 0.0f;
      for (std::size_t v = 0; v < tk.size(); ++v) {
        sum += batch.tensor[(r * 12 + p) * tk.size() + v];
      }
      CHECK(sum == 1.0f);
    }
  }
  CHECK(data::devectorize(batch, tk) == smiles);

  // "Cl" consumes a single token position: Cl-C-Cl + frame = 5.
  CHECK(batch.lengths[1] == 5);

  CHECK_THROWS_AS(data::vectorize(std::vector<std::string>{"CCCCCCCCCCCC"}, tk, 12),
                  encdec::EncdecError);
  CHECK_THROWS_AS(data::vectorize(std::vector<std::string>{"CBr"}, tk, 12),
                  encdec::EncdecError);
}

TEST_CASE("load_qsar parses, splits and reports drops") {
  const fs::path dir = fs::temp_directory_path() / "hetenc_qsar_test";
  fs::create_directories(dir);
  {
    std::ofstream os(dir / "good.csv");
    os << "smiles,value,split\n";
    os << "CCO,-1.5,train\n";
    os << "CCN,0.5,test\n";
    os << "XX(,1.0,train\n";  // invalid SMILES: dropped, not fatal
    os << "CCC,2.0,train\n";
  }
  const data::QsarTable t = data::load_qsar((dir / "good.csv").string(), "demo");
  CHECK(t.size() == 3);
  CHECK(t.dropped == 1);
  CHECK(t.records[1].test);
  const auto [lo, hi] = t.value_span();
  CHECK(lo == doctest::Approx(-1.5));
  CHECK(hi == doctest::Approx(2.0));

  {
    std::ofstream os(dir / "nosplit.csv");
    os << "smiles,value\n";
    for (int i = 0; i < 40; ++i) os << "C" << std::string(i, 'C') << ",1." << i << "\n";
  }
  const data::QsarTable t2 = data::load_qsar((dir / "nosplit.csv").string(), "demo2");
  std::size_t n_test = 0;
  for (const auto& r : t2.records) n_test += r.test ? 1 : 0;
  CHECK(n_test == t2.size() / 4);
  const data::QsarTable t3 = data::load_qsar((dir / "nosplit.csv").string(), "demo2");
  for (std::size_t i = 0; i < t2.size(); ++i) CHECK(t2.records[i].test == t3.records[i].test);

  {
    std::ofstream os(dir / "bad.csv");
    os << "a,b\nC,1\n";
  }
  CHECK_THROWS_AS(data::load_qsar((dir / "bad.csv").string(), "bad"), data::MalformedCsv);
}

TEST_CASE("surrogate tables hit the documented row counts and spans") {
  const auto smiles = data::generate_molecules(5);
  const data::Corpus corpus = data::corpus_from_smiles(smiles, "gen5");
  REQUIRE(corpus.size() >= 1297);

  const data::QsarTable sol = data::make_surrogate_table(corpus, 1297, "solubility", -11.6, 1.6, 7);
  CHECK(sol.size() == 1297);
  const auto [lo, hi] = sol.value_span();
  CHECK(lo == doctest::Approx(-11.6).epsilon(1e-9));
  CHECK(hi == doctest::Approx(1.6).epsilon(1e-9));

  const data::QsarTable bcf = data::make_surrogate_table(corpus, 541, "bcf", -1.7, 5.7, 8);
  CHECK(bcf.size() == 541);
  const auto [blo, bhi] = bcf.value_span();
  CHECK(blo == doctest::Approx(-1.7).epsilon(1e-9));
  CHECK(bhi == doctest::Approx(5.7).epsilon(1e-9));

  // Round trip through the CSV form.
  const fs::path dir = fs::temp_directory_path() / "hetenc_qsar_test";
  fs::create_directories(dir);
  data::write_qsar_csv((dir / "sol.csv").string(), sol, false);
  const data::QsarTable back = data::load_qsar((dir / "sol.csv").string(), "solubility");
  CHECK(back.size() == 1297);
  CHECK(back.dropped == 0);
}

TEST_CASE("corpus loader reports bad lines and deduplicates") {
  const fs::path dir = fs::temp_directory_path() / "hetenc_corpus_test";
  fs::create_directories(dir);
  {
    std::ofstream os(dir / "in.smi");
    os << "# comment line\n";
    os << "CCO   \n";      // trailing whitespace stripped
    os << "OCC\n";         // duplicate of CCO after canonicalization
    os << "C(C\n";          // parse error: reported, skipped
    os << "[Xe]C\n";        // out-of-set element: reported, skipped
    os << "CCN\n";
  }
  data::LoadReport report;
  const data::Corpus corpus = data::load_smiles_file((dir / "in.smi").string(), &report);
  CHECK(corpus.size() == 2);
  CHECK(report.rejected == 2);
  CHECK(report.duplicates == 1);
  CHECK(report.messages.size() == 2);
}
