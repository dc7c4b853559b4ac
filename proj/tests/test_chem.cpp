#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <map>
#include <string>

#include "doctest.h"
#include "setnovo/chem.hpp"

using namespace setnovo;

namespace {

// Residue masses recomputed independently from atomic composition, written
// out to five decimals. Frozen before the vocabulary table was implemented.
const std::map<std::string, double> kExpectedMasses = {
    {"A", 71.03711},          {"R", 156.10111}, {"N", 114.04293},
    {"N(+.98)", 115.02695},   {"D", 115.02694}, {"C(+57.02)", 160.03065},
    {"E", 129.04259},         {"Q", 128.05858}, {"Q(+.98)", 129.04260},
    {"G", 57.02146},          {"H", 137.05891}, {"I", 113.08406},
    {"K", 128.09496},         {"L", 113.08406}, {"M", 131.04049},
    {"M(+15.99)", 147.03540}, {"F", 147.06841}, {"P", 97.05276},
    {"S", 87.03203},          {"T", 101.04768}, {"W", 186.07931},
    {"Y", 163.06333},         {"V", 99.06841},
};

}  // namespace

TEST_CASE("vocabulary layout") {
  const auto& vocab = chem::vocabulary();
  CHECK(vocab.size() == 26);
  CHECK(vocab[chem::tok::Pad].kind == chem::TokenKind::Pad);
  CHECK(vocab[chem::tok::Start].kind == chem::TokenKind::Start);
  CHECK(vocab[chem::tok::End].kind == chem::TokenKind::End);

  int residues = 0;
  for (int v = 0; v < chem::kVocabSize; ++v)
    if (chem::is_residue(static_cast<chem::TokenId>(v))) ++residues;
  CHECK(residues == 23);

  // every written form is unique
  std::map<std::string, int> seen;
  for (const auto& ti : vocab) ++seen[std::string(ti.text)];
  CHECK(seen.size() == 26);
}

TEST_CASE("residue masses match the frozen table") {
  int checked = 0;
  for (int v = 0; v < chem::kVocabSize; ++v) {
    auto t = static_cast<chem::TokenId>(v);
    if (!chem::is_residue(t)) continue;
    auto it = kExpectedMasses.find(std::string(chem::token_info(t).text));
    REQUIRE(it != kExpectedMasses.end());
    CHECK(std::abs(chem::residue_mass(t) - it->second) < 1e-5);
    ++checked;
  }
  CHECK(checked == 23);
}

TEST_CASE("glycine mass from atomic composition by hand") {
  // C2 H3 N O: 24 + 3*1.0078250319 + 14.0030740052 + 15.9949146221
  CHECK(std::abs(chem::residue_mass(chem::tok::G) - 57.0214637230) < 1e-9);
}

TEST_CASE("modification identities") {
  // deamidated N is isobaric with D, deamidated Q with E
  CHECK(std::abs(chem::residue_mass(chem::tok::Ndeam) -
                 chem::residue_mass(chem::tok::D)) < 1e-9);
  CHECK(std::abs(chem::residue_mass(chem::tok::Qdeam) -
                 chem::residue_mass(chem::tok::E)) < 1e-9);
  CHECK(std::abs(chem::residue_mass(chem::tok::Mox) -
                 chem::residue_mass(chem::tok::M) - chem::kMassO) < 1e-12);
  CHECK(chem::residue_mass(chem::tok::I) ==
        chem::residue_mass(chem::tok::L));
}

TEST_CASE("special tokens have no residue mass") {
  CHECK_THROWS_AS(chem::residue_mass(chem::tok::Pad), std::invalid_argument);
  CHECK_THROWS_AS(chem::residue_mass(chem::tok::Start), std::invalid_argument);
  CHECK_THROWS_AS(chem::residue_mass(chem::tok::End), std::invalid_argument);
}

TEST_CASE("ion table order and properties") {
  const auto& ions = chem::ion_types();
  REQUIRE(ions.size() == 8);
  const char* names[] = {"b",     "y",     "b(2+)", "y(2+)",
                         "b-H2O", "y-H2O", "b-NH3", "y-NH3"};
  for (int j = 0; j < 8; ++j) CHECK(ions[j].name == names[j]);
  for (int j = 0; j < 8; ++j)
    CHECK(ions[j].series ==
          (j % 2 == 0 ? chem::IonSeries::B : chem::IonSeries::Y));
  CHECK(ions[2].charge == 2);
  CHECK(ions[3].charge == 2);
  CHECK(ions[4].neutral_loss == chem::kMassH2O);
  CHECK(ions[6].neutral_loss == chem::kMassNH3);
  CHECK(ions[0].neutral_loss == 0.0);
}

TEST_CASE("theoretical m/z worked examples") {
  const auto& ions = chem::ion_types();
  // b1 of G: (57.0214637230 + 1.00728) / 1
  CHECK(std::abs(chem::theoretical_mz(0.0, 100.0, chem::tok::G, ions[0]) -
                 58.0287437230) < 1e-9);
  // b1-H2O of G
  CHECK(std::abs(chem::theoretical_mz(0.0, 100.0, chem::tok::G, ions[4]) -
                 40.0181837230) < 1e-9);
  // y1 when the suffix is exactly one glycine: (57.02146 + H2O + proton) / 1
  double y1 = chem::theoretical_mz(0.0, chem::residue_mass(chem::tok::G),
                                   chem::tok::A, ions[1]);
  CHECK(std::abs(y1 - 76.0393037230) < 1e-9);
  // doubly charged y over the same suffix
  double y2 = chem::theoretical_mz(0.0, chem::residue_mass(chem::tok::G),
                                   chem::tok::A, ions[3]);
  CHECK(std::abs(y2 - 38.5232918615) < 1e-9);
}

TEST_CASE("b and y fragments at one site are complementary") {
  const auto& ions = chem::ion_types();
  chem::Peptide pep = chem::parse_peptide("GASPVKLR");
  double total = chem::residue_sum(pep);
  double neutral = chem::precursor_mass(pep);
  CHECK(std::abs(neutral - (total + chem::kMassH2O)) < 1e-12);

  double prefix = 0.0;
  for (std::size_t i = 0; i + 1 < pep.size(); ++i) {
    double suffix = total - prefix - chem::residue_mass(pep[i]);
    double b = chem::theoretical_mz(prefix, suffix, pep[i], ions[0]);
    double y = chem::theoretical_mz(prefix, suffix, pep[i], ions[1]);
    CHECK(std::abs(b + y - (neutral + 2 * chem::kMassProton)) < 1e-9);
    prefix += chem::residue_mass(pep[i]);
  }
}

TEST_CASE("peptide parse and format round-trip") {
  const char* cases[] = {
      "GA",
      "M(+15.99)K",
      "N(+.98)Q(+.98)C(+57.02)",
      "ARNDEQGHILKMFPSTWYV",
      "ILIL",
  };
  for (const char* s : cases) {
    chem::Peptide p = chem::parse_peptide(s);
    CHECK(chem::peptide_to_string(p) == s);
  }
}

TEST_CASE("plain C maps to the carbamidomethylated token") {
  chem::Peptide p = chem::parse_peptide("ACA");
  REQUIRE(p.size() == 3);
  CHECK(p[1] == chem::tok::Ccam);
  CHECK(chem::peptide_to_string(p) == "AC(+57.02)A");
}

TEST_CASE("peptide parse errors name the position") {
  CHECK_THROWS_AS(chem::parse_peptide("GAB"), std::invalid_argument);
  CHECK_THROWS_AS(chem::parse_peptide("M(+15.99"), std::invalid_argument);
  CHECK_THROWS_AS(chem::parse_peptide("M(+16.00)"), std::invalid_argument);
  CHECK_THROWS_AS(chem::parse_peptide("A(+.98)"), std::invalid_argument);
  CHECK(chem::parse_peptide("").empty());
}

TEST_CASE("precursor mass of a known peptide") {
  chem::Peptide p = chem::parse_peptide("GG");
  CHECK(std::abs(chem::precursor_mass(p) -
                 (2 * 57.0214637230 + 18.01056)) < 1e-9);
  CHECK_THROWS_AS(chem::precursor_mass(chem::Peptide{}), std::invalid_argument);
}
