#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <vector>

#include "doctest.h"
#include "setnovo/features.hpp"
#include "setnovo/rng.hpp"

using namespace setnovo;

TEST_CASE("theoretical_mz_table layout and sentinels") {
  double total = 500.0;
  double prefix = 120.0;
  auto table = features::theoretical_mz_table(prefix, total);
  const auto& ions = chem::ion_types();

  for (chem::TokenId sp : {chem::tok::Pad, chem::tok::Start, chem::tok::End})
    for (int j = 0; j < chem::kNumIonTypes; ++j)
      CHECK(table[sp * chem::kNumIonTypes + j] == features::kSentinelMz);

  for (int v = 0; v < chem::kVocabSize; ++v) {
    auto token = static_cast<chem::TokenId>(v);
    if (!chem::is_residue(token)) continue;
    double suffix = total - prefix - chem::residue_mass(token);
    for (int j = 0; j < chem::kNumIonTypes; ++j) {
      double got = table[v * chem::kNumIonTypes + j];
      if (suffix < 0.0)
        CHECK(got == features::kSentinelMz);
      else
        CHECK(got == chem::theoretical_mz(prefix, suffix, token, ions[j]));
    }
  }
}

TEST_CASE("candidates heavier than the remaining mass are fully masked") {
  // only ~100 Da left: W (186) cannot fit, G (57) can
  auto table = features::theoretical_mz_table(400.0, 500.0);
  for (int j = 0; j < chem::kNumIonTypes; ++j) {
    CHECK(table[chem::tok::W * chem::kNumIonTypes + j] ==
          features::kSentinelMz);
    CHECK(table[chem::tok::G * chem::kNumIonTypes + j] !=
          features::kSentinelMz);
  }
}

TEST_CASE("activation worked values") {
  // one peak sitting 0.02 Da above the b1 ion of G
  double prefix = 0.0, total = 400.0;
  auto table = features::theoretical_mz_table(prefix, total);
  double b1_g = table[chem::tok::G * chem::kNumIonTypes + 0];
  CHECK(std::abs(b1_g - 58.0287437230) < 1e-9);

  std::vector<Peak> peaks = {{b1_g + 0.02, 0.8}, {b1_g, 0.3}};
  auto dt = features::difference_tensor(peaks, prefix, total);
  CHECK(dt.n_peaks == 2);
  CHECK(std::abs(dt.at(0, chem::tok::G, 0) - 0.02) < 1e-12);
  CHECK(dt.at(1, chem::tok::G, 0) == 0.0);

  auto act = features::activation(dt);
  std::size_t col = chem::tok::G * chem::kNumIonTypes + 0;
  CHECK(std::abs(act[0 * 208 + col] - std::exp(-2.0)) < 1e-12);
  CHECK(act[1 * 208 + col] == 1.0);

  // sentinel differences decay to an exact zero
  CHECK(act[0 * 208 + chem::tok::Pad * chem::kNumIonTypes] == 0.0);
}

TEST_CASE("feature_matrix equals difference_tensor plus activation bitwise") {
  Rng rng(5);
  std::vector<Peak> peaks;
  for (int i = 0; i < 40; ++i)
    peaks.push_back({rng.uniform(50.0, 1500.0), rng.uniform()});
  double total = 1200.0, prefix = 250.0;

  nn::Tensor f = features::feature_matrix(peaks, prefix, total);
  REQUIRE(f.rows == peaks.size());
  REQUIRE(f.cols == features::kFeatureDim);

  auto act = features::activation(
      features::difference_tensor(peaks, prefix, total));
  for (std::size_t k = 0; k < peaks.size(); ++k) {
    for (std::size_t c = 0; c < 208; ++c)
      CHECK(f.at(k, c) == act[k * 208 + c]);
    CHECK(f.at(k, 208) == peaks[k].intensity);
  }
}

TEST_CASE("feature_matrix_into matches feature_matrix") {
  std::vector<Peak> peaks = {{100.0, 0.5}, {200.0, 1.0}, {350.5, 0.25}};
  nn::Tensor f = features::feature_matrix(peaks, 57.0, 700.0);
  std::vector<double> buf(peaks.size() * features::kFeatureDim, -1.0);
  features::feature_matrix_into(peaks, 57.0, 700.0, buf.data());
  for (std::size_t i = 0; i < buf.size(); ++i) CHECK(buf[i] == f.data[i]);
}

TEST_CASE("positional embedding formula") {
  const std::size_t dim = 8;
  double out[dim];
  features::positional_embedding(123.456, dim, out);
  // loc = round(123.456 / 0.1) = 1235
  double pos = 1235.0;
  for (std::size_t k = 0; 2 * k < dim; ++k) {
    double angle = pos / std::pow(10000.0, 2.0 * k / dim);
    CHECK(out[2 * k] == std::sin(angle));
    CHECK(out[2 * k + 1] == std::cos(angle));
  }
}

TEST_CASE("positional embedding clamps the location") {
  double lo[4], hi[4], cap[4];
  features::positional_embedding(-5.0, 4, lo);
  CHECK(lo[0] == std::sin(0.0));
  CHECK(lo[1] == std::cos(0.0));

  features::positional_embedding(5000.0, 4, cap);   // loc exactly 50000
  features::positional_embedding(99999.0, 4, hi);   // clamped to 50000
  for (int i = 0; i < 4; ++i) CHECK(hi[i] == cap[i]);

  CHECK_THROWS_AS(features::positional_embedding(1.0, 3, lo),
                  std::invalid_argument);
}

TEST_CASE("positional embedding rounds to the nearest bin") {
  double a[4], b[4];
  features::positional_embedding(1.04, 4, a);  // loc 10
  features::positional_embedding(1.0, 4, b);
  CHECK(a[0] == b[0]);
  features::positional_embedding(1.06, 4, a);  // loc 11
  CHECK(a[0] != b[0]);
}

TEST_CASE("spectrum_summary is the intensity-weighted embedding sum") {
  const std::size_t dim = 6;
  std::vector<Peak> peaks = {{100.0, 0.5}, {250.3, 1.0}, {900.0, 0.1}};
  nn::Tensor s = features::spectrum_summary(peaks, dim);
  REQUIRE(s.rows == 1);
  REQUIRE(s.cols == dim);

  std::vector<double> want(dim, 0.0), pe(dim);
  for (const Peak& p : peaks) {
    features::positional_embedding(p.mz, dim, pe.data());
    for (std::size_t j = 0; j < dim; ++j) want[j] += p.intensity * pe[j];
  }
  for (std::size_t j = 0; j < dim; ++j)
    CHECK(std::abs(s.at(0, j) - want[j]) < 1e-12);

  nn::Tensor empty = features::spectrum_summary({}, dim);
  for (std::size_t j = 0; j < dim; ++j) CHECK(empty.at(0, j) == 0.0);
}

TEST_CASE("preprocess_spectrum ordering, cap and normalization") {
  Spectrum sp;
  sp.peaks = {{300.0, 5.0}, {100.0, 2.0}, {200.0, 8.0},
              {150.0, 2.0}, {250.0, 1.0}};
  preprocess_spectrum(sp, 3, true);
  REQUIRE(sp.peaks.size() == 3);
  // kept the 8, 5 and one of the 2s; the 2.0 tie keeps the lower m/z
  CHECK(sp.peaks[0].mz == 100.0);
  CHECK(sp.peaks[1].mz == 200.0);
  CHECK(sp.peaks[2].mz == 300.0);
  CHECK(sp.peaks[0].intensity == 0.25);
  CHECK(sp.peaks[1].intensity == 1.0);
  CHECK(sp.peaks[2].intensity == 5.0 / 8.0);

  Spectrum untouched;
  untouched.peaks = {{2.0, 1.0}, {1.0, 3.0}};
  preprocess_spectrum(untouched, 0, false);
  REQUIRE(untouched.peaks.size() == 2);
  CHECK(untouched.peaks[0].mz == 1.0);
  CHECK(untouched.peaks[1].intensity == 1.0);
}

TEST_CASE("precursor mass bookkeeping on Spectrum") {
  Spectrum sp;
  sp.pepmass = 500.0;
  sp.charge = 2;
  CHECK(std::abs(sp.precursor_neutral_mass() - (1000.0 - 2 * 1.00728)) < 1e-12);
  CHECK(std::abs(sp.total_residue_mass() -
                 (1000.0 - 2 * 1.00728 - 18.01056)) < 1e-12);
}
