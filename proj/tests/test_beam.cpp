#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <vector>

#include "doctest.h"
#include "setnovo/autodiff.hpp"
#include "setnovo/beam.hpp"
#include "setnovo/features.hpp"
#include "setnovo/synth.hpp"

using namespace setnovo;

namespace {

struct Toy {
  nn::Model model;
  std::vector<Spectrum> spectra;
  KnapsackFilter knapsack;
};

nn::ModelConfig toy_model_config() {
  nn::ModelConfig mc;
  mc.conv_channels = {6, 6};
  mc.fc_dims = {5, 4};
  mc.d_lstm = 4;
  return mc;
}

Toy make_toy(std::uint64_t seed, std::size_t count) {
  synth::SynthConfig sc;
  sc.count = count;
  sc.alphabet = {chem::tok::G, chem::tok::A, chem::tok::V};
  sc.min_len = 3;
  sc.max_len = 4;
  sc.noise_peaks = 4;
  sc.seed = seed;

  nn::Model model(toy_model_config());
  Rng rng(seed + 1);
  model.init_params(rng);

  std::vector<double> masses;
  for (auto t : sc.alphabet) masses.push_back(chem::residue_mass(t));
  return Toy{std::move(model), synth::generate(sc),
             KnapsackFilter(masses, 1000.0)};
}

// Depth-first enumeration of every hypothesis the beam could reach, sharing
// the beam's masking and end rules exactly. level_counts[d] counts the
// hypotheses of length d; as long as every count fits inside the beam width,
// the beam never prunes and must return this optimum.
void dfs_best(const nn::Model& model, const Spectrum& sp,
              const KnapsackFilter& ks, const BeamConfig& cfg, double total,
              chem::Peptide& tokens, double prefix, nn::DecodeState state,
              double score, Prediction& best,
              std::vector<std::size_t>& level_counts) {
  if (level_counts.size() <= tokens.size()) level_counts.resize(tokens.size() + 1);
  ++level_counts[tokens.size()];

  nn::Tensor feats = features::feature_matrix(sp.peaks, prefix, total);
  int prev = tokens.empty() ? chem::tok::Start : tokens.back();
  nn::Tensor logits = model.step(feats, prev, state);
  std::vector<double> lp = nn::log_softmax(logits.row(0), chem::kVocabSize);

  double rem = total - prefix;
  if (std::abs(rem) <= cfg.precursor_tol) {
    double s = score + lp[chem::tok::End];
    if (!best.found || s > best.score) {
      best.found = true;
      best.peptide = tokens;
      best.score = s;
    }
  }
  if (tokens.size() >= cfg.max_len) return;
  for (std::size_t v = 0; v < static_cast<std::size_t>(chem::kVocabSize); ++v) {
    auto token = static_cast<chem::TokenId>(v);
    if (!chem::is_residue(token)) continue;
    double rem_after = rem - chem::residue_mass(token);
    if (rem_after < -cfg.precursor_tol) continue;
    if (!ks.feasible_mass(rem_after, cfg.mass_window)) continue;
    tokens.push_back(token);
    dfs_best(model, sp, ks, cfg, total, tokens,
             prefix + chem::residue_mass(token), state, score + lp[v], best,
             level_counts);
    tokens.pop_back();
  }
}

}  // namespace

TEST_CASE("beam without width pressure equals exhaustive search") {
  Toy toy = make_toy(31, 8);
  BeamConfig cfg;
  cfg.width = 4096;
  cfg.max_len = 5;

  for (const Spectrum& sp : toy.spectra) {
    double total = sp.total_residue_mass();
    Prediction want;
    chem::Peptide tokens;
    std::vector<std::size_t> level_counts;
    nn::DecodeState init = toy.model.initial_state(
        features::spectrum_summary(sp.peaks, toy.model.config().d_lstm));
    dfs_best(toy.model, sp, toy.knapsack, cfg, total, tokens, 0.0, init, 0.0,
             want, level_counts);
    for (std::size_t c : level_counts) REQUIRE(c <= cfg.width);

    Prediction got = decode_spectrum(toy.model, sp, toy.knapsack, cfg);
    REQUIRE(want.found);
    REQUIRE(got.found);
    CHECK(got.score == want.score);
    CHECK(got.peptide == want.peptide);
  }
}

TEST_CASE("returned score is the sum of the step log-probabilities") {
  Toy toy = make_toy(32, 3);
  BeamConfig cfg;
  cfg.width = 8;
  cfg.max_len = 6;
  for (const Spectrum& sp : toy.spectra) {
    Prediction p = decode_spectrum(toy.model, sp, toy.knapsack, cfg);
    if (!p.found) continue;
    REQUIRE(p.step_logprobs.size() == p.peptide.size() + 1);
    double sum = 0.0;
    for (double v : p.step_logprobs) sum += v;
    CHECK(std::abs(sum - p.score) < 1e-12);
    for (double v : p.step_logprobs) CHECK(v <= 0.0);
  }
}

TEST_CASE("predictions respect the precursor mass") {
  Toy toy = make_toy(33, 10);
  BeamConfig cfg;
  cfg.width = 5;
  cfg.max_len = 8;
  int found = 0;
  for (const Spectrum& sp : toy.spectra) {
    Prediction p = decode_spectrum(toy.model, sp, toy.knapsack, cfg);
    if (!p.found) continue;
    ++found;
    double total = sp.total_residue_mass();
    CHECK(std::abs(chem::residue_sum(p.peptide) - total) <=
          cfg.precursor_tol + 1e-9);
  }
  // an untrained model must still produce mass-consistent peptides
  CHECK(found > 0);
}

TEST_CASE("degenerate spectra decode to not-found") {
  Toy toy = make_toy(34, 1);
  BeamConfig cfg;

  Spectrum empty = toy.spectra[0];
  empty.peaks.clear();
  CHECK(!decode_spectrum(toy.model, empty, toy.knapsack, cfg).found);

  Spectrum uncharged = toy.spectra[0];
  uncharged.charge = 0;
  CHECK(!decode_spectrum(toy.model, uncharged, toy.knapsack, cfg).found);

  // precursor mass no residue combination can reach
  Spectrum hopeless = toy.spectra[0];
  hopeless.pepmass = 30.0;
  hopeless.charge = 1;
  CHECK(!decode_spectrum(toy.model, hopeless, toy.knapsack, cfg).found);
}

TEST_CASE("a tight beam still finds a mass-consistent peptide") {
  Toy toy = make_toy(35, 6);
  BeamConfig cfg;
  cfg.width = 1;
  cfg.max_len = 8;
  for (const Spectrum& sp : toy.spectra) {
    Prediction p = decode_spectrum(toy.model, sp, toy.knapsack, cfg);
    if (!p.found) continue;
    CHECK(std::abs(chem::residue_sum(p.peptide) - sp.total_residue_mass()) <=
          cfg.precursor_tol + 1e-9);
  }
}

TEST_CASE("decode_all keeps input order and matches the serial path") {
  Toy toy = make_toy(36, 6);
  BeamConfig cfg;
  cfg.width = 4;
  cfg.max_len = 6;

  auto serial = decode_all(toy.model, toy.spectra, toy.knapsack, cfg, 1);
  auto threaded = decode_all(toy.model, toy.spectra, toy.knapsack, cfg, 3);
  REQUIRE(serial.size() == toy.spectra.size());
  REQUIRE(threaded.size() == toy.spectra.size());
  for (std::size_t i = 0; i < serial.size(); ++i) {
    CHECK(serial[i].found == threaded[i].found);
    CHECK(serial[i].peptide == threaded[i].peptide);
    CHECK(serial[i].score == threaded[i].score);
    if (serial[i].found)
      CHECK(serial[i].peptide ==
            decode_spectrum(toy.model, toy.spectra[i], toy.knapsack, cfg)
                .peptide);
  }
}
