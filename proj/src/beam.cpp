#include "setnovo/beam.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

#include "setnovo/autodiff.hpp"
#include "setnovo/features.hpp"

namespace setnovo {
namespace {

struct Hyp {
  chem::Peptide tokens;
  double prefix_mass = 0.0;
  nn::DecodeState state;
  double score = 0.0;
  std::vector<double> logprobs;
};

}  // namespace

Prediction decode_spectrum(const nn::Model& model, const Spectrum& sp,
                           const KnapsackFilter& knapsack,
                           const BeamConfig& cfg) {
  Prediction best;
  if (sp.peaks.empty() || sp.charge <= 0) return best;
  double total = sp.total_residue_mass();
  if (total <= 0.0) return best;

  nn::Tensor summary;
  if (model.config().use_lstm)
    summary = features::spectrum_summary(sp.peaks, model.config().d_lstm);

  std::vector<Hyp> beams(1);
  beams[0].state = model.initial_state(summary);

  std::vector<Prediction> completed;

  for (std::size_t it = 0; it <= cfg.max_len && !beams.empty(); ++it) {
    std::vector<Hyp> expansions;
    for (Hyp& hyp : beams) {
      nn::Tensor feats =
          features::feature_matrix(sp.peaks, hyp.prefix_mass, total);
      int prev = hyp.tokens.empty() ? chem::tok::Start : hyp.tokens.back();
      nn::DecodeState next_state = hyp.state;
      nn::Tensor logits = model.step(feats, prev, next_state);
      std::vector<double> lp =
          nn::log_softmax(logits.row(0), chem::kVocabSize);

      double rem = total - hyp.prefix_mass;
      if (std::abs(rem) <= cfg.precursor_tol) {
        Prediction done;
        done.found = true;
        done.peptide = hyp.tokens;
        done.score = hyp.score + lp[chem::tok::End];
        done.step_logprobs = hyp.logprobs;
        done.step_logprobs.push_back(lp[chem::tok::End]);
        completed.push_back(std::move(done));
      }

      if (hyp.tokens.size() >= cfg.max_len) continue;
      for (std::size_t v = 0; v < chem::kVocabSize; ++v) {
        auto token = static_cast<chem::TokenId>(v);
        if (!chem::is_residue(token)) continue;
        double rem_after = rem - chem::residue_mass(token);
        if (rem_after < -cfg.precursor_tol) continue;
        if (!knapsack.feasible_mass(rem_after, cfg.mass_window)) continue;
        Hyp child;
        child.tokens = hyp.tokens;
        child.tokens.push_back(token);
        child.prefix_mass = hyp.prefix_mass + chem::residue_mass(token);
        child.state = next_state;
        child.score = hyp.score + lp[v];
        child.logprobs = hyp.logprobs;
        child.logprobs.push_back(lp[v]);
        expansions.push_back(std::move(child));
      }
    }
    std::stable_sort(expansions.begin(), expansions.end(),
                     [](const Hyp& a, const Hyp& b) { return a.score > b.score; });
    if (expansions.size() > cfg.width) expansions.resize(cfg.width);
    beams = std::move(expansions);
  }

  for (Prediction& p : completed)
    if (!best.found || p.score > best.score) best = std::move(p);
  return best;
}

std::vector<Prediction> decode_all(const nn::Model& model,
                                   const std::vector<Spectrum>& spectra,
                                   const KnapsackFilter& knapsack,
                                   const BeamConfig& cfg,
                                   std::size_t n_threads) {
  std::vector<Prediction> out(spectra.size());
  if (n_threads <= 1) {
    for (std::size_t i = 0; i < spectra.size(); ++i)
      out[i] = decode_spectrum(model, spectra[i], knapsack, cfg);
    return out;
  }

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= spectra.size()) return;
      out[i] = decode_spectrum(model, spectra[i], knapsack, cfg);
    }
  };
  std::vector<std::thread> pool;
  std::size_t n = std::min(n_threads, spectra.size());
  pool.reserve(n);
  for (std::size_t i = 0; i < n; ++i) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();
  return out;
}

}  // namespace setnovo
