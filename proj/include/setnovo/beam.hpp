#pragma once

#include <cstddef>
#include <vector>

#include "setnovo/chem.hpp"
#include "setnovo/knapsack.hpp"
#include "setnovo/network.hpp"
#include "setnovo/spectrum.hpp"

namespace setnovo {

struct BeamConfig {
  std::size_t width = 5;
  std::size_t max_len = 50;
  // The peptide may end only when the unexplained mass is within this.
  double precursor_tol = 0.01;
  // Window handed to the knapsack filter for remaining-mass queries.
  double mass_window = KnapsackFilter::kDefaultQueryTol;
};

struct Prediction {
  bool found = false;
  chem::Peptide peptide;
  double score = 0.0;                    // sum of step log-probs, end included
  std::vector<double> step_logprobs;     // one per residue plus the end step
};

// Knapsack-constrained beam search over the model's step distribution.
// Log-probabilities come from the full-vocabulary softmax; masking removes
// candidates from expansion but never renormalizes the distribution. Emitting
// the end token moves a hypothesis to the completed pool without consuming
// beam width. The spectrum must already be preprocessed.
Prediction decode_spectrum(const nn::Model& model, const Spectrum& sp,
                           const KnapsackFilter& knapsack,
                           const BeamConfig& cfg);

// Decodes many spectra, optionally across threads; results keep input order.
std::vector<Prediction> decode_all(const nn::Model& model,
                                   const std::vector<Spectrum>& spectra,
                                   const KnapsackFilter& knapsack,
                                   const BeamConfig& cfg,
                                   std::size_t n_threads = 1);

}  // namespace setnovo
