#pragma once

#include <cstddef>
#include <vector>

#include "setnovo/chem.hpp"

namespace setnovo::metrics {

// Per-spectrum comparison of a predicted peptide against the true one.
struct MatchCounts {
  std::size_t real_len = 0;
  std::size_t pred_len = 0;
  std::size_t n_match = 0;
  bool full = false;
};

// Position alignment by prefix mass: two residues are compared when the
// residue-sums strictly before them differ by less than 0.5 Da, and count as
// a match when their own masses differ by less than 0.1 Da. Outside the
// window the sequence with the smaller prefix advances.
MatchCounts match_peptides(const chem::Peptide& real, const chem::Peptide& pred);

struct Aggregate {
  std::size_t n_spectra = 0;
  std::size_t total_real = 0;
  std::size_t total_pred = 0;
  std::size_t total_match = 0;
  std::size_t full_matches = 0;
  double aa_recall = 0.0;      // total_match / total_real
  double aa_precision = 0.0;   // total_match / total_pred
  bool no_predictions = false;  // total_pred was zero; aa_precision meaningless
  double peptide_recall = 0.0;  // full_matches / n_spectra
};

Aggregate aggregate(const std::vector<MatchCounts>& counts);

}  // namespace setnovo::metrics
