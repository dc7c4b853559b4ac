#pragma once

#include <string>
#include <vector>

#include "setnovo/chem.hpp"

namespace setnovo {

struct Peak {
  double mz = 0.0;
  double intensity = 0.0;

  friend bool operator==(const Peak&, const Peak&) = default;
};

struct Spectrum {
  std::string title;
  double pepmass = 0.0;  // observed precursor m/z
  int charge = 0;
  long scan = -1;
  bool has_seq = false;
  chem::Peptide seq;
  std::vector<Peak> peaks;

  friend bool operator==(const Spectrum&, const Spectrum&) = default;

  // Neutral (uncharged) precursor mass implied by pepmass and charge.
  double precursor_neutral_mass() const {
    return pepmass * charge - charge * chem::kMassProton;
  }

  // Sum of residue masses the peptide must account for.
  double total_residue_mass() const {
    return precursor_neutral_mass() - chem::kMassH2O;
  }
};

// Sorts peaks by m/z, keeps the max_peaks most intense (ties keep the lower
// m/z), and optionally rescales intensities so the strongest peak is 1.
// The surviving peaks stay in m/z order.
void preprocess_spectrum(Spectrum& sp, std::size_t max_peaks,
                         bool normalize_intensity);

}  // namespace setnovo
