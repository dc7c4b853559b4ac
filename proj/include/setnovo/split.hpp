#pragma once

#include <vector>

#include "setnovo/rng.hpp"
#include "setnovo/spectrum.hpp"

namespace setnovo {

struct SplitFractions {
  double train = 0.8;
  double val = 0.1;
  double test = 0.1;
};

struct SplitResult {
  std::vector<Spectrum> train;
  std::vector<Spectrum> val;
  std::vector<Spectrum> test;
};

// Partitions spectra so that no peptide sequence appears in more than one
// split. Spectra sharing a peptide move as a group; groups are shuffled by
// the seed and dealt to splits until each reaches its spectrum-count target.
// Every spectrum must carry a sequence.
SplitResult split_by_peptide(const std::vector<Spectrum>& spectra,
                             const SplitFractions& fractions,
                             std::uint64_t seed);

}  // namespace setnovo
