#pragma once

#include <cstdint>
#include <vector>

#include "setnovo/chem.hpp"
#include "setnovo/rng.hpp"
#include "setnovo/spectrum.hpp"

namespace setnovo::synth {

struct SynthConfig {
  std::size_t count = 5000;
  std::vector<chem::TokenId> alphabet;  // empty means all residue tokens
  std::size_t min_len = 7;
  std::size_t max_len = 12;
  int charge = 2;
  // Each (cleavage site, ion type) pair produces a peak with this probability.
  double coverage = 0.9;
  // Gaussian m/z jitter on fragment peaks, clipped at 4 sigma.
  double mz_sigma = 0.002;
  std::size_t noise_peaks = 20;
  std::uint64_t seed = 1;
};

// Peptides are drawn uniformly from the alphabet; fragment peaks cover every
// proper cleavage site. All m/z values are quantized to 5 decimals and
// intensities to 1 decimal (signal in [0.5, 1.0], noise in [0.1, 0.3]), so a
// generated spectrum survives an MGF write/parse cycle unchanged.
std::vector<Spectrum> generate(const SynthConfig& cfg);

}  // namespace setnovo::synth
