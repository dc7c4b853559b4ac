#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "setnovo/chem.hpp"
#include "setnovo/spectrum.hpp"
#include "setnovo/tensor.hpp"

namespace setnovo::features {

// Sharpness of the match activation exp(-c * |observed - theoretical|).
inline constexpr double kActivationScale = 100.0;

// Placeholder theoretical m/z for (token, ion) pairs that have no physical
// fragment: special tokens, and y ions whose suffix mass would be negative.
// Far enough from any observed m/z that the activation is exactly zero.
inline constexpr double kSentinelMz = 1e9;

// m/z discretization for the positional embedding.
inline constexpr double kLocResolution = 0.1;
inline constexpr long kMaxLoc = 50000;

inline constexpr std::size_t kFeatureDim =
    chem::kVocabSize * chem::kNumIonTypes + 1;

// Theoretical m/z for every (token, ion) pair at one sequence position.
// Entry [v * kNumIonTypes + j] covers token v, ion j.
std::array<double, chem::kVocabSize * chem::kNumIonTypes> theoretical_mz_table(
    double prefix_mass, double total_residue_mass);

// Observed-minus-theoretical differences, shape (n_peaks, 26, 8).
struct DifferenceTensor {
  std::size_t n_peaks = 0;
  std::vector<double> d;

  double at(std::size_t k, std::size_t v, std::size_t j) const {
    return d[(k * chem::kVocabSize + v) * chem::kNumIonTypes + j];
  }
};

DifferenceTensor difference_tensor(const std::vector<Peak>& peaks,
                                   double prefix_mass,
                                   double total_residue_mass);

// exp(-kActivationScale * |d|) over a difference tensor.
std::vector<double> activation(const DifferenceTensor& dt);

// Fused feature matrix, shape (n_peaks, 209): columns [0, 208) hold the
// activations flattened token-major (column v*8 + j), column 208 the peak
// intensity. Equals composing difference_tensor and activation bit for bit.
nn::Tensor feature_matrix(const std::vector<Peak>& peaks, double prefix_mass,
                          double total_residue_mass);

// Same computation written into caller storage of peaks.size() * kFeatureDim
// doubles, row-major.
void feature_matrix_into(const std::vector<Peak>& peaks, double prefix_mass,
                         double total_residue_mass, double* out);

// Sinusoidal embedding of one m/z value into dim slots (dim must be even):
// out[2k] = sin(loc / 10000^(2k/dim)), out[2k+1] = cos(loc / 10000^(2k/dim)),
// loc = round(mz / kLocResolution) clamped to [0, kMaxLoc].
void positional_embedding(double mz, std::size_t dim, double* out);

// Intensity-weighted sum of peak embeddings, shape (1, dim). Feeds the
// decoder's initial hidden and cell state.
nn::Tensor spectrum_summary(const std::vector<Peak>& peaks, std::size_t dim);

}  // namespace setnovo::features
