#include "setnovo/features.hpp"

#include <cmath>

#include "setnovo/kernels.hpp"

namespace setnovo::features {

using chem::kNumIonTypes;
using chem::kVocabSize;

std::array<double, kVocabSize * kNumIonTypes> theoretical_mz_table(
    double prefix_mass, double total_residue_mass) {
  std::array<double, kVocabSize * kNumIonTypes> table;
  const auto& ions = chem::ion_types();
  for (std::size_t v = 0; v < kVocabSize; ++v) {
    auto token = static_cast<chem::TokenId>(v);
    if (!chem::is_residue(token)) {
      for (std::size_t j = 0; j < kNumIonTypes; ++j)
        table[v * kNumIonTypes + j] = kSentinelMz;
      continue;
    }
    double suffix = total_residue_mass - prefix_mass - chem::residue_mass(token);
    if (suffix < 0.0) {
      // candidate does not fit in the remaining mass, no physical fragments
      for (std::size_t j = 0; j < kNumIonTypes; ++j)
        table[v * kNumIonTypes + j] = kSentinelMz;
      continue;
    }
    for (std::size_t j = 0; j < kNumIonTypes; ++j)
      table[v * kNumIonTypes + j] =
          chem::theoretical_mz(prefix_mass, suffix, token, ions[j]);
  }
  return table;
}

DifferenceTensor difference_tensor(const std::vector<Peak>& peaks,
                                   double prefix_mass,
                                   double total_residue_mass) {
  auto table = theoretical_mz_table(prefix_mass, total_residue_mass);
  DifferenceTensor dt;
  dt.n_peaks = peaks.size();
  dt.d.resize(peaks.size() * table.size());
  for (std::size_t k = 0; k < peaks.size(); ++k) {
    double* row = dt.d.data() + k * table.size();
    for (std::size_t c = 0; c < table.size(); ++c)
      row[c] = peaks[k].mz - table[c];
  }
  return dt;
}

std::vector<double> activation(const DifferenceTensor& dt) {
  std::vector<double> out(dt.d.size());
  kernels::active_table().exp_neg_abs_scale(dt.d.data(), out.data(),
                                            dt.d.size(), kActivationScale);
  return out;
}

void feature_matrix_into(const std::vector<Peak>& peaks, double prefix_mass,
                         double total_residue_mass, double* out) {
  auto table = theoretical_mz_table(prefix_mass, total_residue_mass);
  const std::size_t act_cols = table.size();
  for (std::size_t k = 0; k < peaks.size(); ++k) {
    double* row = out + k * kFeatureDim;
    for (std::size_t c = 0; c < act_cols; ++c) row[c] = peaks[k].mz - table[c];
    kernels::active_table().exp_neg_abs_scale(row, row, act_cols,
                                              kActivationScale);
    row[act_cols] = peaks[k].intensity;
  }
}

nn::Tensor feature_matrix(const std::vector<Peak>& peaks, double prefix_mass,
                          double total_residue_mass) {
  nn::Tensor f(peaks.size(), kFeatureDim);
  feature_matrix_into(peaks, prefix_mass, total_residue_mass, f.data.data());
  return f;
}

void positional_embedding(double mz, std::size_t dim, double* out) {
  nn::check_shape(dim % 2 == 0, "positional_embedding: dim must be even");
  long loc = std::lround(mz / kLocResolution);
  if (loc < 0) loc = 0;
  if (loc > kMaxLoc) loc = kMaxLoc;
  double pos = static_cast<double>(loc);
  for (std::size_t k = 0; 2 * k < dim; ++k) {
    double exponent = static_cast<double>(2 * k) / static_cast<double>(dim);
    double angle = pos / std::pow(10000.0, exponent);
    out[2 * k] = std::sin(angle);
    out[2 * k + 1] = std::cos(angle);
  }
}

nn::Tensor spectrum_summary(const std::vector<Peak>& peaks, std::size_t dim) {
  nn::Tensor s(1, dim);
  std::vector<double> pe(dim);
  for (const Peak& p : peaks) {
    positional_embedding(p.mz, dim, pe.data());
    kernels::active_table().axpy(p.intensity, pe.data(), s.data.data(), dim);
  }
  return s;
}

}  // namespace setnovo::features
