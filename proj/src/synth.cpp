#include "setnovo/synth.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace setnovo::synth {
namespace {

double quantize_mz(double mz) { return std::round(mz * 1e5) / 1e5; }

double quantize_intensity(double x) {
  double q = std::round(x * 10.0) / 10.0;
  return std::max(q, 0.1);
}

}  // namespace

std::vector<Spectrum> generate(const SynthConfig& cfg) {
  if (cfg.min_len < 1 || cfg.max_len < cfg.min_len)
    throw std::invalid_argument("synth: bad length range");
  if (cfg.charge < 1) throw std::invalid_argument("synth: bad charge");
  if (cfg.coverage < 0.0 || cfg.coverage > 1.0)
    throw std::invalid_argument("synth: coverage must be in [0, 1]");

  std::vector<chem::TokenId> alphabet = cfg.alphabet;
  if (alphabet.empty()) {
    for (std::size_t v = 0; v < chem::kVocabSize; ++v)
      if (chem::is_residue(static_cast<chem::TokenId>(v)))
        alphabet.push_back(static_cast<chem::TokenId>(v));
  } else {
    for (chem::TokenId t : alphabet)
      if (!chem::is_residue(t))
        throw std::invalid_argument("synth: alphabet contains a non-residue");
  }

  Rng rng(cfg.seed);
  const auto& ions = chem::ion_types();
  std::vector<Spectrum> out;
  out.reserve(cfg.count);

  for (std::size_t i = 0; i < cfg.count; ++i) {
    std::size_t len =
        cfg.min_len + static_cast<std::size_t>(
                          rng.below(cfg.max_len - cfg.min_len + 1));
    chem::Peptide pep(len);
    for (auto& t : pep)
      t = alphabet[static_cast<std::size_t>(rng.below(alphabet.size()))];

    double total = chem::residue_sum(pep);
    double neutral = total + chem::kMassH2O;
    double z = cfg.charge;
    double pepmass = (neutral + z * chem::kMassProton) / z;

    Spectrum sp;
    sp.title = "synth_" + std::to_string(i);
    sp.pepmass = quantize_mz(pepmass);
    sp.charge = cfg.charge;
    sp.scan = static_cast<long>(i);
    sp.has_seq = true;
    sp.seq = pep;

    double prefix = 0.0;
    for (std::size_t pos = 0; pos + 1 < len; ++pos) {
      double suffix = total - prefix - chem::residue_mass(pep[pos]);
      for (const chem::IonType& ion : ions) {
        if (!rng.bernoulli(cfg.coverage)) continue;
        double mz = chem::theoretical_mz(prefix, suffix, pep[pos], ion);
        if (cfg.mz_sigma > 0.0) {
          double jitter = rng.normal(0.0, cfg.mz_sigma);
          double cap = 4.0 * cfg.mz_sigma;
          jitter = std::clamp(jitter, -cap, cap);
          mz += jitter;
        }
        sp.peaks.push_back(
            {quantize_mz(mz), quantize_intensity(rng.uniform(0.5, 1.0))});
      }
      prefix += chem::residue_mass(pep[pos]);
    }

    double mz_hi = sp.pepmass * z;
    for (std::size_t k = 0; k < cfg.noise_peaks; ++k) {
      double mz = rng.uniform(50.0, mz_hi);
      sp.peaks.push_back(
          {quantize_mz(mz), quantize_intensity(rng.uniform(0.05, 0.3))});
    }

    std::sort(sp.peaks.begin(), sp.peaks.end(),
              [](const Peak& a, const Peak& b) {
                if (a.mz != b.mz) return a.mz < b.mz;
                return a.intensity < b.intensity;
              });
    out.push_back(std::move(sp));
  }
  return out;
}

}  // namespace setnovo::synth
