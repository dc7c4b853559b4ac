#include "setnovo/spectrum.hpp"

#include <algorithm>
#include <numeric>

namespace setnovo {

void preprocess_spectrum(Spectrum& sp, std::size_t max_peaks,
                         bool normalize_intensity) {
  std::sort(sp.peaks.begin(), sp.peaks.end(), [](const Peak& a, const Peak& b) {
    if (a.mz != b.mz) return a.mz < b.mz;
    return a.intensity < b.intensity;
  });

  if (max_peaks > 0 && sp.peaks.size() > max_peaks) {
    std::vector<std::size_t> order(sp.peaks.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      if (sp.peaks[a].intensity != sp.peaks[b].intensity)
        return sp.peaks[a].intensity > sp.peaks[b].intensity;
      return sp.peaks[a].mz < sp.peaks[b].mz;
    });
    std::vector<bool> keep(sp.peaks.size(), false);
    for (std::size_t i = 0; i < max_peaks; ++i) keep[order[i]] = true;
    std::vector<Peak> kept;
    kept.reserve(max_peaks);
    for (std::size_t i = 0; i < sp.peaks.size(); ++i)
      if (keep[i]) kept.push_back(sp.peaks[i]);
    sp.peaks = std::move(kept);
  }

  if (normalize_intensity && !sp.peaks.empty()) {
    double top = 0.0;
    for (const Peak& p : sp.peaks) top = std::max(top, p.intensity);
    if (top > 0.0)
      for (Peak& p : sp.peaks) p.intensity /= top;
  }
}

}  // namespace setnovo
