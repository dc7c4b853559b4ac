#include "setnovo/metrics.hpp"

#include <cmath>

namespace setnovo::metrics {
namespace {

constexpr double kPrefixTol = 0.5;
constexpr double kResidueTol = 0.1;

std::vector<double> prefix_before(const chem::Peptide& p) {
  std::vector<double> pb(p.size(), 0.0);
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    pb[i] = acc;
    acc += chem::residue_mass(p[i]);
  }
  return pb;
}

}  // namespace

MatchCounts match_peptides(const chem::Peptide& real,
                           const chem::Peptide& pred) {
  MatchCounts mc;
  mc.real_len = real.size();
  mc.pred_len = pred.size();

  std::vector<double> pb_real = prefix_before(real);
  std::vector<double> pb_pred = prefix_before(pred);

  std::size_t i = 0, j = 0;
  while (i < real.size() && j < pred.size()) {
    if (std::abs(pb_real[i] - pb_pred[j]) < kPrefixTol) {
      double dm = chem::residue_mass(real[i]) - chem::residue_mass(pred[j]);
      if (std::abs(dm) < kResidueTol) ++mc.n_match;
      ++i;
      ++j;
    } else if (pb_real[i] < pb_pred[j]) {
      ++i;
    } else {
      ++j;
    }
  }

  mc.full = mc.real_len == mc.pred_len && mc.n_match == mc.real_len &&
            mc.real_len > 0;
  return mc;
}

Aggregate aggregate(const std::vector<MatchCounts>& counts) {
  Aggregate a;
  a.n_spectra = counts.size();
  for (const MatchCounts& mc : counts) {
    a.total_real += mc.real_len;
    a.total_pred += mc.pred_len;
    a.total_match += mc.n_match;
    if (mc.full) ++a.full_matches;
  }
  if (a.total_real > 0)
    a.aa_recall =
        static_cast<double>(a.total_match) / static_cast<double>(a.total_real);
  if (a.total_pred > 0)
    a.aa_precision =
        static_cast<double>(a.total_match) / static_cast<double>(a.total_pred);
  else
    a.no_predictions = true;
  if (a.n_spectra > 0)
    a.peptide_recall = static_cast<double>(a.full_matches) /
                       static_cast<double>(a.n_spectra);
  return a;
}

}  // namespace setnovo::metrics
