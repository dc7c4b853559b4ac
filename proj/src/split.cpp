#include "setnovo/split.hpp"

#include <map>
#include <stdexcept>
#include <string>

namespace setnovo {

SplitResult split_by_peptide(const std::vector<Spectrum>& spectra,
                             const SplitFractions& fractions,
                             std::uint64_t seed) {
  if (fractions.train < 0 || fractions.val < 0 || fractions.test < 0)
    throw std::invalid_argument("split fractions must be nonnegative");
  double total = fractions.train + fractions.val + fractions.test;
  if (total <= 0) throw std::invalid_argument("split fractions sum to zero");

  std::map<std::string, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < spectra.size(); ++i) {
    if (!spectra[i].has_seq)
      throw std::invalid_argument("spectrum without SEQ cannot be split: " +
                                  spectra[i].title);
    groups[chem::peptide_to_string(spectra[i].seq)].push_back(i);
  }

  std::vector<const std::vector<std::size_t>*> order;
  order.reserve(groups.size());
  for (const auto& [pep, members] : groups) order.push_back(&members);
  Rng rng(seed);
  rng.shuffle(order);

  double n = static_cast<double>(spectra.size());
  std::size_t train_target =
      static_cast<std::size_t>(n * fractions.train / total + 0.5);
  std::size_t val_target =
      static_cast<std::size_t>(n * (fractions.train + fractions.val) / total +
                               0.5);

  SplitResult out;
  std::size_t assigned = 0;
  for (const auto* members : order) {
    std::vector<Spectrum>* dest;
    if (assigned < train_target)
      dest = &out.train;
    else if (assigned < val_target)
      dest = &out.val;
    else
      dest = &out.test;
    for (std::size_t i : *members) dest->push_back(spectra[i]);
    assigned += members->size();
  }
  return out;
}

}  // namespace setnovo
