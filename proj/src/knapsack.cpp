#include "setnovo/knapsack.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace setnovo {

KnapsackFilter::KnapsackFilter(const std::vector<double>& residue_masses,
                               double max_mass, double bin_width)
    : width_(bin_width) {
  if (bin_width <= 0.0)
    throw std::invalid_argument("knapsack: bin width must be positive");
  if (max_mass <= 0.0)
    throw std::invalid_argument("knapsack: max mass must be positive");
  if (residue_masses.empty())
    throw std::invalid_argument("knapsack: no residues");

  std::vector<std::int64_t> bins;
  bins.reserve(residue_masses.size());
  for (double m : residue_masses) {
    if (m <= 0.0)
      throw std::invalid_argument("knapsack: residue masses must be positive");
    bins.push_back(std::llround(m / width_));
  }
  std::sort(bins.begin(), bins.end());
  bins.erase(std::unique(bins.begin(), bins.end()), bins.end());

  auto max_bin = static_cast<std::int64_t>(std::llround(max_mass / width_));
  feasible_.assign(static_cast<std::size_t>(max_bin) + 1, 0);
  feasible_[0] = 1;
  for (std::int64_t b = bins.front(); b <= max_bin; ++b) {
    for (std::int64_t rb : bins) {
      if (rb > b) break;
      if (feasible_[b - rb]) {
        feasible_[b] = 1;
        break;
      }
    }
  }
}

std::int64_t KnapsackFilter::bin_of(double mass) const {
  return std::llround(mass / width_);
}

bool KnapsackFilter::feasible_mass(double mass, double tol) const {
  std::int64_t lo = bin_of(mass - tol);
  std::int64_t hi = bin_of(mass + tol);
  lo = std::max<std::int64_t>(lo, 0);
  hi = std::min(hi, max_bin());
  for (std::int64_t b = lo; b <= hi; ++b)
    if (feasible_[b]) return true;
  return false;
}

}  // namespace setnovo
