#pragma once

#include <cstdint>
#include <vector>

namespace setnovo {

// Reachability table over discretized residue masses: bin b is feasible when
// some multiset of residues has rounded-bin masses summing to b (the empty
// multiset makes bin 0 feasible). Queries take a tolerance window wide enough
// to absorb the worst-case drift between the true residue-sum and the
// sum-of-rounded-bins, so a feasible real mass is never reported infeasible.
class KnapsackFilter {
 public:
  static constexpr double kDefaultBinWidth = 0.0005;
  static constexpr double kDefaultQueryTol = 0.02;

  KnapsackFilter(const std::vector<double>& residue_masses, double max_mass,
                 double bin_width = kDefaultBinWidth);

  std::int64_t bin_of(double mass) const;
  double bin_width() const { return width_; }
  std::int64_t max_bin() const {
    return static_cast<std::int64_t>(feasible_.size()) - 1;
  }

  bool feasible_bin(std::int64_t bin) const {
    return bin >= 0 && bin <= max_bin() && feasible_[bin] != 0;
  }

  // True when any feasible bin lies within [mass - tol, mass + tol].
  bool feasible_mass(double mass, double tol = kDefaultQueryTol) const;

 private:
  double width_;
  std::vector<std::uint8_t> feasible_;
};

}  // namespace setnovo
