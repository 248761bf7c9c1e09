#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "rqcm/moment_space.hpp"

namespace rqcm {

/// Occupation numbers (n_1, ..., n_d) of d bosonic modes.
using Occupation = std::vector<int>;

/// Default cap on the symmetric-sector dimension; RQCM_DIM_CAP overrides it.
inline constexpr std::uint64_t kDefaultDimensionCap = 200000;
std::uint64_t dimension_cap();

/// All occupations of `modes` modes with `particles` bosons, ordered
/// lexicographically descending: (n,0,..,0) first, (0,..,0,n) last.
class OccupationBasis {
 public:
  /// Throws DimensionError if the size exceeds `cap` (0 means dimension_cap()).
  OccupationBasis(int modes, int particles, std::uint64_t cap = 0);

  int modes() const { return modes_; }
  int particles() const { return particles_; }
  std::size_t size() const { return size_; }

  /// Occupation of state k; pointer to `modes()` consecutive ints.
  const int* state(std::size_t k) const { return &table_[k * static_cast<std::size_t>(modes_)]; }
  Occupation unrank(std::size_t k) const;
  std::size_t rank(const int* occupation) const;
  std::size_t rank(const Occupation& occupation) const;

 private:
  // Number of ways to place `p` bosons in `m` modes.
  std::uint64_t count(int p, int m) const;

  int modes_;
  int particles_;
  std::size_t size_;
  std::vector<std::uint64_t> binom_;  // (p + m - 1 choose m - 1) tabulated
  std::vector<int> table_;
};

/// Fock amplitudes of the product state v^{(x)n}:
/// sqrt(n! / prod n_a!) prod v_a^{n_a}. Requires |v| = 1 within 1e-12.
Eigen::VectorXcd product_state_in_fock(const Eigen::VectorXcd& v, const OccupationBasis& basis);

}  // namespace rqcm
