#include "rqcm/occupation_basis.hpp"

#include <cmath>
#include <cstdlib>
#include <string>

#include "rqcm/errors.hpp"

namespace rqcm {

std::uint64_t dimension_cap() {
  if (const char* env = std::getenv("RQCM_DIM_CAP")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return v;
    throw InvalidArgument(std::string("RQCM_DIM_CAP must be a positive integer, got '") + env + "'");
  }
  return kDefaultDimensionCap;
}

OccupationBasis::OccupationBasis(int modes, int particles, std::uint64_t cap)
    : modes_(modes), particles_(particles), size_(0) {
  if (modes < 1 || particles < 0) throw InvalidArgument("OccupationBasis: need modes >= 1 and particles >= 0");
  if (cap == 0) cap = dimension_cap();
  const std::uint64_t total = binomial(static_cast<std::uint64_t>(particles + modes - 1), static_cast<std::uint64_t>(modes - 1));
  if (total > cap) {
    throw DimensionError("symmetric sector dimension " + std::to_string(total) + " exceeds cap " + std::to_string(cap) +
                         " (set RQCM_DIM_CAP to raise it)");
  }
  size_ = static_cast<std::size_t>(total);

  const auto stride = static_cast<std::size_t>(modes_ + 1);
  binom_.assign(static_cast<std::size_t>(particles_ + 1) * stride, 0);
  for (int p = 0; p <= particles_; ++p)
    for (int m = 1; m <= modes_; ++m)
      binom_[static_cast<std::size_t>(p) * stride + static_cast<std::size_t>(m)] =
          binomial(static_cast<std::uint64_t>(p + m - 1), static_cast<std::uint64_t>(m - 1));

  table_.resize(size_ * static_cast<std::size_t>(modes_));
  Occupation occ(static_cast<std::size_t>(modes_), 0);
  occ[0] = particles_;
  for (std::size_t k = 0; k < size_; ++k) {
    std::copy(occ.begin(), occ.end(), table_.begin() + static_cast<std::ptrdiff_t>(k * static_cast<std::size_t>(modes_)));
    if (k + 1 == size_) break;
    // Successor in descending order: move one boson from the last nonzero
    // mode before the tail to the next mode, collecting the tail there.
    int j = modes_ - 2;
    while (occ[static_cast<std::size_t>(j)] == 0) --j;
    const int tail = occ[static_cast<std::size_t>(modes_ - 1)];
    occ[static_cast<std::size_t>(modes_ - 1)] = 0;
    occ[static_cast<std::size_t>(j)] -= 1;
    occ[static_cast<std::size_t>(j + 1)] = tail + 1;
  }
}

std::uint64_t OccupationBasis::count(int p, int m) const {
  return binom_[static_cast<std::size_t>(p) * static_cast<std::size_t>(modes_ + 1) + static_cast<std::size_t>(m)];
}

Occupation OccupationBasis::unrank(std::size_t k) const {
  if (k >= size_) throw InvalidArgument("OccupationBasis::unrank: index out of range");
  const int* s = state(k);
  return Occupation(s, s + modes_);
}

std::size_t OccupationBasis::rank(const int* occ) const {
  std::uint64_t r = 0;
  int remaining = particles_;
  for (int a = 0; a + 1 < modes_; ++a) {
    // States with more bosons in mode a come first.
    for (int v = occ[a] + 1; v <= remaining; ++v) r += count(remaining - v, modes_ - a - 1);
    remaining -= occ[a];
  }
  return static_cast<std::size_t>(r);
}

std::size_t OccupationBasis::rank(const Occupation& occ) const {
  if (static_cast<int>(occ.size()) != modes_) throw InvalidArgument("OccupationBasis::rank: wrong number of modes");
  int total = 0;
  for (int v : occ) {
    if (v < 0) throw InvalidArgument("OccupationBasis::rank: negative occupation");
    total += v;
  }
  if (total != particles_) throw InvalidArgument("OccupationBasis::rank: wrong particle number");
  return rank(occ.data());
}

Eigen::VectorXcd product_state_in_fock(const Eigen::VectorXcd& v, const OccupationBasis& basis) {
  if (v.size() != basis.modes()) throw InvalidArgument("product_state_in_fock: amplitude vector has wrong length");
  if (std::abs(v.norm() - 1.0) > 1e-12) throw InvalidArgument("product_state_in_fock: amplitude vector is not normalized");
  const int n = basis.particles();
  std::vector<double> log_fact(static_cast<std::size_t>(n + 1), 0.0);
  for (int i = 1; i <= n; ++i) log_fact[static_cast<std::size_t>(i)] = log_fact[static_cast<std::size_t>(i - 1)] + std::log(i);

  Eigen::VectorXcd out(static_cast<Eigen::Index>(basis.size()));
  for (std::size_t k = 0; k < basis.size(); ++k) {
    const int* occ = basis.state(k);
    double log_mult = log_fact[static_cast<std::size_t>(n)];
    cplx amp(1.0, 0.0);
    for (int a = 0; a < basis.modes(); ++a) {
      if (occ[a] == 0) continue;
      log_mult -= log_fact[static_cast<std::size_t>(occ[a])];
      amp *= std::pow(v(a), occ[a]);
    }
    out(static_cast<Eigen::Index>(k)) = amp == cplx(0.0) ? amp : std::sqrt(std::exp(log_mult)) * amp;
  }
  return out;
}

}  // namespace rqcm
