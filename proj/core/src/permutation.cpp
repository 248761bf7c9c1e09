#include "rqcm/permutation.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <sstream>

#include "rqcm/errors.hpp"

namespace rqcm {

std::vector<Permutation> all_permutations(int t) {
  if (t < 1) throw InvalidArgument("all_permutations: t must be >= 1");
  std::vector<Permutation> out;
  Permutation p = identity_permutation(t);
  do {
    out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

Permutation identity_permutation(int t) {
  Permutation p(static_cast<std::size_t>(t));
  std::iota(p.begin(), p.end(), 0);
  return p;
}

Permutation inverse(const Permutation& p) {
  Permutation q(p.size());
  for (std::size_t c = 0; c < p.size(); ++c) q[static_cast<std::size_t>(p[c])] = static_cast<int>(c);
  return q;
}

Permutation compose(const Permutation& a, const Permutation& b) {
  if (a.size() != b.size()) throw InvalidArgument("compose: size mismatch");
  Permutation r(a.size());
  for (std::size_t c = 0; c < a.size(); ++c) r[c] = a[static_cast<std::size_t>(b[c])];
  return r;
}

int cycle_count(const Permutation& p) {
  std::vector<bool> seen(p.size(), false);
  int cycles = 0;
  for (std::size_t start = 0; start < p.size(); ++start) {
    if (seen[start]) continue;
    ++cycles;
    for (std::size_t c = start; !seen[c]; c = static_cast<std::size_t>(p[c])) seen[c] = true;
  }
  return cycles;
}

bool is_permutation(const Permutation& p) {
  std::vector<bool> seen(p.size(), false);
  for (int v : p) {
    if (v < 0 || static_cast<std::size_t>(v) >= p.size() || seen[static_cast<std::size_t>(v)]) return false;
    seen[static_cast<std::size_t>(v)] = true;
  }
  return true;
}

std::string to_cycle_string(const Permutation& p) {
  std::ostringstream os;
  std::vector<bool> seen(p.size(), false);
  for (std::size_t start = 0; start < p.size(); ++start) {
    if (seen[start]) continue;
    os << '(';
    bool first = true;
    for (std::size_t c = start; !seen[c]; c = static_cast<std::size_t>(p[c])) {
      seen[c] = true;
      if (!first) os << ' ';
      os << c + 1;
      first = false;
    }
    os << ')';
  }
  return os.str();
}

std::string to_oneline_string(const Permutation& p) {
  std::ostringstream os;
  os << '[';
  for (std::size_t c = 0; c < p.size(); ++c) os << (c ? "," : "") << p[c] + 1;
  os << ']';
  return os.str();
}

std::uint64_t factorial(int k) {
  std::uint64_t f = 1;
  for (int i = 2; i <= k; ++i) f *= static_cast<std::uint64_t>(i);
  return f;
}

std::uint64_t catalan(int t) {
  // C_{k+1} = C_k * 2(2k+1)/(k+2), exact in integers.
  std::uint64_t c = 1;
  for (int k = 0; k < t; ++k) c = c * 2 * static_cast<std::uint64_t>(2 * k + 1) / static_cast<std::uint64_t>(k + 2);
  return c;
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    const std::uint64_t num = n - k + i;
    // r * num / i is exact at every step; guard the multiplication.
    const std::uint64_t g = std::gcd(r, i);
    const std::uint64_t rr = r / g;
    const std::uint64_t ii = i / g;
    const std::uint64_t nn = num / ii;  // ii divides num * rr and gcd(rr, ii) = 1
    if (nn != 0 && rr > kMax / nn) return kMax;
    r = rr * nn;
  }
  return r;
}

}  // namespace rqcm
