#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace rqcm {

/// A permutation of {0, ..., t-1} in one-line notation: `p[c]` is the image of c.
using Permutation = std::vector<int>;

/// All permutations of t elements in lexicographic order of one-line notation.
/// The identity is always first.
std::vector<Permutation> all_permutations(int t);

Permutation identity_permutation(int t);
Permutation inverse(const Permutation& p);
/// (a * b)(c) = a(b(c)).
Permutation compose(const Permutation& a, const Permutation& b);
int cycle_count(const Permutation& p);
bool is_permutation(const Permutation& p);

/// Cycle notation with 1-based labels, e.g. "(1 2)(3)".
std::string to_cycle_string(const Permutation& p);
/// One-line notation with 1-based labels, e.g. "[2,1,3]".
std::string to_oneline_string(const Permutation& p);

std::uint64_t factorial(int k);
/// Catalan number C_t = (2t)! / ((t+1)! t!).
std::uint64_t catalan(int t);
/// Binomial coefficient; saturates at UINT64_MAX instead of overflowing.
std::uint64_t binomial(std::uint64_t n, std::uint64_t k);

}  // namespace rqcm
