#include <gtest/gtest.h>

#include <cstdlib>
#include <numeric>
#include <random>

#include "rqcm/errors.hpp"
#include "rqcm/occupation_basis.hpp"
#include "rqcm/permutation.hpp"

using namespace rqcm;

TEST(OccupationBasis, SizeIsStarsAndBars) {
  for (int d : {1, 2, 5, 16})
    for (int n : {0, 1, 3, 6}) EXPECT_EQ(OccupationBasis(d, n).size(), binomial(n + d - 1, d - 1));
  EXPECT_EQ(OccupationBasis(5, 20).size(), 10626u);
}

TEST(OccupationBasis, RankUnrankBijectionAndOrder) {
  const OccupationBasis b(4, 5);
  for (std::size_t k = 0; k < b.size(); ++k) {
    const Occupation occ = b.unrank(k);
    EXPECT_EQ(std::accumulate(occ.begin(), occ.end(), 0), 5);
    EXPECT_EQ(b.rank(occ), k);
    EXPECT_EQ(b.rank(b.state(k)), k);
    if (k > 0) EXPECT_TRUE(b.unrank(k - 1) > occ);  // lexicographically descending
  }
  EXPECT_EQ(b.unrank(0), (Occupation{5, 0, 0, 0}));
  EXPECT_EQ(b.unrank(b.size() - 1), (Occupation{0, 0, 0, 5}));
}

TEST(OccupationBasis, CapIsEnforced) {
  EXPECT_THROW(OccupationBasis(16, 10, 1000), DimensionError);
  EXPECT_NO_THROW(OccupationBasis(16, 2, 1000));
}

TEST(OccupationBasis, EnvironmentOverridesCap) {
  ::setenv("RQCM_DIM_CAP", "1234", 1);
  EXPECT_EQ(dimension_cap(), 1234u);
  ::unsetenv("RQCM_DIM_CAP");
  EXPECT_EQ(dimension_cap(), kDefaultDimensionCap);
}

// The symmetrized product state is normalized, and its amplitudes agree with
// a brute-force expansion of v^{(x)n} grouped by occupation.
TEST(ProductState, NormalizedAndMatchesBruteForce) {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> g;
  const int d = 3, n = 4;
  Eigen::VectorXcd v(d);
  for (auto& z : v) z = {g(rng), g(rng)};
  v.normalize();
  const OccupationBasis b(d, n);
  const Eigen::VectorXcd fock = product_state_in_fock(v, b);
  EXPECT_NEAR(fock.norm(), 1.0, 1e-12);

  // Sum over all d^n index strings; each string contributes to its occupation
  // with weight 1/sqrt(multinomial).
  Eigen::VectorXcd brute = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(b.size()));
  std::vector<int> digits(n, 0);
  for (int code = 0; code < 81; ++code) {
    int c = code;
    Occupation occ(d, 0);
    cplx amp = 1.0;
    for (int s = 0; s < n; ++s) {
      digits[s] = c % d;
      c /= d;
      ++occ[digits[s]];
      amp *= v(digits[s]);
    }
    double multinomial = static_cast<double>(factorial(n));
    for (int k : occ) multinomial /= static_cast<double>(factorial(k));
    brute(static_cast<Eigen::Index>(b.rank(occ))) += amp / std::sqrt(multinomial);
  }
  EXPECT_LT((brute - fock).norm(), 1e-12);
}

TEST(ProductState, RejectsUnnormalized) {
  EXPECT_THROW(product_state_in_fock(Eigen::VectorXcd::Ones(2), OccupationBasis(2, 2)), InvalidArgument);
}

TEST(OccupationBasis, SmallExamples) {
  const OccupationBasis b(2, 3);
  ASSERT_EQ(b.size(), 4u);
  EXPECT_EQ(b.unrank(1), (Occupation{2, 1}));
  EXPECT_EQ(b.unrank(2), (Occupation{1, 2}));
  EXPECT_EQ(OccupationBasis(2, 10).size(), 11u);
}

TEST(ProductState, SmallExamples) {
  Eigen::VectorXcd e0(2);
  e0 << 1, 0;
  const Eigen::VectorXcd f = product_state_in_fock(e0, OccupationBasis(2, 5));
  EXPECT_NEAR(std::abs(f(0) - 1.0), 0.0, 1e-15);
  Eigen::VectorXcd v(2);
  v << 0.6, cplx(0, 0.8);
  const Eigen::VectorXcd g = product_state_in_fock(v, OccupationBasis(2, 2));
  EXPECT_NEAR(std::abs(g(0) - v(0) * v(0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(g(1) - std::sqrt(2.0) * v(0) * v(1)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(g(2) - v(1) * v(1)), 0.0, 1e-15);
}
