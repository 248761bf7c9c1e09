#include <gtest/gtest.h>

#include <random>

#include "rqcm/errors.hpp"
#include "rqcm/moment_space.hpp"

using namespace rqcm;

TEST(Permutation, CountsAndCatalan) {
  EXPECT_EQ(all_permutations(4).size(), 24u);
  EXPECT_EQ(all_permutations(3).front(), identity_permutation(3));
  const std::uint64_t expected[] = {1, 1, 2, 5, 14, 42};
  for (int t = 0; t <= 5; ++t) EXPECT_EQ(catalan(t), expected[t]);
  EXPECT_EQ(to_cycle_string({1, 0, 2}), "(1 2)(3)");
}

TEST(Permutation, ComposeInverseCycles) {
  for (const auto& p : all_permutations(4)) {
    EXPECT_EQ(compose(p, inverse(p)), identity_permutation(4));
    EXPECT_TRUE(is_permutation(p));
  }
  EXPECT_EQ(cycle_count(identity_permutation(5)), 5);
  EXPECT_EQ(cycle_count({1, 2, 0}), 1);
}

// Rank of the permutation Gram matrix: C_t for one qubit, t! once local_dim >= t.
TEST(Gram, RankMatchesCommutantDimension) {
  for (int t = 1; t <= 5; ++t) {
    Eigen::FullPivLU<Eigen::MatrixXd> lu(gram_matrix(t, 2));
    lu.setThreshold(1e-9);
    EXPECT_EQ(lu.rank(), static_cast<Eigen::Index>(catalan(t))) << "t=" << t;
  }
  for (int t = 1; t <= 4; ++t) {
    Eigen::FullPivLU<Eigen::MatrixXd> lu(gram_matrix(t, 4));
    lu.setThreshold(1e-9);
    EXPECT_EQ(lu.rank(), static_cast<Eigen::Index>(factorial(t))) << "t=" << t;
  }
}

TEST(Gram, EntriesAreCycleCounts) {
  const auto perms = all_permutations(3);
  const Eigen::MatrixXd g = gram_matrix(3, 2);
  for (std::size_t a = 0; a < perms.size(); ++a)
    for (std::size_t b = 0; b < perms.size(); ++b) {
      const OperatorKet ka = permutation_ket(perms[a], 2), kb = permutation_ket(perms[b], 2);
      EXPECT_NEAR(ka.inner(kb).real(), g(a, b), 1e-12);
      EXPECT_NEAR(g(a, b), std::pow(2.0, cycle_count(compose(inverse(perms[a]), perms[b]))), 1e-12);
    }
}

TEST(PauliCoordinates, RoundTrip) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  for (int t = 1; t <= 3; ++t) {
    Eigen::VectorXcd c(ipow(4, t));
    for (auto& z : c) z = {g(rng), g(rng)};
    const OperatorKet k(t, 2, c);
    const Eigen::VectorXcd p = to_pauli_coordinates(k);
    EXPECT_NEAR(p.norm(), c.norm(), 1e-10);  // unitary change of basis
    EXPECT_LT((from_pauli_coordinates(t, 2, p).coefficients() - c).norm(), 1e-10);
  }
}

TEST(PauliString, ParseIndexDegree) {
  const PauliString s = PauliString::parse("XIZ");
  EXPECT_EQ(s.degree(), 2);
  EXPECT_EQ(s.index(), 1u * 16 + 0 * 4 + 3);
  EXPECT_EQ(PauliString::from_index(3, s.index()).to_string(), "XIZ");
  EXPECT_THROW(PauliString::parse("XQ"), Error);
}

TEST(InvariantBasis, OrthonormalInvariantAndCatalanSized) {
  for (int t = 1; t <= 4; ++t) {
    const LocalBasis b = u2_invariant_basis(t);
    EXPECT_EQ(b.size(), static_cast<int>(catalan(t)));
    EXPECT_LT(b.orthonormality_defect(), 1e-12);
    for (int k = 0; k < b.size(); ++k) {
      EXPECT_LT(twirl_defect(b.kets.col(k), t, 8, 11 + k), 1e-10);
      EXPECT_LT(b.kets.col(k).imag().norm(), 1e-14);
    }
    // Element 0 is the normalized identity.
    EXPECT_NEAR(std::abs(b.kets(0, 0)), 1.0, 1e-12);
  }
}

TEST(InvariantBasis, SpansPermutationKets) {
  const int t = 3;
  const LocalBasis b = u2_invariant_basis(t);
  for (const auto& p : all_permutations(t)) {
    const Eigen::VectorXcd v = normalized_permutation_coordinates(p);
    const Eigen::VectorXcd residue = v - b.kets * (b.kets.adjoint() * v);
    EXPECT_LT(residue.norm(), 1e-12);
  }
}

TEST(InvariantBasis, NonInvariantPauliFailsTwirl) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(16);
  v(PauliString::parse("XI").index()) = 1.0;
  EXPECT_GT(twirl_defect(v, 2, 8, 1), 1e-3);
}

TEST(SingleQubitTransfer, OrthogonalAndFixesIdentity) {
  const Eigen::Matrix4d r = pauli_transfer_matrix_1q(random_u2(5));
  EXPECT_LT((r.transpose() * r - Eigen::Matrix4d::Identity()).norm(), 1e-12);
  EXPECT_NEAR(r(0, 0), 1.0, 1e-12);
  EXPECT_NEAR(r.determinant(), 1.0, 1e-12);
}

TEST(SiteLayout, InterleavedMapIsBijective) {
  for (int t = 1; t <= 3; ++t) {
    const auto& map = site_major_to_interleaved(t);
    std::vector<bool> hit(map.size(), false);
    for (auto v : map) hit.at(v) = true;
    EXPECT_TRUE(std::all_of(hit.begin(), hit.end(), [](bool b) { return b; }));
  }
}

TEST(PermutationKet, IdentityAndSwapExamples) {
  const OperatorKet id = permutation_ket({0, 1}, 2);
  EXPECT_LT((id.to_matrix() - Eigen::MatrixXcd::Identity(4, 4)).norm(), 1e-15);
  EXPECT_NEAR(id.norm() * id.norm(), 4.0, 1e-12);

  // SWAP = (II + XX + YY + ZZ) / 2
  Eigen::MatrixXcd expansion = Eigen::MatrixXcd::Zero(4, 4);
  for (int k = 0; k < 4; ++k) {
    Eigen::MatrixXcd p(4, 4);
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) p.block(2 * r, 2 * c, 2, 2) = pauli_matrix(k)(r, c) * pauli_matrix(k);
    expansion += p / 2.0;
  }
  EXPECT_LT((permutation_ket({1, 0}, 2).to_matrix() - expansion).cwiseAbs().maxCoeff(), 1e-15);

  const OperatorKet cyc = permutation_ket({1, 2, 0}, 2);
  EXPECT_NEAR(cyc.inner(cyc).real(), 8.0, 1e-12);
}

TEST(Gram, SmallExamples) {
  Eigen::Matrix2d g4, g2;
  g4 << 16, 4, 4, 16;
  g2 << 4, 2, 2, 4;
  EXPECT_LT((gram_matrix(2, 4) - g4).norm(), 1e-12);
  EXPECT_LT((gram_matrix(2, 2) - g2).norm(), 1e-12);
}

// A product of one-site permutation kets is the global permutation of the
// copies of the two-qubit space.
TEST(PermutationKet, ProductOverSitesIsGlobalPermutation) {
  const Permutation sw{1, 0};
  const Eigen::MatrixXcd local = permutation_ket(sw, 2).to_matrix();
  const Eigen::MatrixXcd global = permutation_ket(sw, 4).to_matrix();
  auto bit = [](int copy_index, int copy, int site) { return (((copy == 0 ? copy_index / 4 : copy_index % 4)) >> (1 - site)) & 1; };
  for (int r = 0; r < 16; ++r)
    for (int c = 0; c < 16; ++c) {
      cplx prod = 1.0;
      for (int site = 0; site < 2; ++site) {
        const int lr = 2 * bit(r, 0, site) + bit(r, 1, site);
        const int lc = 2 * bit(c, 0, site) + bit(c, 1, site);
        prod *= local(lr, lc);
      }
      EXPECT_EQ(global(r, c), prod);
    }
}

TEST(PauliCoordinates, HermitianOperatorsHaveRealCoordinates) {
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Random(4, 4);
  h = (h + h.adjoint()).eval();
  const Eigen::VectorXcd p = to_pauli_coordinates(OperatorKet::from_matrix(2, 2, h));
  EXPECT_LT(p.imag().norm(), 1e-14);
  // Pauli-string kets have norm 2^{t/2} before normalization.
  const PauliString s = PauliString::parse("XYZ");
  EXPECT_EQ(s.copies(), 3);
  EXPECT_NEAR(pauli_string_ket(s).norm(), 1.0, 1e-14);
}

TEST(InvariantBasis, LowOrderElements) {
  const LocalBasis b1 = u2_invariant_basis(1);
  ASSERT_EQ(b1.size(), 1);
  EXPECT_NEAR(b1.kets(0, 0).real(), 1.0, 1e-15);  // I / sqrt(2)
  const LocalBasis b2 = u2_invariant_basis(2);
  ASSERT_EQ(b2.size(), 2);
  for (const char* s : {"XX", "YY", "ZZ"}) EXPECT_NEAR(b2.kets(PauliString::parse(s).index(), 1).real(), 1 / std::sqrt(3.0), 1e-12);
}
