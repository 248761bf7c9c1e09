#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "rqcm/circuit_mc.hpp"
#include "rqcm/errors.hpp"
#include "rqcm/gate_averaging.hpp"

using namespace rqcm;

namespace {

int idx(const char* s) { return static_cast<int>(PauliString::parse(s).index()); }

}  // namespace

// exp(i pi/4 ZZ): conjugation sends XI to -YZ, YI to XZ, IX to -ZY, IY to ZX.
TEST(TransferMatrix, ZZQuarterTurnTable) {
  const auto r = pauli_transfer_matrix(canonical_gate(0, 0, M_PI / 4)).entries;
  EXPECT_NEAR(r(idx("YZ"), idx("XI")), -1.0, 1e-12);
  EXPECT_NEAR(r(idx("XZ"), idx("YI")), 1.0, 1e-12);
  EXPECT_NEAR(r(idx("ZY"), idx("IX")), -1.0, 1e-12);
  EXPECT_NEAR(r(idx("ZX"), idx("IY")), 1.0, 1e-12);
  EXPECT_NEAR(r(idx("XX"), idx("XX")), 1.0, 1e-12);
  EXPECT_NEAR(r(idx("ZZ"), idx("ZZ")), 1.0, 1e-12);
  EXPECT_NEAR(r(idx("ZI"), idx("ZI")), 1.0, 1e-12);
  EXPECT_NEAR(r.cwiseAbs().sum(), 16.0, 1e-10);  // signed permutation
}

TEST(TransferMatrix, MatchesDirectConjugation) {
  std::mt19937_64 rng(4);
  const Gate u = random_u4(rng);
  const auto r = pauli_transfer_matrix(u).entries;
  for (int p = 0; p < 16; ++p) {
    const Gate in = kron(pauli_matrix(p / 4), pauli_matrix(p % 4));
    const Gate out = u * in * u.adjoint();
    for (int q = 0; q < 16; ++q) {
      const Gate pq = kron(pauli_matrix(q / 4), pauli_matrix(q % 4));
      EXPECT_NEAR(r(q, p), (pq * out).trace().real() / 4.0, 1e-12);
    }
  }
  EXPECT_LT((r.transpose() * r - Eigen::Matrix<double, 16, 16>::Identity()).norm(), 1e-12);
}

TEST(TransferMatrix, RejectsNonUnitary) {
  Gate g = Gate::Identity();
  g(0, 0) = 2.0;
  EXPECT_THROW(pauli_transfer_matrix(g), InvalidArgument);
}

TEST(CanonicalGate, UnitaryAndSwapAtQuarterTurns) {
  EXPECT_TRUE(is_unitary(canonical_gate(0.3, -0.7, 1.1)));
  // exp(i pi/4 (XX+YY+ZZ)) = e^{i pi/4} SWAP
  const Gate g = canonical_gate(M_PI / 4, M_PI / 4, M_PI / 4);
  const std::complex<double> phase = std::polar(1.0, M_PI / 4);
  EXPECT_LT((g - phase * swap_gate()).norm(), 1e-12);
}

TEST(HaarAverage, MatchesIndependentProjector) {
  const Eigen::MatrixXd ref = oracle::haar_pair_projector_t2();
  const auto m = build_local_moment_operator(GateDistribution::haar_u4(), 2, pauli_basis(2));
  ASSERT_TRUE(m.materialized());
  EXPECT_LT((m.matrix() - ref.cast<cplx>()).cwiseAbs().maxCoeff(), 1e-12);
  // Projector: idempotent, rank t! = 2.
  EXPECT_LT((ref * ref - ref).norm(), 1e-12);
  EXPECT_NEAR(ref.trace(), 2.0, 1e-12);
}

TEST(HaarAverage, ElementFormulaAgreesWithMatrix) {
  const auto m = build_local_moment_operator(GateDistribution::haar_u4(), 2, pauli_basis(2));
  const LocalBasis b = pauli_basis(2);
  for (int a : {0, 5, 10, 15})
    for (int c : {0, 5, 15}) {
      const cplx direct = haar_m_element(2, {b.ket(a), b.ket(c)}, {b.ket(15), b.ket(15)});
      EXPECT_NEAR(std::abs(direct - m.matrix()(a * 16 + c, 15 * 16 + 15)), 0.0, 1e-12);
    }
}

TEST(HaarAverage, RejectsTooManyCopies) {
  EXPECT_THROW(make_haar_average(5), ToleranceError);
  EXPECT_THROW(build_local_moment_operator(GateDistribution::haar_u4(), 5, u2_invariant_basis(5)), Error);
}

// The two-qubit Clifford group is an exact unitary 2-design.
TEST(FiniteAverage, CliffordGroupReproducesHaarProjector) {
  const auto cliffords = oracle::two_qubit_cliffords();
  ASSERT_EQ(cliffords.size(), 11520u);
  const std::vector<double> w(cliffords.size(), 1.0 / cliffords.size());
  const auto dist = GateDistribution::finite_set("clifford2", cliffords, w, true);
  EXPECT_TRUE(dist.swap_invariant());
  const auto m = build_local_moment_operator(dist, 2, pauli_basis(2));
  const Eigen::MatrixXd ref = oracle::haar_pair_projector_t2();
  EXPECT_LT((m.matrix() - ref.cast<cplx>()).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(FiniteAverage, SingleGateIsNotADesign) {
  const auto dist = GateDistribution::finite_set("cnot", {cnot_gate()}, {1.0});
  const auto m = build_local_moment_operator(dist, 2, pauli_basis(2));
  EXPECT_GT((m.matrix() - oracle::haar_pair_projector_t2().cast<cplx>()).cwiseAbs().maxCoeff(), 0.1);
  EXPECT_FALSE(dist.swap_invariant());
}

TEST(FiniteSet, ValidationAndDaggerClosure) {
  const Gate t_gate = kron(Eigen::Matrix2cd{{1, 0}, {0, std::polar(1.0, M_PI / 4)}}, Eigen::Matrix2cd::Identity());
  const auto dist = GateDistribution::finite_set("t", {t_gate, cnot_gate()}, {0.5, 0.5});
  EXPECT_TRUE(dist.dagger_symmetrized());
  // T is not self-inverse, CNOT is: three distinct gates after closure.
  EXPECT_EQ(dist.gates().size(), 3u);
  double total = 0;
  for (double w : dist.weights()) total += w;
  EXPECT_NEAR(total, 1.0, 1e-15);

  Gate bad = Gate::Identity();
  bad(1, 1) = 0.5;
  EXPECT_THROW(GateDistribution::finite_set("bad", {bad}, {1.0}), InvalidArgument);
  EXPECT_THROW(GateDistribution::finite_set("w", {cnot_gate()}, {0.7}), InvalidArgument);
  EXPECT_THROW(GateDistribution::finite_set("w", {cnot_gate()}, {-1.0}), InvalidArgument);
  EXPECT_THROW(GateDistribution::finite_set("sym", {t_gate}, {1.0}, true), InvalidArgument);
}

TEST(LocalMomentOperator, HermitianAndLazyAgree) {
  const auto dist = GateDistribution::finite_set("cnot", {cnot_gate()}, {1.0});
  const auto m = build_local_moment_operator(dist, 2, pauli_basis(2));
  EXPECT_LT(m.asymmetry(), 1e-12);
  EXPECT_LT((m.matrix() - m.matrix().adjoint()).norm(), 1e-14);
  const LocalBasis b = pauli_basis(2);
  for (int a = 0; a < 16; a += 3)
    for (int c = 0; c < 16; c += 5) {
      const Eigen::VectorXcd col = m.apply_pair(b.kets.col(a), b.kets.col(c));
      EXPECT_NEAR(std::abs(col(7 * 16 + 9) - m.element(7, 9, a, c)), 0.0, 1e-12);
    }
}

TEST(LocalMomentOperator, PauliPairAverageAcrossLayouts) {
  // site exchange of a product vector swaps its factors
  Eigen::VectorXcd a = Eigen::VectorXcd::Zero(16), b = Eigen::VectorXcd::Zero(16);
  a(3) = 1.0;
  b(9) = 1.0;
  Eigen::VectorXcd ab(256);
  for (int i = 0; i < 16; ++i) ab.segment(i * 16, 16) = a(i) * b;
  const Eigen::VectorXcd ba = swap_sites(ab);
  EXPECT_NEAR(std::abs(ba(9 * 16 + 3) - 1.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(pair_overlap(ab, a, b) - 1.0), 0.0, 1e-15);
}

TEST(TransferMatrix, IdentitySwapAndExamples) {
  EXPECT_LT((pauli_transfer_matrix(Gate::Identity()).entries - Eigen::Matrix<double, 16, 16>::Identity()).norm(), 1e-15);
  const auto s = pauli_transfer_matrix(swap_gate()).entries;
  for (int p = 0; p < 4; ++p)
    for (int q = 0; q < 4; ++q) EXPECT_NEAR(s(4 * q + p, 4 * p + q), 1.0, 1e-15);
  // exp(i pi/4 XX) leaves no weight on I (x) Y; with this sign convention
  // I (x) Y goes to -X (x) Z.
  const auto r = pauli_transfer_matrix(canonical_gate(M_PI / 4, 0, 0)).entries;
  EXPECT_NEAR(r(idx("IY"), idx("IY")), 0.0, 1e-15);
  EXPECT_NEAR(r(idx("XZ"), idx("IY")), -1.0, 1e-12);
  EXPECT_LT((canonical_gate(0, 0, 0) - Gate::Identity()).norm(), 1e-15);
}

TEST(HaarElement, SpecialValues) {
  const LocalBasis inv = u2_invariant_basis(2);
  const OperatorKet i = inv.ket(0), w = inv.ket(1);
  EXPECT_NEAR(std::abs(haar_m_element(2, {i, i}, {i, i}) - 1.0), 0.0, 1e-12);
  const cplx direct = haar_m_element(2, {i, w}, {i, w});
  const cplx exchange = haar_m_element(2, {i, w}, {w, i});
  EXPECT_NEAR(std::abs(direct + exchange - 0.4), 0.0, 1e-12);
  const OperatorKet z = pauli_string_ket(PauliString::parse("ZI"));
  EXPECT_NEAR(std::abs(haar_m_element(2, {i, z}, {i, i})), 0.0, 1e-14);
}

TEST(HaarAverage, InvariantPairBasisExample) {
  const auto m = build_local_moment_operator(GateDistribution::haar_u4(), 2, u2_invariant_basis(2));
  ASSERT_EQ(m.matrix().rows(), 4);
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m.matrix());
  int units = 0;
  for (double e : es.eigenvalues()) {
    EXPECT_GE(e, -1e-12);
    EXPECT_LE(e, 1 + 1e-12);
    units += std::abs(e - 1) < 1e-10;
  }
  EXPECT_EQ(units, 2);
}

// entry((a g),(b d)) = entry((g a),(d b)) for swap-invariant distributions.
TEST(HaarAverage, SiteSwapSymmetry) {
  const auto m = build_local_moment_operator(GateDistribution::haar_u4(), 2, pauli_basis(2));
  double worst = 0.0;
  for (int a = 0; a < 16; ++a)
    for (int g = 0; g < 16; ++g)
      for (int b = 0; b < 16; ++b)
        for (int d = 0; d < 16; ++d)
          worst = std::max(worst, std::abs(m.matrix()(a * 16 + g, b * 16 + d) - m.matrix()(g * 16 + a, d * 16 + b)));
  EXPECT_LT(worst, 1e-14);
}

TEST(FiniteAverage, IdentityAndInvolution) {
  const auto id = build_local_moment_operator(GateDistribution::finite_set("id", {Gate::Identity()}, {1.0}), 2,
                                              pauli_basis(2));
  EXPECT_LT((id.matrix() - Eigen::MatrixXcd::Identity(256, 256)).norm(), 1e-12);
  const auto cx = build_local_moment_operator(GateDistribution::finite_set("cnot", {cnot_gate()}, {1.0}), 2,
                                              pauli_basis(2));
  EXPECT_LT((cx.matrix() * cx.matrix() - Eigen::MatrixXcd::Identity(256, 256)).norm(), 1e-10);
}

// Permutation product kets are fixed by any unitary average.
TEST(FiniteAverage, PermutationPairsFixedForAnyDistribution) {
  const auto dist = GateDistribution::finite_set("cnot", {cnot_gate()}, {1.0});
  const auto avg = make_finite_average(dist, 3);
  for (const auto& p : all_permutations(3)) {
    const Eigen::VectorXcd s = normalized_permutation_coordinates(p);
    Eigen::VectorXcd ss(s.size() * s.size());
    for (Eigen::Index k = 0; k < s.size(); ++k) ss.segment(k * s.size(), s.size()) = s(k) * s;
    EXPECT_LT((avg->apply(ss) - ss).norm(), 1e-10);
  }
}
