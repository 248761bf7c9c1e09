#include "rqcm/symmetric_sector.hpp"

#include <algorithm>
#include <cmath>

#include "rqcm/errors.hpp"

namespace rqcm {

namespace {

using RowMajorView = Eigen::Map<const Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;

// Orthonormal basis of span(columns) by eigendecomposition of the Gram matrix.
template <typename Mat>
Mat orthonormal_span(const Mat& cols, double rank_tolerance) {
  using Scalar = typename Mat::Scalar;
  const Mat gram = cols.adjoint() * cols;
  Eigen::SelfAdjointEigenSolver<Mat> eig(gram);
  const double top = eig.eigenvalues().maxCoeff();
  std::vector<Eigen::Index> keep;
  for (Eigen::Index j = gram.rows() - 1; j >= 0; --j)
    if (eig.eigenvalues()(j) > rank_tolerance * top) keep.push_back(j);
  Mat out(cols.rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t k = 0; k < keep.size(); ++k) {
    const Eigen::Index j = keep[k];
    out.col(static_cast<Eigen::Index>(k)) = cols * eig.eigenvectors().col(j) / Scalar(std::sqrt(eig.eigenvalues()(j)));
  }
  return out;
}

struct TopEigen {
  double value = 0.0;
  Eigen::VectorXcd vector;
  int multiplicity = 1;
  int iterations = 0;
};

template <typename Scalar>
TopEigen dense_top(const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& a,
                   const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& q, double degeneracy) {
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  // Fixed directions are shifted from 1 to -2, below the rest of the spectrum.
  Mat shifted = a - Scalar(3.0) * (q * q.adjoint());
  Eigen::SelfAdjointEigenSolver<Mat> eig(shifted);
  const Eigen::Index top = eig.eigenvalues().size() - 1;
  TopEigen out;
  out.value = eig.eigenvalues()(top);
  out.vector = eig.eigenvectors().col(top).template cast<cplx>();
  out.multiplicity = 0;
  for (Eigen::Index j = top; j >= 0 && eig.eigenvalues()(j) >= out.value - degeneracy; --j) ++out.multiplicity;
  return out;
}

template <typename Scalar>
TopEigen iterative_top(const Eigen::SparseMatrix<Scalar, Eigen::RowMajor>& a,
                       const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& q, const SpectralOptions& options) {
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const std::function<Vec(const Vec&)> op = [&a](const Vec& x) -> Vec { return a * x; };

  auto first = lanczos_largest<Scalar>(op, a.rows(), q, options.lanczos);
  if (!first.converged) {
    throw ConvergenceError("Lanczos did not converge: residual " + std::to_string(first.residual) + " after " +
                           std::to_string(first.iterations) + " applications");
  }
  TopEigen out;
  out.value = first.value;
  out.vector = first.vector.template cast<cplx>();
  out.iterations = first.iterations;

  // Lock converged vectors and look for further copies of lambda1.
  Mat locked = q;
  Vec last = first.vector;
  for (int probe = 0; probe < options.multiplicity_probe; ++probe) {
    if (a.rows() - locked.cols() <= 1) break;
    Mat grown(a.rows(), locked.cols() + 1);
    grown << locked, last;
    locked = std::move(grown);
    LanczosOptions lo = options.lanczos;
    lo.seed += static_cast<std::uint64_t>(probe + 1);
    auto next = lanczos_largest<Scalar>(op, a.rows(), locked, lo);
    out.iterations += next.iterations;
    if (!next.converged || next.value < out.value - options.degeneracy_tolerance) break;
    ++out.multiplicity;
    last = next.vector;
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------

TwoBodyCoefficients TwoBodyCoefficients::from_matrix(const Eigen::MatrixXcd& c, int local_size, double drop) {
  const Eigen::Index d2 = static_cast<Eigen::Index>(local_size) * local_size;
  if (c.rows() != d2 || c.cols() != d2) throw InvalidArgument("TwoBodyCoefficients: matrix is not d^2 x d^2");
  TwoBodyCoefficients out;
  out.local_size = local_size;
  out.by_column.resize(static_cast<std::size_t>(d2));
  for (Eigen::Index col = 0; col < d2; ++col)
    for (Eigen::Index row = 0; row < d2; ++row)
      if (std::abs(c(row, col)) > drop)
        out.by_column[static_cast<std::size_t>(col)].push_back(
            {static_cast<int>(row / local_size), static_cast<int>(row % local_size), c(row, col)});
  return out;
}

TwoBodyCoefficients TwoBodyCoefficients::from_operator(const LocalMomentOperator& m, double drop) {
  const int d = m.local_size();
  if (m.materialized()) return from_matrix(m.matrix(), d, drop);

  TwoBodyCoefficients out;
  out.local_size = d;
  out.by_column.resize(static_cast<std::size_t>(d) * static_cast<std::size_t>(d));
  const Eigen::MatrixXcd& e = m.basis().kets;
  const Eigen::MatrixXcd e_conj = e.conjugate();
  const Eigen::Index nd = e.rows();
#pragma omp parallel for schedule(dynamic)
  for (int col = 0; col < d * d; ++col) {
    const Eigen::VectorXcd w = m.apply_pair(e.col(col / d), e.col(col % d));
    const Eigen::MatrixXcd block = e.adjoint() * RowMajorView(w.data(), nd, nd) * e_conj;
    auto& list = out.by_column[static_cast<std::size_t>(col)];
    for (int a = 0; a < d; ++a)
      for (int g = 0; g < d; ++g)
        if (std::abs(block(a, g)) > drop) list.push_back({a, g, block(a, g)});
  }
  return out;
}

SymmetricMomentMatrix assemble_symmetric_moment_matrix(const LocalMomentOperator& m_local, int n) {
  return assemble_symmetric_moment_matrix(TwoBodyCoefficients::from_operator(m_local), n, m_local.copies(),
                                          m_local.basis().descriptor);
}

SymmetricMomentMatrix assemble_symmetric_moment_matrix(const TwoBodyCoefficients& c, int n, int t,
                                                       const std::string& basis_descriptor) {
  if (n < 2) throw InvalidArgument("assemble_symmetric_moment_matrix: need n >= 2");
  const int d = c.local_size;
  if (static_cast<int>(c.by_column.size()) != d * d) throw InvalidArgument("assemble: coefficient table size mismatch");

  auto occ = std::make_shared<const OccupationBasis>(d, n);
  const auto dim = static_cast<Eigen::Index>(occ->size());
  const double pref = 1.0 / (static_cast<double>(n) * (n - 1));

  std::vector<double> sqrt_int(static_cast<std::size_t>(n + 2));
  for (std::size_t i = 0; i < sqrt_int.size(); ++i) sqrt_int[i] = std::sqrt(static_cast<double>(i));

  // Column s holds M|s>; columns are independent.
  std::vector<std::vector<std::pair<Eigen::Index, cplx>>> columns(static_cast<std::size_t>(dim));
#pragma omp parallel for schedule(dynamic, 64)
  for (Eigen::Index s = 0; s < dim; ++s) {
    std::vector<int> work(occ->state(static_cast<std::size_t>(s)), occ->state(static_cast<std::size_t>(s)) + d);
    auto& out = columns[static_cast<std::size_t>(s)];
    for (int beta = 0; beta < d; ++beta) {
      for (int delta = 0; delta < d; ++delta) {
        const auto& entries = c.by_column[static_cast<std::size_t>(beta * d + delta)];
        if (entries.empty()) continue;
        // a_beta a_delta
        const int nd = work[static_cast<std::size_t>(delta)];
        if (nd == 0) continue;
        --work[static_cast<std::size_t>(delta)];
        const int nb = work[static_cast<std::size_t>(beta)];
        if (nb == 0) {
          ++work[static_cast<std::size_t>(delta)];
          continue;
        }
        --work[static_cast<std::size_t>(beta)];
        const double down = sqrt_int[static_cast<std::size_t>(nd)] * sqrt_int[static_cast<std::size_t>(nb)];
        for (const auto& e : entries) {
          // a+_alpha a+_gamma
          const double up_g = sqrt_int[static_cast<std::size_t>(++work[static_cast<std::size_t>(e.gamma)])];
          const double up_a = sqrt_int[static_cast<std::size_t>(++work[static_cast<std::size_t>(e.alpha)])];
          const auto r = static_cast<Eigen::Index>(occ->rank(work.data()));
          out.emplace_back(r, e.value * (pref * down * up_g * up_a));
          --work[static_cast<std::size_t>(e.alpha)];
          --work[static_cast<std::size_t>(e.gamma)];
        }
        ++work[static_cast<std::size_t>(beta)];
        ++work[static_cast<std::size_t>(delta)];
      }
    }
    std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    std::size_t w = 0;
    for (std::size_t i = 0; i < out.size(); ++i) {
      if (w > 0 && out[w - 1].first == out[i].first) {
        out[w - 1].second += out[i].second;
      } else {
        out[w++] = out[i];
      }
    }
    out.resize(w);
  }

  Eigen::SparseMatrix<cplx, Eigen::ColMajor> a(dim, dim);
  std::vector<Eigen::Index> nnz(static_cast<std::size_t>(dim));
  for (Eigen::Index s = 0; s < dim; ++s) nnz[static_cast<std::size_t>(s)] = static_cast<Eigen::Index>(columns[static_cast<std::size_t>(s)].size());
  a.reserve(nnz);
  for (Eigen::Index s = 0; s < dim; ++s) {
    for (const auto& [r, v] : columns[static_cast<std::size_t>(s)]) a.insert(r, s) = v;
    std::vector<std::pair<Eigen::Index, cplx>>().swap(columns[static_cast<std::size_t>(s)]);
  }
  a.makeCompressed();

  SymmetricMomentMatrix out;
  out.n = n;
  out.t = t;
  out.local_size = d;
  out.basis_descriptor = basis_descriptor;
  out.basis = occ;

  const Eigen::SparseMatrix<cplx, Eigen::ColMajor> adj = a.adjoint();
  const Eigen::SparseMatrix<cplx, Eigen::ColMajor> diff = a - adj;
  double asym = 0.0;
  for (Eigen::Index k = 0; k < diff.outerSize(); ++k)
    for (Eigen::SparseMatrix<cplx, Eigen::ColMajor>::InnerIterator it(diff, k); it; ++it) asym = std::max(asym, std::abs(it.value()));
  out.asymmetry = asym;
  if (asym > 1e-8) throw ToleranceError("assembled sector matrix is not Hermitian (asymmetry " + std::to_string(asym) + ")");

  SparseMatrixXcd sym = 0.5 * (a + adj);
  double max_imag = 0.0;
  for (Eigen::Index k = 0; k < sym.outerSize(); ++k)
    for (SparseMatrixXcd::InnerIterator it(sym, k); it; ++it) max_imag = std::max(max_imag, std::abs(it.value().imag()));
  out.real = max_imag <= 1e-14;
  if (out.real)
    for (Eigen::Index k = 0; k < sym.outerSize(); ++k)
      for (SparseMatrixXcd::InnerIterator it(sym, k); it; ++it) it.valueRef() = cplx(it.value().real(), 0.0);
  sym.prune(cplx(0.0), 1e-300);
  out.matrix = std::move(sym);
  return out;
}

std::vector<Eigen::VectorXcd> permutation_fixed_vectors(const LocalBasis& local, const OccupationBasis& occupations) {
  if (local.size() != occupations.modes()) throw InvalidArgument("permutation_fixed_vectors: basis size mismatch");
  std::vector<Eigen::VectorXcd> out;
  for (const auto& sigma : all_permutations(local.copies)) {
    Eigen::VectorXcd coords = local.kets.adjoint() * normalized_permutation_coordinates(sigma);
    const double norm = coords.norm();
    if (std::abs(norm - 1.0) > 1e-10) {
      throw InvalidArgument("local basis '" + local.descriptor + "' does not contain the permutation ket " +
                            to_cycle_string(sigma));
    }
    coords /= norm;
    out.push_back(product_state_in_fock(coords, occupations));
  }
  return out;
}

const char* to_string(SolverMethod m) { return m == SolverMethod::dense ? "dense" : "iterative"; }

SpectralResult spectral_gap(const SymmetricMomentMatrix& m, const std::vector<Eigen::VectorXcd>& fixed,
                            const SpectralOptions& options) {
  const Eigen::Index dim = m.dimension();
  if (fixed.empty()) throw InvalidArgument("spectral_gap: no fixed vectors supplied");

  SpectralResult res;
  res.dimension = dim;
  Eigen::MatrixXcd f(dim, static_cast<Eigen::Index>(fixed.size()));
  for (std::size_t k = 0; k < fixed.size(); ++k) {
    if (fixed[k].size() != dim) throw InvalidArgument("spectral_gap: fixed vector has wrong dimension");
    const double defect = (m.apply(fixed[k]) - fixed[k]).norm() / fixed[k].norm();
    res.fixed_defect = std::max(res.fixed_defect, defect);
    if (defect > options.fixed_tolerance) {
      throw DeflationError("spectral_gap: supplied vector " + std::to_string(k) + " is not fixed (defect " +
                           std::to_string(defect) + ")");
    }
    f.col(static_cast<Eigen::Index>(k)) = fixed[k];
  }
  const Eigen::MatrixXcd q = orthonormal_span(f, options.rank_tolerance);
  res.unit_multiplicity = static_cast<int>(q.cols());
  if (q.cols() >= dim) throw DeflationError("spectral_gap: fixed vectors span the whole sector");

  // Real arithmetic when both M and a basis of the fixed span can be real.
  bool use_real = m.real;
  Eigen::MatrixXd q_real;
  if (use_real) {
    Eigen::MatrixXd parts(dim, 2 * q.cols());
    parts << q.real(), q.imag();
    q_real = orthonormal_span(parts, options.rank_tolerance);
    use_real = q_real.cols() == q.cols();
  }

  TopEigen top;
  if (dim <= options.dense_limit) {
    res.method = SolverMethod::dense;
    top = use_real ? dense_top<double>(Eigen::MatrixXd(m.matrix.real()), q_real, options.degeneracy_tolerance)
                   : dense_top<cplx>(m.dense(), q, options.degeneracy_tolerance);
  } else {
    res.method = SolverMethod::iterative;
    if (use_real) {
      const Eigen::SparseMatrix<double, Eigen::RowMajor> real_matrix = m.matrix.real();
      top = iterative_top<double>(real_matrix, q_real, options);
    } else {
      top = iterative_top<cplx>(m.matrix, q, options);
    }
  }
  res.lambda1 = top.value;
  res.gap = 1.0 - top.value;
  res.lambda1_multiplicity = top.multiplicity;
  res.iterations = top.iterations;
  res.eigenvector = top.vector;
  res.residual = (m.apply(top.vector) - top.value * top.vector).norm();
  return res;
}

SpectralResult sector_spectral_gap(const LocalMomentOperator& m_local, int n, const SpectralOptions& options) {
  const SymmetricMomentMatrix m = assemble_symmetric_moment_matrix(m_local, n);
  return spectral_gap(m, permutation_fixed_vectors(m_local.basis(), *m.basis), options);
}

}  // namespace rqcm
