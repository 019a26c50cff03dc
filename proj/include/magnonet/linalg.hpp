#pragma once

// Dense kernels for the small (n <= 12, Kronecker route n^2 <= 144) systems
// that show up in the steady-state problem: eigenvalues, linear solves and the
// continuous Lyapunov equation  A V + V A^T + D = 0.

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>

namespace magnonet {

enum class LinalgErrc {
  kNotSquare,
  kDimensionMismatch,
  kNotFinite,
  kNotSymmetric,
  kNoConvergence,
  kSingular,
  kUnstable,
  kResidual,
};

class LinalgError : public std::runtime_error {
 public:
  LinalgError(LinalgErrc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  LinalgErrc code() const noexcept { return code_; }

 private:
  LinalgErrc code_;
};

/// Defaults for every numeric gate in this header. None of them is physical;
/// override through the run configuration when needed.
struct LinalgTolerances {
  double residual = 1e-10;       // relative residual bound on solves
  double max_condition = 1e13;   // reject systems with rcond below 1/max_condition
  double symmetry = 1e-10;       // relative asymmetry allowed in D
};

enum class LyapunovMethod {
  kSchur,      // complex Schur (Bartels-Stewart), O(n^3)
  kKronecker,  // (I (x) A + A (x) I) vec V = -vec D, O(n^6)
};

struct LyapunovOptions {
  LyapunovMethod method = LyapunovMethod::kSchur;
  LinalgTolerances tolerances{};
};

template <typename Derived>
typename Derived::RealScalar inf_norm(const Eigen::MatrixBase<Derived>& m) {
  if (m.size() == 0) return 0;
  return m.cwiseAbs().rowwise().sum().maxCoeff();
}

namespace detail {

template <typename Derived>
void require_square(const Eigen::MatrixBase<Derived>& m, const char* where) {
  if (m.rows() != m.cols()) {
    throw LinalgError(LinalgErrc::kNotSquare,
                      std::string(where) + ": matrix is " + std::to_string(m.rows()) + "x" +
                          std::to_string(m.cols()) + ", expected square");
  }
}

template <typename Derived>
void require_finite(const Eigen::MatrixBase<Derived>& m, const char* where) {
  if (!m.allFinite()) {
    throw LinalgError(LinalgErrc::kNotFinite, std::string(where) + ": non-finite entry in input");
  }
}

template <typename Scalar>
using DynMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using DynVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

}  // namespace detail

/// All eigenvalues of a real square matrix, with multiplicity and in no
/// particular order. Non-real eigenvalues come out in exact conjugate pairs.
template <typename Derived>
detail::DynVector<std::complex<typename Derived::Scalar>> eigvals(
    const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  detail::require_square(m, "eigvals");
  detail::require_finite(m, "eigvals");
  if (m.rows() == 0) return {};
  Eigen::EigenSolver<detail::DynMatrix<Scalar>> solver(m.eval(), /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    throw LinalgError(LinalgErrc::kNoConvergence, "eigvals: QR iteration did not converge");
  }
  return solver.eigenvalues();
}

/// Solve M x = rhs by partial-pivot LU. Rejects numerically singular M using
/// LU's reciprocal condition estimate, and verifies the residual bound
///   |M x - rhs|_inf <= tol * (|M|_inf |x|_inf + |rhs|_inf).
template <typename DerivedM, typename DerivedB>
detail::DynVector<typename DerivedM::Scalar> solve_linear(
    const Eigen::MatrixBase<DerivedM>& m, const Eigen::MatrixBase<DerivedB>& rhs,
    const LinalgTolerances& tol = {}) {
  using Scalar = typename DerivedM::Scalar;
  detail::require_square(m, "solve_linear");
  if (rhs.rows() != m.rows() || rhs.cols() != 1) {
    throw LinalgError(LinalgErrc::kDimensionMismatch, "solve_linear: rhs length does not match matrix");
  }
  detail::require_finite(m, "solve_linear");
  detail::require_finite(rhs, "solve_linear");

  Eigen::PartialPivLU<detail::DynMatrix<Scalar>> lu(m.eval());
  const Scalar rcond = lu.rcond();
  if (!(rcond * tol.max_condition >= Scalar(1))) {
    throw LinalgError(LinalgErrc::kSingular,
                      "solve_linear: matrix is singular to working precision (rcond = " +
                          std::to_string(rcond) + ")");
  }
  detail::DynVector<Scalar> x = lu.solve(rhs.eval());
  const Scalar residual = (m * x - rhs).template lpNorm<Eigen::Infinity>();
  const Scalar bound = tol.residual * (inf_norm(m) * x.template lpNorm<Eigen::Infinity>() +
                                       rhs.template lpNorm<Eigen::Infinity>());
  if (!(residual <= bound)) {
    throw LinalgError(LinalgErrc::kResidual, "solve_linear: residual bound violated");
  }
  return x;
}

namespace detail {

template <typename Scalar>
DynMatrix<Scalar> lyapunov_kronecker(const DynMatrix<Scalar>& a, const DynMatrix<Scalar>& d,
                                     const LinalgTolerances& tol) {
  const Eigen::Index n = a.rows();
  const Eigen::Index nn = n * n;
  // Column-major vec: vec(A V) = (I (x) A) vec V, vec(V A^T) = (A (x) I) vec V.
  DynMatrix<Scalar> k = DynMatrix<Scalar>::Zero(nn, nn);
  for (Eigen::Index blk = 0; blk < n; ++blk) {
    k.block(blk * n, blk * n, n, n) += a;
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (a(i, j) != Scalar(0)) {
        k.block(i * n, j * n, n, n).diagonal().array() += a(i, j);
      }
    }
  }
  Eigen::PartialPivLU<DynMatrix<Scalar>> lu(k);
  if (!(lu.rcond() * tol.max_condition >= Scalar(1))) {
    throw LinalgError(LinalgErrc::kSingular, "solve_lyapunov: Kronecker system is singular");
  }
  DynVector<Scalar> rhs = -Eigen::Map<const DynVector<Scalar>>(d.data(), nn);
  DynVector<Scalar> x = lu.solve(rhs);
  return Eigen::Map<DynMatrix<Scalar>>(x.data(), n, n);
}

template <typename Scalar>
DynMatrix<Scalar> lyapunov_schur(const Eigen::ComplexSchur<DynMatrix<std::complex<Scalar>>>& schur,
                                 const DynMatrix<Scalar>& d) {
  using Complex = std::complex<Scalar>;
  const DynMatrix<Complex>& t = schur.matrixT();
  const DynMatrix<Complex>& u = schur.matrixU();
  const Eigen::Index n = t.rows();

  // A = U T U^H turns the equation into T Y + Y T^H = C with C = -U^H D U.
  // Column j of Y T^H only involves columns k >= j of Y, so sweep backwards.
  const DynMatrix<Complex> c = -(u.adjoint() * d.template cast<Complex>() * u);
  DynMatrix<Complex> y(n, n);
  DynMatrix<Complex> shifted = t;
  for (Eigen::Index j = n - 1; j >= 0; --j) {
    DynVector<Complex> rhs = c.col(j);
    for (Eigen::Index k = j + 1; k < n; ++k) {
      rhs -= y.col(k) * std::conj(t(j, k));
    }
    shifted.diagonal() = t.diagonal().array() + std::conj(t(j, j));
    y.col(j) = shifted.template triangularView<Eigen::Upper>().solve(rhs);
  }
  return (u * y * u.adjoint()).real();
}

}  // namespace detail

/// Solve the continuous Lyapunov equation A V + V A^T = -D for Hurwitz A and
/// symmetric D. The result is symmetrized and checked against
///   |A V + V A^T + D|_inf <= tol * max(|A|_inf |V|_inf, |D|_inf).
template <typename DerivedA, typename DerivedD>
typename DerivedA::PlainObject solve_lyapunov(const Eigen::MatrixBase<DerivedA>& a,
                                              const Eigen::MatrixBase<DerivedD>& d,
                                              const LyapunovOptions& options = {}) {
  using Scalar = typename DerivedA::Scalar;
  using Complex = std::complex<Scalar>;
  const auto& tol = options.tolerances;
  detail::require_square(a, "solve_lyapunov");
  detail::require_square(d, "solve_lyapunov");
  if (a.rows() != d.rows()) {
    throw LinalgError(LinalgErrc::kDimensionMismatch, "solve_lyapunov: A and D differ in size");
  }
  detail::require_finite(a, "solve_lyapunov");
  detail::require_finite(d, "solve_lyapunov");
  const Scalar d_norm = inf_norm(d);
  if (inf_norm(d - d.transpose()) > tol.symmetry * std::max(Scalar(1), d_norm)) {
    throw LinalgError(LinalgErrc::kNotSymmetric, "solve_lyapunov: D is not symmetric");
  }

  const detail::DynMatrix<Scalar> a_dyn = a;
  const detail::DynMatrix<Scalar> d_dyn = d;
  detail::DynMatrix<Scalar> v;
  if (a.rows() == 0) return typename DerivedA::PlainObject(a_dyn);

  if (options.method == LyapunovMethod::kSchur) {
    Eigen::ComplexSchur<detail::DynMatrix<Complex>> schur(a_dyn.template cast<Complex>());
    if (schur.info() != Eigen::Success) {
      throw LinalgError(LinalgErrc::kNoConvergence, "solve_lyapunov: Schur iteration did not converge");
    }
    if (!(schur.matrixT().diagonal().real().maxCoeff() < Scalar(0))) {
      throw LinalgError(LinalgErrc::kUnstable, "solve_lyapunov: A is not Hurwitz stable");
    }
    v = detail::lyapunov_schur<Scalar>(schur, d_dyn);
  } else {
    if (!(eigvals(a_dyn).real().maxCoeff() < Scalar(0))) {
      throw LinalgError(LinalgErrc::kUnstable, "solve_lyapunov: A is not Hurwitz stable");
    }
    v = detail::lyapunov_kronecker<Scalar>(a_dyn, d_dyn, tol);
  }

  v = (v + v.transpose()).eval() / Scalar(2);
  const Scalar residual = inf_norm(a_dyn * v + v * a_dyn.transpose() + d_dyn);
  const Scalar bound = tol.residual * std::max(inf_norm(a_dyn) * inf_norm(v), d_norm);
  if (!(residual <= bound)) {
    throw LinalgError(LinalgErrc::kResidual,
                      "solve_lyapunov: residual " + std::to_string(residual) + " exceeds bound " +
                          std::to_string(bound));
  }
  return v;
}

}  // namespace magnonet
