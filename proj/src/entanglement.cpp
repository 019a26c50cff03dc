#include "magnonet/entanglement.hpp"

#include "magnonet/steady_state.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>

namespace magnonet {

CovarianceMatrix::CovarianceMatrix(Eigen::MatrixXd v, std::vector<ModeIndex> modes)
    : v_(std::move(v)), modes_(std::move(modes)) {
  const auto n = static_cast<Eigen::Index>(2 * modes_.size());
  if (v_.rows() != n || v_.cols() != n) {
    throw std::invalid_argument("CovarianceMatrix: size does not match mode count");
  }
  if (!v_.allFinite()) throw std::invalid_argument("CovarianceMatrix: non-finite entry");
  if (inf_norm(v_ - v_.transpose()) > 1e-10 * std::max(1.0, inf_norm(v_))) {
    throw std::invalid_argument("CovarianceMatrix: matrix is not symmetric");
  }
  for (std::size_t i = 0; i < modes_.size(); ++i) {
    for (std::size_t j = i + 1; j < modes_.size(); ++j) {
      if (modes_[i] == modes_[j]) throw std::invalid_argument("CovarianceMatrix: repeated mode");
    }
  }
}

int CovarianceMatrix::position_of(ModeIndex mode) const {
  const auto it = std::find(modes_.begin(), modes_.end(), mode);
  if (it == modes_.end()) {
    throw std::invalid_argument("mode " + mode.label() + " is not part of this covariance matrix");
  }
  return static_cast<int>(it - modes_.begin());
}

Eigen::MatrixXd symplectic_form(int n_modes) {
  Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(2 * n_modes, 2 * n_modes);
  for (int k = 0; k < n_modes; ++k) {
    omega(2 * k, 2 * k + 1) = 1;
    omega(2 * k + 1, 2 * k) = -1;
  }
  return omega;
}

CovarianceMatrix steady_covariance(const LinearModel& model, const LyapunovOptions& options) {
  Matrix12 v;
  try {
    v = solve_lyapunov(model.A, model.D, options);
  } catch (const LinalgError& e) {
    if (e.code() == LinalgErrc::kUnstable) throw UnstableSystemError(e.what());
    throw;
  }
  const auto modes = all_modes();
  return {v, {modes.begin(), modes.end()}};
}

CovarianceMatrix extract_submatrix(const CovarianceMatrix& v, std::span<const ModeIndex> modes) {
  std::vector<Eigen::Index> rows;
  rows.reserve(2 * modes.size());
  for (const ModeIndex& mode : modes) {
    const int k = v.position_of(mode);
    rows.push_back(2 * k);
    rows.push_back(2 * k + 1);
  }
  const auto n = static_cast<Eigen::Index>(rows.size());
  Eigen::MatrixXd sub(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) sub(i, j) = v.matrix()(rows[i], rows[j]);
  }
  return {std::move(sub), {modes.begin(), modes.end()}};
}

CovarianceMatrix partial_transpose(const CovarianceMatrix& v, std::span<const ModeIndex> transposed) {
  Eigen::VectorXd signs = Eigen::VectorXd::Ones(2 * v.mode_count());
  for (const ModeIndex& mode : transposed) signs(2 * v.position_of(mode) + 1) = -1;
  Eigen::MatrixXd flipped = signs.asDiagonal() * v.matrix() * signs.asDiagonal();
  return {std::move(flipped), {v.modes().begin(), v.modes().end()}};
}

std::vector<double> symplectic_eigenvalues(const CovarianceMatrix& v, double pairing_tolerance) {
  // eig(i Omega V) = i eig(Omega V); for symmetric positive V the latter are +/- i nu.
  // With V = L L^T, Omega V is similar to the antisymmetric L^T Omega L, so the
  // Hermitian i L^T Omega L carries the same spectrum and a far better
  // conditioned eigenproblem. The general solver only handles indefinite V.
  const Eigen::MatrixXd omega = symplectic_form(v.mode_count());
  std::vector<double> moduli;
  const Eigen::LLT<Eigen::MatrixXd> llt(v.matrix());
  if (llt.info() == Eigen::Success) {
    const Eigen::MatrixXd l = llt.matrixL();
    const Eigen::MatrixXcd h = std::complex<double>(0, 1) * (l.transpose() * omega * l);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
      throw LinalgError(LinalgErrc::kNoConvergence, "symplectic_eigenvalues: eigensolver failed");
    }
    for (double x : solver.eigenvalues()) moduli.push_back(std::abs(x));
  } else {
    const Eigen::VectorXcd spectrum = eigvals(Eigen::MatrixXd(omega * v.matrix()));
    for (Eigen::Index i = 0; i < spectrum.size(); ++i) moduli.push_back(std::abs(spectrum(i)));
  }
  std::sort(moduli.begin(), moduli.end());

  std::vector<double> nu;
  nu.reserve(moduli.size() / 2);
  for (std::size_t i = 0; i + 1 < moduli.size(); i += 2) {
    const double lo = moduli[i];
    const double hi = moduli[i + 1];
    if (hi - lo > pairing_tolerance * std::max(hi, 1e-300)) {
      throw LinalgError(LinalgErrc::kResidual,
                        "symplectic_eigenvalues: spectrum of i*Omega*V does not pair (" +
                            std::to_string(lo) + " vs " + std::to_string(hi) + ")");
    }
    nu.push_back((lo + hi) / 2);
  }
  return nu;
}

double physicality_margin(const CovarianceMatrix& v) {
  const Eigen::MatrixXcd h = v.matrix().cast<std::complex<double>>() +
                             std::complex<double>(0, 0.5) * symplectic_form(v.mode_count());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw LinalgError(LinalgErrc::kNoConvergence, "physicality_margin: eigensolver failed");
  }
  return solver.eigenvalues().minCoeff();
}

namespace {

double negativity_of_transposed(const CovarianceMatrix& v, ModeIndex transposed, double tol) {
  const ModeIndex flip[] = {transposed};
  const double nu_min = symplectic_eigenvalues(partial_transpose(v, flip), tol).front();
  return std::max(0.0, -std::log(2 * nu_min));
}

}  // namespace

double log_negativity(const CovarianceMatrix& two_mode, double pairing_tolerance) {
  if (two_mode.mode_count() != 2) {
    throw std::invalid_argument("log_negativity: expected a two-mode covariance matrix");
  }
  return negativity_of_transposed(two_mode, two_mode.modes()[0], pairing_tolerance);
}

double log_negativity(const CovarianceMatrix& v, ModeIndex first, ModeIndex second,
                      double pairing_tolerance) {
  const ModeIndex pair[] = {first, second};
  return log_negativity(extract_submatrix(v, pair), pairing_tolerance);
}

double one_vs_two_log_negativity(const CovarianceMatrix& three_mode, ModeIndex pivot,
                                 double pairing_tolerance) {
  if (three_mode.mode_count() != 3) {
    throw std::invalid_argument("one_vs_two_log_negativity: expected a three-mode covariance matrix");
  }
  return negativity_of_transposed(three_mode, pivot, pairing_tolerance);
}

ContangleResult residual_contangle(const CovarianceMatrix& three_mode, double pairing_tolerance) {
  if (three_mode.mode_count() != 3) {
    throw std::invalid_argument("residual_contangle: expected a three-mode covariance matrix");
  }
  const auto modes = three_mode.modes();
  std::array<double, 3> pair_contangle{};  // indexed by the mode left out
  for (int k = 0; k < 3; ++k) {
    const double e = log_negativity(three_mode, modes[(k + 1) % 3], modes[(k + 2) % 3], pairing_tolerance);
    pair_contangle[k] = e * e;
  }

  ContangleResult result;
  for (int k = 0; k < 3; ++k) {
    const double split = one_vs_two_log_negativity(three_mode, modes[k], pairing_tolerance);
    result.pivots[k] = modes[k];
    // Pairs involving mode k are the ones leaving out k+1 and k+2.
    result.residuals[k] = split * split - pair_contangle[(k + 1) % 3] - pair_contangle[(k + 2) % 3];
  }
  result.minimum = *std::min_element(result.residuals.begin(), result.residuals.end());
  return result;
}

}  // namespace magnonet
