#pragma once

#include "magnonet/linalg.hpp"
#include "magnonet/system_model.hpp"

#include <array>
#include <span>
#include <vector>

namespace magnonet {

/// Symmetric covariance matrix of a Gaussian state, V_ij = <f_i f_j + f_j f_i>/2,
/// in the convention where the vacuum is I/2. Rows come in (X, Y) pairs, one
/// pair per entry of modes().
class CovarianceMatrix {
 public:
  CovarianceMatrix(Eigen::MatrixXd v, std::vector<ModeIndex> modes);

  const Eigen::MatrixXd& matrix() const { return v_; }
  std::span<const ModeIndex> modes() const { return modes_; }
  int mode_count() const { return static_cast<int>(modes_.size()); }
  /// Index of `mode` within modes(); throws std::invalid_argument if absent.
  int position_of(ModeIndex mode) const;

 private:
  Eigen::MatrixXd v_;
  std::vector<ModeIndex> modes_;
};

/// Block-diagonal symplectic form with one [[0, 1], [-1, 0]] block per mode.
Eigen::MatrixXd symplectic_form(int n_modes);

inline constexpr double kDefaultPairingTolerance = 1e-7;

CovarianceMatrix steady_covariance(const LinearModel& model, const LyapunovOptions& options = {});

/// Rows/columns of `modes`, in the requested order.
CovarianceMatrix extract_submatrix(const CovarianceMatrix& v, std::span<const ModeIndex> modes);

/// P V P with P flipping the Y quadrature of every mode in `transposed`.
CovarianceMatrix partial_transpose(const CovarianceMatrix& v, std::span<const ModeIndex> transposed);

/// Symplectic spectrum, ascending: the moduli of the eigenvalues of i Omega V,
/// one per +/- pair. Positive definite V goes through the Hermitian form
/// i L^T Omega L (V = L L^T); anything else through a general eigensolver. Throws LinalgError(kResidual) if the moduli fail to pair
/// within `pairing_tolerance` (relative).
std::vector<double> symplectic_eigenvalues(const CovarianceMatrix& v,
                                           double pairing_tolerance = kDefaultPairingTolerance);

/// Smallest eigenvalue of the Hermitian matrix V + (i/2) Omega. Physical
/// states have it >= 0.
double physicality_margin(const CovarianceMatrix& v);

/// max(0, -ln 2 nu_min) of the state with the first mode transposed.
double log_negativity(const CovarianceMatrix& two_mode,
                      double pairing_tolerance = kDefaultPairingTolerance);

/// Pairwise log negativity of two modes picked out of a larger state.
double log_negativity(const CovarianceMatrix& v, ModeIndex first, ModeIndex second,
                      double pairing_tolerance = kDefaultPairingTolerance);

/// One-mode-versus-two log negativity of a three-mode state, with `pivot`
/// transposed.
double one_vs_two_log_negativity(const CovarianceMatrix& three_mode, ModeIndex pivot,
                                 double pairing_tolerance = kDefaultPairingTolerance);

struct ContangleResult {
  double minimum = 0;
  std::array<ModeIndex, 3> pivots{};
  /// residuals[k] = E(p|rest)^2 - E(p|d)^2 - E(p|f)^2 for p = pivots[k].
  std::array<double, 3> residuals{};
};

/// Minimum residual contangle of a three-mode state, contangle being the
/// squared log negativity.
ContangleResult residual_contangle(const CovarianceMatrix& three_mode,
                                   double pairing_tolerance = kDefaultPairingTolerance);

}  // namespace magnonet
