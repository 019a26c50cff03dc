#pragma once

#include "magnonet/linalg.hpp"
#include "magnonet/system_model.hpp"

#include <stdexcept>
#include <string>

namespace magnonet {

/// Largest real part over the spectrum of a square matrix.
template <typename Derived>
typename Derived::Scalar spectral_abscissa(const Eigen::MatrixBase<Derived>& a) {
  const auto spectrum = eigvals(a);
  if (spectrum.size() == 0) {
    throw LinalgError(LinalgErrc::kDimensionMismatch, "spectral_abscissa: empty matrix");
  }
  return spectrum.real().maxCoeff();
}

inline constexpr double kDefaultStabilityMargin = 1e-9;

/// stable <=> spectral_abscissa < -margin_tolerance. Marginal points count as
/// unstable.
struct StabilityReport {
  double spectral_abscissa = 0;
  bool stable = false;
  double margin_tolerance = kDefaultStabilityMargin;
};

StabilityReport check_stability(const Matrix12& a, double margin = kDefaultStabilityMargin);

class UnstableSystemError : public std::runtime_error {
 public:
  explicit UnstableSystemError(const std::string& what) : std::runtime_error(what) {}
};

/// Steady quadrature means u (A u = -b) and the resulting occupations, with
/// <a> = (<X> + i<Y>)/sqrt(2) so that N = (X^2 + Y^2)/2.
struct MeanField {
  Vector12 u = Vector12::Zero();
  Triple N_a{};
  Triple N_m{};
};

/// The mean-value equations are exactly linear (the Hamiltonian is quadratic),
/// so they share the fluctuation drift matrix.
MeanField steady_means(const LinearModel& model, double margin = kDefaultStabilityMargin,
                       const LinalgTolerances& tol = {});

struct WeakExcitationReport {
  double spin_count = 0;
  double ratio = 0;
  bool pass = false;
};

inline constexpr double kYigSpinDensity = 4.22e27;  // m^-3
inline constexpr double kFe3Spin = 2.5;

/// Spin count of a sphere, rho * pi/6 * diameter^3, and the ratio
/// N_m / (2 * spin_count * s) compared against `threshold`.
WeakExcitationReport weak_excitation_check(double magnon_number, double diameter,
                                           double spin_density = kYigSpinDensity,
                                           double spin = kFe3Spin, double threshold = 1e-5);

}  // namespace magnonet
