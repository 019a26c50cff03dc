#pragma once

#include <Eigen/Dense>

#include <array>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>

namespace magnonet {

// Internal units: angular frequencies and rates in rad/us (2*pi times the
// value in MHz), time in us, temperature in K.

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr double kHbar = 1.054571817e-34;      // J s (CODATA 2018)
inline constexpr double kBoltzmann = 1.380649e-23;    // J/K (exact SI)

/// f/2pi in MHz -> rad/us
constexpr double from_mhz(double value_mhz) { return kTwoPi * value_mhz; }
/// rad/us -> f/2pi in MHz
constexpr double to_mhz(double rad_per_us) { return rad_per_us / kTwoPi; }

inline constexpr int kModes = 6;
inline constexpr int kDim = 2 * kModes;

using Matrix12 = Eigen::Matrix<double, kDim, kDim>;
using Vector12 = Eigen::Matrix<double, kDim, 1>;
using Triple = std::array<double, 3>;

enum class ModeKind { kCavity, kMagnon };

/// A bosonic mode of the network. Quadratures sit at rows (2k, 2k+1) of the
/// fluctuation vector, with k running over [a1, a2, a3, m1, m2, m3].
struct ModeIndex {
  ModeKind kind = ModeKind::kCavity;
  int index = 1;  // 1..3

  constexpr int position() const { return (kind == ModeKind::kCavity ? 0 : 3) + index - 1; }
  constexpr int x_row() const { return 2 * position(); }
  constexpr int y_row() const { return 2 * position() + 1; }
  std::string label() const { return (kind == ModeKind::kCavity ? "a" : "m") + std::to_string(index); }

  friend constexpr bool operator==(const ModeIndex&, const ModeIndex&) = default;
};

constexpr ModeIndex cavity(int j) { return {ModeKind::kCavity, j}; }
constexpr ModeIndex magnon(int j) { return {ModeKind::kMagnon, j}; }

/// Parses "a1".."a3" / "m1".."m3".
ModeIndex parse_mode(const std::string& label);

/// The fixed mode ordering of the full 12x12 covariance matrix.
std::array<ModeIndex, kModes> all_modes();

struct SystemParams {
  Triple omega_a{};   // absolute cavity frequencies
  Triple omega_m{};   // absolute magnon frequencies
  Triple delta_a{};   // cavity detunings from the drive
  Triple delta_m{};   // magnon detunings from the drive
  Triple g{};         // cavity-magnon beam-splitter couplings
  Triple kappa{};     // cavity decay rates
  Triple gamma{};     // magnon decay rates
  double J12 = 0;
  double J23 = 0;
  Triple G{};         // parametric (OPA) strength per cavity, 0 when absent
  Triple Omega{};     // coherent drive Rabi frequency per cavity
  double T = 0;       // bath temperature

  /// Throws std::invalid_argument naming the first offending field.
  void validate() const;
};

/// Drift matrix, diffusion matrix and coherent drive of the quadrature
/// equations  d/dt f = A f + b + noise.
struct LinearModel {
  Matrix12 A = Matrix12::Zero();
  Matrix12 D = Matrix12::Zero();
  Vector12 b = Vector12::Zero();
};

/// Bose-Einstein occupation 1/(exp(hbar w / kB T) - 1) for w in rad/us and T
/// in K. Exactly 0 at T = 0.
double thermal_occupation(double omega, double temperature);

Matrix12 build_drift_matrix(const SystemParams& p);
Matrix12 build_diffusion(const SystemParams& p);
Vector12 build_drive_vector(const SystemParams& p);
LinearModel build_model(const SystemParams& p);

/// Rabi frequency sqrt(2 P kappa / (hbar omega)) in rad/us, for drive power in
/// W and kappa, omega in rad/us.
double rabi_from_power(double power, double kappa, double omega);
/// Inverse of rabi_from_power: the drive power (W) that yields `rabi`.
double power_from_rabi(double rabi, double kappa, double omega);

struct Detunings {
  Triple delta_a{};
  Triple delta_m{};
};

/// Linked detunings: delta_a = (d, d, -d) and delta_m = (e, e, -e).
Detunings apply_detuning_constraints(double delta_a1, double delta_m1);

}  // namespace magnonet
