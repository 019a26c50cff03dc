#include "magnonet/system_model.hpp"

#include <cmath>

namespace magnonet {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument("invalid SystemParams: " + what);
}

void require_each(const Triple& values, bool (*pred)(double), const char* name, const char* rule) {
  for (int j = 0; j < 3; ++j) {
    require(std::isfinite(values[j]) && pred(values[j]),
            std::string(name) + "[" + std::to_string(j + 1) + "] must be " + rule);
  }
}

bool positive(double v) { return v > 0; }
bool non_negative(double v) { return v >= 0; }
bool any_value(double) { return true; }

}  // namespace

ModeIndex parse_mode(const std::string& label) {
  if (label.size() == 2 && (label[0] == 'a' || label[0] == 'm') && label[1] >= '1' &&
      label[1] <= '3') {
    return {label[0] == 'a' ? ModeKind::kCavity : ModeKind::kMagnon, label[1] - '0'};
  }
  throw std::invalid_argument("unknown mode label '" + label + "' (expected a1..a3 or m1..m3)");
}

std::array<ModeIndex, kModes> all_modes() {
  return {cavity(1), cavity(2), cavity(3), magnon(1), magnon(2), magnon(3)};
}

void SystemParams::validate() const {
  require_each(omega_a, positive, "omega_a", "> 0");
  require_each(omega_m, positive, "omega_m", "> 0");
  require_each(delta_a, any_value, "delta_a", "finite");
  require_each(delta_m, any_value, "delta_m", "finite");
  require_each(g, non_negative, "g", ">= 0");
  require_each(kappa, positive, "kappa", "> 0");
  require_each(gamma, positive, "gamma", "> 0");
  require(std::isfinite(J12) && J12 >= 0, "J12 must be >= 0");
  require(std::isfinite(J23) && J23 >= 0, "J23 must be >= 0");
  require_each(G, non_negative, "G", ">= 0");
  require_each(Omega, non_negative, "Omega", ">= 0");
  require(std::isfinite(T) && T >= 0, "T must be >= 0");
}

double thermal_occupation(double omega, double temperature) {
  if (!(omega > 0)) throw std::invalid_argument("thermal_occupation: omega must be > 0");
  if (!(temperature >= 0)) throw std::invalid_argument("thermal_occupation: T must be >= 0");
  if (temperature == 0) return 0.0;
  const double x = kHbar * omega * 1e6 / (kBoltzmann * temperature);
  return 1.0 / std::expm1(x);
}

Matrix12 build_drift_matrix(const SystemParams& p) {
  Matrix12 a = Matrix12::Zero();
  for (int j = 0; j < 3; ++j) {
    const int c = cavity(j + 1).x_row();
    const int m = magnon(j + 1).x_row();

    a(c, c) = 2 * p.G[j] - p.kappa[j];
    a(c, c + 1) = p.delta_a[j];
    a(c + 1, c) = -p.delta_a[j];
    a(c + 1, c + 1) = -2 * p.G[j] - p.kappa[j];

    a(m, m) = -p.gamma[j];
    a(m, m + 1) = p.delta_m[j];
    a(m + 1, m) = -p.delta_m[j];
    a(m + 1, m + 1) = -p.gamma[j];

    a(c, m + 1) = p.g[j];
    a(c + 1, m) = -p.g[j];
    a(m, c + 1) = p.g[j];
    a(m + 1, c) = -p.g[j];
  }

  auto couple = [&a](int first, int second, double rate) {
    const int c1 = cavity(first).x_row();
    const int c2 = cavity(second).x_row();
    a(c1, c2 + 1) = rate;
    a(c1 + 1, c2) = -rate;
    a(c2, c1 + 1) = rate;
    a(c2 + 1, c1) = -rate;
  };
  couple(1, 2, p.J12);
  couple(2, 3, p.J23);
  return a;
}

Matrix12 build_diffusion(const SystemParams& p) {
  Vector12 diag;
  for (int j = 0; j < 3; ++j) {
    const double na = thermal_occupation(p.omega_a[j], p.T);
    const double nm = thermal_occupation(p.omega_m[j], p.T);
    diag.segment<2>(cavity(j + 1).x_row()).setConstant(p.kappa[j] * (2 * na + 1));
    diag.segment<2>(magnon(j + 1).x_row()).setConstant(p.gamma[j] * (2 * nm + 1));
  }
  return diag.asDiagonal();
}

Vector12 build_drive_vector(const SystemParams& p) {
  // A real Rabi frequency feeds only the X quadrature: X = (a + a^dag)/sqrt(2).
  Vector12 b = Vector12::Zero();
  for (int j = 0; j < 3; ++j) {
    b(cavity(j + 1).x_row()) = std::sqrt(2.0) * p.Omega[j];
  }
  return b;
}

LinearModel build_model(const SystemParams& p) {
  p.validate();
  return {build_drift_matrix(p), build_diffusion(p), build_drive_vector(p)};
}

double rabi_from_power(double power, double kappa, double omega) {
  if (!(power >= 0) || !(kappa > 0) || !(omega > 0)) {
    throw std::invalid_argument("rabi_from_power: need power >= 0, kappa > 0, omega > 0");
  }
  // kappa/omega is unit-free, so 2 P kappa / (hbar omega) is in s^-2.
  return std::sqrt(2 * power * kappa / (kHbar * omega)) * 1e-6;
}

double power_from_rabi(double rabi, double kappa, double omega) {
  if (!(rabi >= 0) || !(kappa > 0) || !(omega > 0)) {
    throw std::invalid_argument("power_from_rabi: need rabi >= 0, kappa > 0, omega > 0");
  }
  const double rabi_per_s = rabi * 1e6;
  return rabi_per_s * rabi_per_s * kHbar * omega / (2 * kappa);
}

Detunings apply_detuning_constraints(double delta_a1, double delta_m1) {
  return {{delta_a1, delta_a1, -delta_a1}, {delta_m1, delta_m1, -delta_m1}};
}

}  // namespace magnonet
