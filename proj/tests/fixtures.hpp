#pragma once

#include "magnonet/system_model.hpp"

namespace fixtures {

inline constexpr double kTenGHz = magnonet::kTwoPi * 1e4;  // rad/us

/// Single OPA in cavity 1 (G/2pi = 4.5 MHz) at Delta_a1/2pi = -10 MHz,
/// Delta_m1/2pi = 10 MHz, linked detunings, 20 mK.
inline magnonet::SystemParams reference_params() {
  using namespace magnonet;
  SystemParams p;
  p.omega_a.fill(kTenGHz);
  p.omega_m.fill(kTenGHz);
  p.g.fill(from_mhz(20));
  p.kappa.fill(from_mhz(5));
  p.gamma.fill(from_mhz(1));
  p.J12 = from_mhz(12);
  p.J23 = from_mhz(12);
  p.G = {from_mhz(4.5), 0, 0};
  p.Omega = {0, from_mhz(1), from_mhz(1)};
  p.T = 0.020;
  const Detunings d = apply_detuning_constraints(from_mhz(-10), from_mhz(10));
  p.delta_a = d.delta_a;
  p.delta_m = d.delta_m;
  return p;
}

}  // namespace fixtures
