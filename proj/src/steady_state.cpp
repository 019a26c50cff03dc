#include "magnonet/steady_state.hpp"

#include <cmath>
#include <numbers>

namespace magnonet {

StabilityReport check_stability(const Matrix12& a, double margin) {
  const double abscissa = spectral_abscissa(a);
  return {abscissa, abscissa < -margin, margin};
}

MeanField steady_means(const LinearModel& model, double margin, const LinalgTolerances& tol) {
  const StabilityReport stability = check_stability(model.A, margin);
  if (!stability.stable) {
    throw UnstableSystemError("steady_means: drift matrix is not stable (spectral abscissa " +
                              std::to_string(stability.spectral_abscissa) + ")");
  }
  MeanField mf;
  mf.u = solve_linear(model.A, (-model.b).eval(), tol);
  for (int j = 0; j < 3; ++j) {
    const int c = cavity(j + 1).x_row();
    const int m = magnon(j + 1).x_row();
    mf.N_a[j] = (mf.u(c) * mf.u(c) + mf.u(c + 1) * mf.u(c + 1)) / 2;
    mf.N_m[j] = (mf.u(m) * mf.u(m) + mf.u(m + 1) * mf.u(m + 1)) / 2;
  }
  return mf;
}

WeakExcitationReport weak_excitation_check(double magnon_number, double diameter,
                                           double spin_density, double spin, double threshold) {
  if (!(magnon_number >= 0) || !(diameter > 0) || !(spin_density > 0) || !(spin > 0)) {
    throw std::invalid_argument("weak_excitation_check: inputs must be positive");
  }
  WeakExcitationReport report;
  report.spin_count = spin_density * std::numbers::pi / 6 * diameter * diameter * diameter;
  report.ratio = magnon_number / (2 * report.spin_count * spin);
  report.pass = report.ratio < threshold;
  return report;
}

}  // namespace magnonet
