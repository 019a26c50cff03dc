#pragma once

#include "magnonet/entanglement.hpp"
#include "magnonet/steady_state.hpp"
#include "magnonet/system_model.hpp"

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace magnonet {

enum class QuantityKind { kOccupation, kLogNegativity, kResidualContangle, kAbscissa };

/// A per-point output column: "N_a1", "E_m1m2", "R_min" or "abscissa".
struct Quantity {
  QuantityKind kind = QuantityKind::kAbscissa;
  ModeIndex first{};
  ModeIndex second{};

  std::string name() const;
  friend bool operator==(const Quantity&, const Quantity&) = default;
};

Quantity parse_quantity(const std::string& name);
std::vector<Quantity> parse_quantities(std::span<const std::string> names);

struct EvaluationOptions {
  double stability_margin = kDefaultStabilityMargin;
  double pairing_tolerance = kDefaultPairingTolerance;
  LyapunovOptions lyapunov{};
  /// Modes entering R_min.
  std::array<ModeIndex, 3> triple{magnon(1), magnon(2), magnon(3)};
};

/// Result of one grid point. values[i] belongs to quantities[i] and is NaN
/// whenever the point is unstable.
struct EntanglementReport {
  StabilityReport stability{};
  std::vector<Quantity> quantities;
  std::vector<double> values;

  double value(const Quantity& q) const;
};

EntanglementReport evaluate_point(const SystemParams& p, std::span<const Quantity> quantities,
                                  const EvaluationOptions& options = {});

/// Sweepable parameter names, values in config units (MHz as f/2pi, T in mK):
/// delta_a1..3, delta_m1..3, g1..3, kappa1..3, gamma1..3, J12, J23, G, G1..3,
/// Omega1..3, T. "G" sets every cavity listed in `opa_cavities`.
void set_parameter(SystemParams& p, const std::string& path, double value,
                   std::span<const int> opa_cavities);
bool is_parameter_path(const std::string& path);

struct SweepAxis {
  std::string parameter;
  double lower = 0;
  double upper = 1;
  int points = 2;

  double value(int i) const;
};

enum class DetuningConstraint { kNone, kLinked };

struct SweepSpec {
  SystemParams base{};
  SweepAxis axis1{};
  std::optional<SweepAxis> axis2;
  DetuningConstraint constraint = DetuningConstraint::kLinked;
  std::vector<Quantity> quantities;
  std::vector<int> opa_cavities{1};
  EvaluationOptions options{};

  /// Throws std::invalid_argument on bad axes or parameter paths.
  void validate() const;
  std::size_t row_count() const;
};

struct SweepRow {
  double axis1 = 0;
  double axis2 = 0;  // NaN for one-axis sweeps
  StabilityReport stability{};
  std::vector<double> values;
};

struct SweepTable {
  std::vector<std::string> axis_names;
  std::vector<Quantity> quantities;
  std::vector<SweepRow> rows;

  /// Column of `q`; throws std::invalid_argument if the table lacks it.
  std::size_t column_of(const Quantity& q) const;
};

/// Parameters of row `row` (row-major: axis1 is the slow index), with the
/// detuning constraint applied.
SystemParams point_params(const SweepSpec& spec, std::size_t row);

/// Runs fn(i) for i in [0, n) on up to `threads` workers (0 = hardware
/// concurrency). The first exception thrown by any call is rethrown.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn);

SweepTable run_sweep(const SweepSpec& spec, unsigned threads = 1);

class AllUnstableError : public std::runtime_error {
 public:
  explicit AllUnstableError(const std::string& what) : std::runtime_error(what) {}
};

struct MaxLocation {
  std::size_t row = 0;
  double axis1 = 0;
  double axis2 = 0;
  double value = 0;
};

/// Maximum over stable rows (rows whose value is not NaN); ties go to the
/// earliest row.
MaxLocation find_max(const SweepTable& table, const Quantity& q);

/// One quantity evaluated at its own operating point (linked detunings).
struct TemperaturePoint {
  Quantity quantity{};
  double delta_a1 = 0;  // rad/us
  double delta_m1 = 0;  // rad/us
};

struct TemperatureSweepSpec {
  SystemParams base{};
  std::vector<TemperaturePoint> points;
  double lower_mk = 10;
  double upper_mk = 300;
  int samples = 59;
  EvaluationOptions options{};
};

/// Table with a single "T" axis (mK); stable is true only if every operating
/// point is stable at that temperature, and each value is masked on its own.
SweepTable temperature_sweep(const TemperatureSweepSpec& spec, unsigned threads = 1);

}  // namespace magnonet
