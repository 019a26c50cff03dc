#pragma once

#include "magnonet/sweep.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace magnonet {

/// Bad configuration document. line() is 1-based, 0 when unknown.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& what, int line = 0)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

// Everything below is in human units: frequencies and rates as f/2pi in MHz,
// temperatures in mK. Conversion to internal units happens in to_*().

struct SystemConfig {
  Triple omega_a_mhz{1e4, 1e4, 1e4};
  Triple omega_m_mhz{1e4, 1e4, 1e4};
  Triple g_mhz{20, 20, 20};
  Triple kappa_mhz{5, 5, 5};
  Triple gamma_mhz{1, 1, 1};
  double J12_mhz = 12;
  double J23_mhz = 12;
  double G_mhz = 4.5;
  std::vector<int> opa_cavities{1};
  Triple Omega_mhz{0, 1, 1};
  /// When false, cavities carrying an OPA lose their coherent drive.
  bool drive_with_opa = true;
  double temperature_mk = 20;
  bool linked_detunings = true;
  // Used when linked_detunings is true.
  double delta_a1_mhz = 0;
  double delta_m1_mhz = 0;
  // Used when linked_detunings is false.
  Triple delta_a_mhz{};
  Triple delta_m_mhz{};
};

struct EntanglementConfig {
  std::array<std::string, 3> triple{"m1", "m2", "m3"};
  std::vector<std::string> quantities{"E_m1m2", "E_m1m3", "E_m2m3", "R_min"};
};

struct AxisConfig {
  std::string parameter;
  double lower = 0;
  double upper = 1;
  int points = 2;
};

struct SweepConfig {
  AxisConfig axis1;
  std::optional<AxisConfig> axis2;
  std::vector<std::string> quantities;
};

struct TemperaturePointConfig {
  std::string quantity;
  double delta_a1_mhz = 0;
  double delta_m1_mhz = 0;
};

struct TemperatureConfig {
  double lower_mk = 10;
  double upper_mk = 300;
  int points = 59;
  std::vector<TemperaturePointConfig> operating_points;
};

struct ToleranceConfig {
  double stability_margin = kDefaultStabilityMargin;
  double pairing = kDefaultPairingTolerance;
  double residual = 1e-10;
  double max_condition = 1e13;
  std::string lyapunov_method = "schur";  // or "kronecker"
};

struct OutputConfig {
  std::string path;
  std::string format = "csv";  // or "json"
  unsigned threads = 0;        // 0 = hardware concurrency
};

struct RunConfig {
  SystemConfig system;
  EntanglementConfig entanglement;
  std::optional<SweepConfig> sweep;
  std::optional<TemperatureConfig> temperature_sweep;
  ToleranceConfig tolerances;
  OutputConfig output;
};

/// Parses a YAML document. Unknown keys, wrong types and out-of-range values
/// raise ConfigError with the offending line.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);
/// Fully resolved YAML (every key, shortest exact decimal form), so that
/// parse_config(dump_config(c)) reproduces c.
std::string dump_config(const RunConfig& config);

SystemParams to_system_params(const RunConfig& config);
EvaluationOptions to_evaluation_options(const RunConfig& config);
/// Requires a sweep block.
SweepSpec to_sweep_spec(const RunConfig& config);
/// Requires a temperature_sweep block.
TemperatureSweepSpec to_temperature_spec(const RunConfig& config);

}  // namespace magnonet
