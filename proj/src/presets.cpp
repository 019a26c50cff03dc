#include "magnonet/presets.hpp"

#include <stdexcept>

namespace magnonet {

namespace {

constexpr int kDefaultGrid = 121;

// Detuning plane in units of gamma/2pi = 1 MHz.
SweepConfig detuning_plane(std::vector<std::string> quantities) {
  return {{"delta_a1", -30, 30, kDefaultGrid}, AxisConfig{"delta_m1", -30, 30, kDefaultGrid},
          std::move(quantities)};
}

const std::vector<std::string> kEntanglementColumns{"E_m1m2", "E_m1m3", "E_m2m3", "R_min"};

RunConfig base(double g_opa, std::vector<int> opa_cavities) {
  RunConfig c;
  c.system.G_mhz = g_opa;
  c.system.opa_cavities = std::move(opa_cavities);
  return c;
}

}  // namespace

std::vector<std::string> preset_ids() { return {"fig2", "fig3", "fig4", "fig5", "fig6", "fig7"}; }

RunConfig preset_config(const std::string& id) {
  if (id == "fig2") {
    RunConfig c = base(4.5, {1});
    c.sweep = detuning_plane({"N_a1", "N_a2", "N_a3", "N_m1", "N_m2", "N_m3"});
    return c;
  }
  if (id == "fig3") {
    RunConfig c = base(4.5, {1});
    c.sweep = detuning_plane(kEntanglementColumns);
    return c;
  }
  if (id == "fig4") {
    RunConfig c = base(4.5, {1});
    c.system.delta_a1_mhz = -10;
    c.system.delta_m1_mhz = 10;
    c.sweep = SweepConfig{{"G", 0, 8, kDefaultGrid}, AxisConfig{"kappa1", 1, 10, kDefaultGrid},
                          kEntanglementColumns};
    return c;
  }
  if (id == "fig5") {
    RunConfig c = base(2.6, {1, 2});
    c.sweep = detuning_plane(kEntanglementColumns);
    return c;
  }
  if (id == "fig6") {
    RunConfig c = base(2.6, {1, 2, 3});
    c.sweep = detuning_plane(kEntanglementColumns);
    return c;
  }
  if (id == "fig7") {
    RunConfig c = base(2.6, {1, 2, 3});
    c.temperature_sweep = TemperatureConfig{10, 300, 59,
                                            {{"E_m1m2", 12, 0},
                                             {"E_m1m3", 0, 0},
                                             {"E_m2m3", 9, -22},
                                             {"R_min", 0, 0}}};
    return c;
  }
  throw std::invalid_argument("unknown figure id '" + id + "' (expected fig2..fig7)");
}

}  // namespace magnonet
