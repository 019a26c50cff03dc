#include "magnonet/cli.hpp"

#include "CLI11.hpp"
#include "magnonet/config.hpp"
#include "magnonet/io.hpp"
#include "magnonet/presets.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>

namespace magnonet {

namespace {

namespace fs = std::filesystem;

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CommonFlags {
  std::string config_path;
  std::string out;
  std::optional<unsigned> threads;
  std::optional<int> grid;
  std::optional<std::string> format;
};

void add_common(CLI::App* cmd, CommonFlags& flags, bool needs_config) {
  auto* cfg = cmd->add_option("--config", flags.config_path, "YAML run configuration");
  if (needs_config) cfg->required();
  cmd->add_option("--out", flags.out, "output file (or directory for `model`)");
  cmd->add_option("--threads", flags.threads, "worker threads, 0 = all cores");
  cmd->add_option("--grid", flags.grid, "points per sweep axis")->check(CLI::Range(2, 100000));
  cmd->add_option("--format", flags.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
}

RunConfig resolve(const CommonFlags& flags, RunConfig config) {
  if (!flags.out.empty()) config.output.path = flags.out;
  if (flags.threads) config.output.threads = *flags.threads;
  if (flags.format) config.output.format = *flags.format;
  if (flags.grid) {
    if (config.sweep) {
      config.sweep->axis1.points = *flags.grid;
      if (config.sweep->axis2) config.sweep->axis2->points = *flags.grid;
    }
    if (config.temperature_sweep) config.temperature_sweep->points = *flags.grid;
  }
  return config;
}

RunConfig load(const CommonFlags& flags) {
  return resolve(flags, flags.config_path.empty() ? RunConfig{} : load_config(flags.config_path));
}

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
  }
  std::ofstream f(path);
  if (!f) throw IoError("cannot write '" + path.string() + "'");
  return f;
}

void write_table(const SweepTable& table, const RunConfig& config, std::ostream& out) {
  auto emit = [&](std::ostream& o) {
    if (config.output.format == "json") {
      write_json(o, table);
    } else {
      write_csv(o, table);
    }
  };
  if (config.output.path.empty()) {
    emit(out);
    return;
  }
  std::ofstream f = open_out(config.output.path);
  emit(f);
  if (!f) throw IoError("write to '" + config.output.path + "' failed");
}

bool any_stable(const SweepTable& table) {
  return std::any_of(table.rows.begin(), table.rows.end(), [](const SweepRow& r) { return r.stability.stable; });
}

int cmd_model(const RunConfig& config, std::ostream& out) {
  const SystemParams p = to_system_params(config);
  const LinearModel model = build_model(p);
  const StabilityReport st = check_stability(model.A, config.tolerances.stability_margin);

  const fs::path dir = config.output.path.empty() ? fs::path(".") : fs::path(config.output.path);
  std::error_code ec;
  fs::create_directories(dir, ec);
  auto dump = [&](const char* name, const Eigen::MatrixXd& m) {
    std::ofstream f = open_out(dir / name);
    write_matrix(f, m);
    if (!f) throw IoError("write to '" + (dir / name).string() + "' failed");
  };
  dump("A.txt", model.A);
  dump("D.txt", model.D);
  dump("b.txt", model.b);

  std::ostringstream report;
  report.precision(12);
  report << "spectral_abscissa " << st.spectral_abscissa << "\n"
         << "margin_tolerance " << st.margin_tolerance << "\n"
         << "stable " << (st.stable ? "true" : "false") << "\n";
  {
    std::ofstream f = open_out(dir / "stability.txt");
    f << report.str();
  }
  out << "wrote A.txt, D.txt, b.txt, stability.txt to " << dir.string() << "\n" << report.str();
  return kExitOk;
}

int cmd_steady(const RunConfig& config, double diameter_um, std::ostream& out, std::ostream& err) {
  const LinearModel model = build_model(to_system_params(config));
  const StabilityReport st = check_stability(model.A, config.tolerances.stability_margin);
  SweepTable table;
  for (const char* name : {"N_a1", "N_a2", "N_a3", "N_m1", "N_m2", "N_m3", "abscissa"}) {
    table.quantities.push_back(parse_quantity(name));
  }
  SweepRow row;
  row.stability = st;
  row.values.assign(table.quantities.size(), std::numeric_limits<double>::quiet_NaN());
  if (st.stable) {
    LinalgTolerances tol;
    tol.residual = config.tolerances.residual;
    tol.max_condition = config.tolerances.max_condition;
    const MeanField mf = steady_means(model, config.tolerances.stability_margin, tol);
    for (int j = 0; j < 3; ++j) {
      row.values[j] = mf.N_a[j];
      row.values[3 + j] = mf.N_m[j];
    }
    row.values[6] = st.spectral_abscissa;
    const double n_max = *std::max_element(mf.N_m.begin(), mf.N_m.end());
    const WeakExcitationReport w = weak_excitation_check(n_max, diameter_um * 1e-6);
    err << "spin count " << w.spin_count << ", max N_m/(2Ns) = " << w.ratio
        << (w.pass ? " (weak excitation holds)" : " (weak excitation VIOLATED)") << "\n";
  }
  table.rows.push_back(row);
  write_table(table, config, out);
  if (!st.stable) {
    err << "system is unstable (spectral abscissa " << st.spectral_abscissa << ")\n";
    return kExitUnstable;
  }
  return kExitOk;
}

int cmd_entangle(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const SystemParams p = to_system_params(config);
  SweepTable table;
  table.quantities = parse_quantities(config.entanglement.quantities);
  const EntanglementReport report = evaluate_point(p, table.quantities, to_evaluation_options(config));
  table.rows.push_back({0, 0, report.stability, report.values});
  write_table(table, config, out);
  if (!report.stability.stable) {
    err << "system is unstable (spectral abscissa " << report.stability.spectral_abscissa << ")\n";
    return kExitUnstable;
  }
  return kExitOk;
}

int finish_table(const SweepTable& table, const RunConfig& config, std::ostream& out, std::ostream& err,
                 const std::string& summary_path) {
  write_table(table, config, out);
  const std::string summary = summarize(table);
  // The summary goes to stdout unless stdout already carries the table.
  (config.output.path.empty() ? err : out) << summary;
  if (!summary_path.empty()) {
    std::ofstream f = open_out(summary_path);
    f << summary;
  }
  if (!any_stable(table)) {
    err << "no stable point in the sweep\n";
    return kExitUnstable;
  }
  return kExitOk;
}

int cmd_sweep(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const SweepTable table = run_sweep(to_sweep_spec(config), config.output.threads);
  return finish_table(table, config, out, err, "");
}

int cmd_sweep_temp(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const SweepTable table = temperature_sweep(to_temperature_spec(config), config.output.threads);
  return finish_table(table, config, out, err, "");
}

int cmd_reproduce(const std::string& figure, const CommonFlags& flags, std::ostream& out, std::ostream& err) {
  RunConfig config = resolve(flags, preset_config(figure));
  if (config.output.path.empty()) config.output.path = figure + (config.output.format == "json" ? ".json" : ".csv");
  const SweepTable table = config.sweep ? run_sweep(to_sweep_spec(config), config.output.threads)
                                        : temperature_sweep(to_temperature_spec(config), config.output.threads);
  const fs::path summary = fs::path(config.output.path).replace_extension(".summary.txt");
  out << figure << ": wrote " << config.output.path << "\n";
  return finish_table(table, config, out, err, summary.string());
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Steady-state entanglement of a three-cavity magnon network", "magnonet"};
  app.require_subcommand(1);

  CommonFlags model_flags, steady_flags, entangle_flags, sweep_flags, temp_flags, repro_flags;
  double diameter_um = 250;
  std::string figure;

  auto* model = app.add_subcommand("model", "dump drift/diffusion matrices, drive vector and stability");
  add_common(model, model_flags, true);
  auto* steady = app.add_subcommand("steady", "mean-field occupations and weak-excitation check");
  add_common(steady, steady_flags, true);
  steady->add_option("--diameter-um", diameter_um, "YIG sphere diameter in micrometres");
  auto* entangle = app.add_subcommand("entangle", "entanglement measures at one parameter point");
  add_common(entangle, entangle_flags, true);
  auto* sweep = app.add_subcommand("sweep", "grid sweep described by the config's sweep block");
  add_common(sweep, sweep_flags, true);
  auto* sweep_temp = app.add_subcommand("sweep-temp", "temperature scan at fixed operating points");
  add_common(sweep_temp, temp_flags, true);
  auto* reproduce = app.add_subcommand("reproduce", "run a built-in figure preset");
  add_common(reproduce, repro_flags, false);
  reproduce->add_option("figure", figure, "fig2 .. fig7")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfigError;
  }

  try {
    if (*model) return cmd_model(load(model_flags), out);
    if (*steady) return cmd_steady(load(steady_flags), diameter_um, out, err);
    if (*entangle) return cmd_entangle(load(entangle_flags), out, err);
    if (*sweep) return cmd_sweep(load(sweep_flags), out, err);
    if (*sweep_temp) return cmd_sweep_temp(load(temp_flags), out, err);
    if (*reproduce) return cmd_reproduce(figure, repro_flags, out, err);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << "\n";
    return kExitIoError;
  } catch (const std::ios_base::failure& e) {
    err << "I/O error: " << e.what() << "\n";
    return kExitIoError;
  } catch (const UnstableSystemError& e) {
    err << e.what() << "\n";
    return kExitUnstable;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitFailure;
}

}  // namespace magnonet
