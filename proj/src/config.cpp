#include "magnonet/config.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

namespace magnonet {

namespace {

int line_of(const YAML::Node& node) { return node.Mark().line >= 0 ? node.Mark().line + 1 : 0; }

void reject_unknown_keys(const YAML::Node& map, const std::set<std::string>& allowed,
                         const std::string& section) {
  if (!map.IsMap()) throw ConfigError("'" + section + "' must be a mapping", line_of(map));
  for (const auto& kv : map) {
    const auto key = kv.first.as<std::string>();
    if (!allowed.contains(key)) {
      throw ConfigError("unknown key '" + key + "' in '" + section + "'", line_of(kv.first));
    }
  }
}

template <typename T>
T scalar(const YAML::Node& node, const std::string& key) {
  if (!node.IsScalar()) throw ConfigError("'" + key + "' must be a scalar", line_of(node));
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    throw ConfigError("'" + key + "' has the wrong type", line_of(node));
  }
}

template <typename T>
void read(const YAML::Node& map, const std::string& key, T& out) {
  if (const YAML::Node node = map[key]) out = scalar<T>(node, key);
}

/// Either a scalar (broadcast to all three) or a list of exactly three.
void read_triple(const YAML::Node& map, const std::string& key, Triple& out) {
  const YAML::Node node = map[key];
  if (!node) return;
  if (node.IsScalar()) {
    out.fill(scalar<double>(node, key));
    return;
  }
  if (!node.IsSequence() || node.size() != 3) {
    throw ConfigError("'" + key + "' must be a number or a list of three numbers", line_of(node));
  }
  for (std::size_t j = 0; j < 3; ++j) out[j] = scalar<double>(node[j], key);
}

std::vector<std::string> read_strings(const YAML::Node& node, const std::string& key) {
  if (!node.IsSequence()) throw ConfigError("'" + key + "' must be a list", line_of(node));
  std::vector<std::string> out;
  for (const auto& item : node) out.push_back(scalar<std::string>(item, key));
  return out;
}

void check(bool ok, const std::string& what, const YAML::Node& node) {
  if (!ok) throw ConfigError(what, node ? line_of(node) : 0);
}

void check_quantities(const std::vector<std::string>& names, const YAML::Node& node) {
  for (const auto& n : names) {
    try {
      parse_quantity(n);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what(), line_of(node));
    }
  }
}

SystemConfig parse_system(const YAML::Node& node) {
  reject_unknown_keys(node,
                      {"omega_a_mhz", "omega_m_mhz", "g_mhz", "kappa_mhz", "gamma_mhz", "J12_mhz",
                       "J23_mhz", "G_mhz", "opa_cavities", "Omega_mhz", "drive_with_opa",
                       "temperature_mk", "linked_detunings", "delta_a1_mhz", "delta_m1_mhz",
                       "delta_a_mhz", "delta_m_mhz"},
                      "system");
  SystemConfig s;
  read_triple(node, "omega_a_mhz", s.omega_a_mhz);
  read_triple(node, "omega_m_mhz", s.omega_m_mhz);
  read_triple(node, "g_mhz", s.g_mhz);
  read_triple(node, "kappa_mhz", s.kappa_mhz);
  read_triple(node, "gamma_mhz", s.gamma_mhz);
  read(node, "J12_mhz", s.J12_mhz);
  read(node, "J23_mhz", s.J23_mhz);
  read(node, "G_mhz", s.G_mhz);
  if (const YAML::Node cav = node["opa_cavities"]) {
    check(cav.IsSequence(), "'opa_cavities' must be a list", cav);
    s.opa_cavities.clear();
    for (const auto& c : cav) {
      const int j = scalar<int>(c, "opa_cavities");
      check(j >= 1 && j <= 3, "opa cavity index must be 1, 2 or 3", c);
      check(std::find(s.opa_cavities.begin(), s.opa_cavities.end(), j) == s.opa_cavities.end(),
            "repeated opa cavity", c);
      s.opa_cavities.push_back(j);
    }
  }
  read_triple(node, "Omega_mhz", s.Omega_mhz);
  read(node, "drive_with_opa", s.drive_with_opa);
  read(node, "temperature_mk", s.temperature_mk);
  read(node, "linked_detunings", s.linked_detunings);
  read(node, "delta_a1_mhz", s.delta_a1_mhz);
  read(node, "delta_m1_mhz", s.delta_m1_mhz);
  read_triple(node, "delta_a_mhz", s.delta_a_mhz);
  read_triple(node, "delta_m_mhz", s.delta_m_mhz);

  auto all = [](const Triple& t, auto pred) { return std::all_of(t.begin(), t.end(), pred); };
  auto positive = [](double v) { return v > 0; };
  auto non_negative = [](double v) { return v >= 0; };
  check(all(s.omega_a_mhz, positive), "omega_a_mhz must be > 0", node["omega_a_mhz"]);
  check(all(s.omega_m_mhz, positive), "omega_m_mhz must be > 0", node["omega_m_mhz"]);
  check(all(s.g_mhz, non_negative), "g_mhz must be >= 0", node["g_mhz"]);
  check(all(s.kappa_mhz, positive), "kappa_mhz must be > 0", node["kappa_mhz"]);
  check(all(s.gamma_mhz, positive), "gamma_mhz must be > 0", node["gamma_mhz"]);
  check(s.J12_mhz >= 0, "J12_mhz must be >= 0", node["J12_mhz"]);
  check(s.J23_mhz >= 0, "J23_mhz must be >= 0", node["J23_mhz"]);
  check(s.G_mhz >= 0, "G_mhz must be >= 0", node["G_mhz"]);
  check(all(s.Omega_mhz, non_negative), "Omega_mhz must be >= 0", node["Omega_mhz"]);
  check(s.temperature_mk >= 0, "temperature_mk must be >= 0", node["temperature_mk"]);
  if (s.linked_detunings) {
    check(!node["delta_a_mhz"] && !node["delta_m_mhz"],
          "delta_a_mhz/delta_m_mhz need linked_detunings: false", node["delta_a_mhz"] ? node["delta_a_mhz"] : node["delta_m_mhz"]);
  } else {
    check(!node["delta_a1_mhz"] && !node["delta_m1_mhz"],
          "delta_a1_mhz/delta_m1_mhz need linked_detunings: true", node["delta_a1_mhz"] ? node["delta_a1_mhz"] : node["delta_m1_mhz"]);
  }
  return s;
}

AxisConfig parse_axis(const YAML::Node& node, const std::string& name) {
  reject_unknown_keys(node, {"parameter", "lower", "upper", "points"}, name);
  for (const char* key : {"parameter", "lower", "upper", "points"}) {
    check(static_cast<bool>(node[key]), name + " is missing '" + key + "'", node);
  }
  AxisConfig a;
  read(node, "parameter", a.parameter);
  read(node, "lower", a.lower);
  read(node, "upper", a.upper);
  read(node, "points", a.points);
  check(is_parameter_path(a.parameter), "unknown sweep parameter '" + a.parameter + "'", node["parameter"]);
  check(a.points >= 2, name + ".points must be >= 2", node["points"]);
  check(a.lower < a.upper, name + ".lower must be < upper", node["lower"]);
  return a;
}

std::string number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string triple(const Triple& t) {
  return "[" + number(t[0]) + ", " + number(t[1]) + ", " + number(t[2]) + "]";
}

std::string string_list(const auto& items) {
  std::string out = "[";
  for (std::size_t i = 0; i < items.size(); ++i) out += (i ? ", " : "") + std::string(items[i]);
  return out + "]";
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError("YAML syntax error: " + e.msg, e.mark.line + 1);
  }
  RunConfig c;
  if (root.IsNull()) return c;
  reject_unknown_keys(root, {"system", "entanglement", "sweep", "temperature_sweep", "tolerances", "output"},
                      "top level");

  if (const YAML::Node sys = root["system"]) c.system = parse_system(sys);

  if (const YAML::Node ent = root["entanglement"]) {
    reject_unknown_keys(ent, {"triple", "quantities"}, "entanglement");
    if (const YAML::Node tri = ent["triple"]) {
      const auto modes = read_strings(tri, "triple");
      check(modes.size() == 3, "'triple' must list three modes", tri);
      for (std::size_t k = 0; k < 3; ++k) {
        try {
          parse_mode(modes[k]);
        } catch (const std::invalid_argument& e) {
          throw ConfigError(e.what(), line_of(tri));
        }
        c.entanglement.triple[k] = modes[k];
      }
      const auto& t = c.entanglement.triple;
      check(t[0] != t[1] && t[0] != t[2] && t[1] != t[2], "'triple' modes must be distinct", tri);
    }
    if (const YAML::Node q = ent["quantities"]) {
      c.entanglement.quantities = read_strings(q, "quantities");
      check_quantities(c.entanglement.quantities, q);
    }
  }

  if (const YAML::Node sw = root["sweep"]) {
    reject_unknown_keys(sw, {"axis1", "axis2", "quantities"}, "sweep");
    check(static_cast<bool>(sw["axis1"]), "sweep needs 'axis1'", sw);
    check(static_cast<bool>(sw["quantities"]), "sweep needs 'quantities'", sw);
    SweepConfig s;
    s.axis1 = parse_axis(sw["axis1"], "axis1");
    if (const YAML::Node a2 = sw["axis2"]) s.axis2 = parse_axis(a2, "axis2");
    s.quantities = read_strings(sw["quantities"], "quantities");
    check_quantities(s.quantities, sw["quantities"]);
    c.sweep = std::move(s);
  }

  if (const YAML::Node ts = root["temperature_sweep"]) {
    reject_unknown_keys(ts, {"lower_mk", "upper_mk", "points", "operating_points"}, "temperature_sweep");
    TemperatureConfig t;
    read(ts, "lower_mk", t.lower_mk);
    read(ts, "upper_mk", t.upper_mk);
    read(ts, "points", t.points);
    check(t.lower_mk > 0 && t.lower_mk < t.upper_mk, "need 0 < lower_mk < upper_mk", ts);
    check(t.points >= 2, "temperature_sweep.points must be >= 2", ts["points"]);
    const YAML::Node ops = ts["operating_points"];
    check(ops && ops.IsSequence(), "temperature_sweep needs an 'operating_points' list", ts);
    for (const auto& op : ops) {
      reject_unknown_keys(op, {"quantity", "delta_a1_mhz", "delta_m1_mhz"}, "operating_points");
      check(static_cast<bool>(op["quantity"]), "operating point needs 'quantity'", op);
      TemperaturePointConfig p;
      read(op, "quantity", p.quantity);
      read(op, "delta_a1_mhz", p.delta_a1_mhz);
      read(op, "delta_m1_mhz", p.delta_m1_mhz);
      check_quantities({p.quantity}, op["quantity"]);
      t.operating_points.push_back(p);
    }
    c.temperature_sweep = std::move(t);
  }

  if (const YAML::Node tol = root["tolerances"]) {
    reject_unknown_keys(tol, {"stability_margin", "pairing", "residual", "max_condition", "lyapunov_method"},
                        "tolerances");
    auto& t = c.tolerances;
    read(tol, "stability_margin", t.stability_margin);
    read(tol, "pairing", t.pairing);
    read(tol, "residual", t.residual);
    read(tol, "max_condition", t.max_condition);
    read(tol, "lyapunov_method", t.lyapunov_method);
    check(t.stability_margin >= 0, "stability_margin must be >= 0", tol["stability_margin"]);
    check(t.pairing > 0, "pairing must be > 0", tol["pairing"]);
    check(t.residual > 0, "residual must be > 0", tol["residual"]);
    check(t.max_condition >= 1, "max_condition must be >= 1", tol["max_condition"]);
    check(t.lyapunov_method == "schur" || t.lyapunov_method == "kronecker",
          "lyapunov_method must be 'schur' or 'kronecker'", tol["lyapunov_method"]);
  }

  if (const YAML::Node out = root["output"]) {
    reject_unknown_keys(out, {"path", "format", "threads"}, "output");
    read(out, "path", c.output.path);
    read(out, "format", c.output.format);
    read(out, "threads", c.output.threads);
    check(c.output.format == "csv" || c.output.format == "json", "format must be 'csv' or 'json'",
          out["format"]);
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::ios_base::failure("cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string dump_config(const RunConfig& c) {
  std::ostringstream o;
  const auto& s = c.system;
  o << "system:\n"
    << "  omega_a_mhz: " << triple(s.omega_a_mhz) << "\n"
    << "  omega_m_mhz: " << triple(s.omega_m_mhz) << "\n"
    << "  g_mhz: " << triple(s.g_mhz) << "\n"
    << "  kappa_mhz: " << triple(s.kappa_mhz) << "\n"
    << "  gamma_mhz: " << triple(s.gamma_mhz) << "\n"
    << "  J12_mhz: " << number(s.J12_mhz) << "\n"
    << "  J23_mhz: " << number(s.J23_mhz) << "\n"
    << "  G_mhz: " << number(s.G_mhz) << "\n";
  std::vector<std::string> cavities;
  for (int j : s.opa_cavities) cavities.push_back(std::to_string(j));
  o << "  opa_cavities: " << string_list(cavities) << "\n"
    << "  Omega_mhz: " << triple(s.Omega_mhz) << "\n"
    << "  drive_with_opa: " << (s.drive_with_opa ? "true" : "false") << "\n"
    << "  temperature_mk: " << number(s.temperature_mk) << "\n"
    << "  linked_detunings: " << (s.linked_detunings ? "true" : "false") << "\n";
  if (s.linked_detunings) {
    o << "  delta_a1_mhz: " << number(s.delta_a1_mhz) << "\n"
      << "  delta_m1_mhz: " << number(s.delta_m1_mhz) << "\n";
  } else {
    o << "  delta_a_mhz: " << triple(s.delta_a_mhz) << "\n"
      << "  delta_m_mhz: " << triple(s.delta_m_mhz) << "\n";
  }
  o << "entanglement:\n"
    << "  triple: " << string_list(c.entanglement.triple) << "\n"
    << "  quantities: " << string_list(c.entanglement.quantities) << "\n";
  if (c.sweep) {
    auto axis = [&o](const char* name, const AxisConfig& a) {
      o << "  " << name << ": {parameter: " << a.parameter << ", lower: " << number(a.lower)
        << ", upper: " << number(a.upper) << ", points: " << a.points << "}\n";
    };
    o << "sweep:\n";
    axis("axis1", c.sweep->axis1);
    if (c.sweep->axis2) axis("axis2", *c.sweep->axis2);
    o << "  quantities: " << string_list(c.sweep->quantities) << "\n";
  }
  if (c.temperature_sweep) {
    const auto& t = *c.temperature_sweep;
    o << "temperature_sweep:\n"
      << "  lower_mk: " << number(t.lower_mk) << "\n"
      << "  upper_mk: " << number(t.upper_mk) << "\n"
      << "  points: " << t.points << "\n"
      << "  operating_points:\n";
    for (const auto& p : t.operating_points) {
      o << "    - {quantity: " << p.quantity << ", delta_a1_mhz: " << number(p.delta_a1_mhz)
        << ", delta_m1_mhz: " << number(p.delta_m1_mhz) << "}\n";
    }
  }
  const auto& t = c.tolerances;
  o << "tolerances:\n"
    << "  stability_margin: " << number(t.stability_margin) << "\n"
    << "  pairing: " << number(t.pairing) << "\n"
    << "  residual: " << number(t.residual) << "\n"
    << "  max_condition: " << number(t.max_condition) << "\n"
    << "  lyapunov_method: " << t.lyapunov_method << "\n";
  o << "output:\n"
    << "  path: \"" << c.output.path << "\"\n"
    << "  format: " << c.output.format << "\n"
    << "  threads: " << c.output.threads << "\n";
  return o.str();
}

SystemParams to_system_params(const RunConfig& c) {
  const SystemConfig& s = c.system;
  auto convert = [](const Triple& t) { return Triple{from_mhz(t[0]), from_mhz(t[1]), from_mhz(t[2])}; };
  SystemParams p;
  p.omega_a = convert(s.omega_a_mhz);
  p.omega_m = convert(s.omega_m_mhz);
  p.g = convert(s.g_mhz);
  p.kappa = convert(s.kappa_mhz);
  p.gamma = convert(s.gamma_mhz);
  p.J12 = from_mhz(s.J12_mhz);
  p.J23 = from_mhz(s.J23_mhz);
  p.Omega = convert(s.Omega_mhz);
  for (int cav : s.opa_cavities) {
    const auto j = static_cast<std::size_t>(cav - 1);
    p.G.at(j) = from_mhz(s.G_mhz);
    if (!s.drive_with_opa) p.Omega.at(j) = 0;
  }
  p.T = s.temperature_mk * 1e-3;
  if (s.linked_detunings) {
    const Detunings d = apply_detuning_constraints(from_mhz(s.delta_a1_mhz), from_mhz(s.delta_m1_mhz));
    p.delta_a = d.delta_a;
    p.delta_m = d.delta_m;
  } else {
    p.delta_a = convert(s.delta_a_mhz);
    p.delta_m = convert(s.delta_m_mhz);
  }
  try {
    p.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return p;
}

EvaluationOptions to_evaluation_options(const RunConfig& c) {
  EvaluationOptions o;
  o.stability_margin = c.tolerances.stability_margin;
  o.pairing_tolerance = c.tolerances.pairing;
  o.lyapunov.method = c.tolerances.lyapunov_method == "kronecker" ? LyapunovMethod::kKronecker
                                                                  : LyapunovMethod::kSchur;
  o.lyapunov.tolerances.residual = c.tolerances.residual;
  o.lyapunov.tolerances.max_condition = c.tolerances.max_condition;
  for (std::size_t k = 0; k < 3; ++k) o.triple[k] = parse_mode(c.entanglement.triple[k]);
  return o;
}

SweepSpec to_sweep_spec(const RunConfig& c) {
  if (!c.sweep) throw ConfigError("configuration has no 'sweep' block");
  const SweepConfig& s = *c.sweep;
  SweepSpec spec;
  spec.base = to_system_params(c);
  spec.axis1 = {s.axis1.parameter, s.axis1.lower, s.axis1.upper, s.axis1.points};
  if (s.axis2) spec.axis2 = SweepAxis{s.axis2->parameter, s.axis2->lower, s.axis2->upper, s.axis2->points};
  spec.constraint = c.system.linked_detunings ? DetuningConstraint::kLinked : DetuningConstraint::kNone;
  spec.quantities = parse_quantities(s.quantities);
  spec.opa_cavities = c.system.opa_cavities;
  spec.options = to_evaluation_options(c);
  try {
    spec.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return spec;
}

TemperatureSweepSpec to_temperature_spec(const RunConfig& c) {
  if (!c.temperature_sweep) throw ConfigError("configuration has no 'temperature_sweep' block");
  const TemperatureConfig& t = *c.temperature_sweep;
  TemperatureSweepSpec spec;
  spec.base = to_system_params(c);
  for (const auto& op : t.operating_points) {
    spec.points.push_back({parse_quantity(op.quantity), from_mhz(op.delta_a1_mhz), from_mhz(op.delta_m1_mhz)});
  }
  spec.lower_mk = t.lower_mk;
  spec.upper_mk = t.upper_mk;
  spec.samples = t.points;
  spec.options = to_evaluation_options(c);
  return spec;
}

}  // namespace magnonet
