#include "magnonet/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <optional>
#include <thread>

namespace magnonet {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool parse_index(const std::string& path, const std::string& prefix, int& index) {
  if (path.size() != prefix.size() + 1 || path.compare(0, prefix.size(), prefix) != 0) return false;
  const char c = path.back();
  if (c < '1' || c > '3') return false;
  index = c - '1';
  return true;
}

// Per-cavity/per-magnon fields addressable as <prefix><1..3>.
Triple* indexed_field(SystemParams& p, const std::string& path, int& index) {
  struct Entry {
    const char* prefix;
    Triple SystemParams::*field;
  };
  static const Entry kFields[] = {
      {"delta_a", &SystemParams::delta_a}, {"delta_m", &SystemParams::delta_m},
      {"g", &SystemParams::g},             {"kappa", &SystemParams::kappa},
      {"gamma", &SystemParams::gamma},     {"G", &SystemParams::G},
      {"Omega", &SystemParams::Omega},
  };
  for (const Entry& e : kFields) {
    if (parse_index(path, e.prefix, index)) return &(p.*(e.field));
  }
  return nullptr;
}

}  // namespace

std::string Quantity::name() const {
  switch (kind) {
    case QuantityKind::kOccupation:
      return "N_" + first.label();
    case QuantityKind::kLogNegativity:
      return "E_" + first.label() + second.label();
    case QuantityKind::kResidualContangle:
      return "R_min";
    case QuantityKind::kAbscissa:
      return "abscissa";
  }
  return "?";
}

Quantity parse_quantity(const std::string& name) {
  if (name == "R_min") return {QuantityKind::kResidualContangle};
  if (name == "abscissa") return {QuantityKind::kAbscissa};
  try {
    if (name.size() == 4 && name.compare(0, 2, "N_") == 0) {
      return {QuantityKind::kOccupation, parse_mode(name.substr(2))};
    }
    if (name.size() == 6 && name.compare(0, 2, "E_") == 0) {
      const ModeIndex first = parse_mode(name.substr(2, 2));
      const ModeIndex second = parse_mode(name.substr(4, 2));
      if (!(first == second)) return {QuantityKind::kLogNegativity, first, second};
    }
  } catch (const std::invalid_argument&) {
  }
  throw std::invalid_argument("unknown quantity '" + name +
                              "' (expected N_<mode>, E_<mode><mode>, R_min or abscissa)");
}

std::vector<Quantity> parse_quantities(std::span<const std::string> names) {
  std::vector<Quantity> out;
  out.reserve(names.size());
  for (const auto& n : names) out.push_back(parse_quantity(n));
  return out;
}

double EntanglementReport::value(const Quantity& q) const {
  const auto it = std::find(quantities.begin(), quantities.end(), q);
  if (it == quantities.end()) {
    throw std::invalid_argument("quantity " + q.name() + " was not evaluated");
  }
  return values[static_cast<std::size_t>(it - quantities.begin())];
}

EntanglementReport evaluate_point(const SystemParams& p, std::span<const Quantity> quantities,
                                  const EvaluationOptions& options) {
  EntanglementReport report;
  report.quantities.assign(quantities.begin(), quantities.end());
  report.values.assign(quantities.size(), kNaN);

  const LinearModel model = build_model(p);
  report.stability = check_stability(model.A, options.stability_margin);
  if (!report.stability.stable) return report;

  std::optional<MeanField> means;
  std::optional<CovarianceMatrix> cov;
  std::optional<double> r_min;
  auto covariance = [&]() -> const CovarianceMatrix& {
    if (!cov) cov = steady_covariance(model, options.lyapunov);
    return *cov;
  };

  for (std::size_t i = 0; i < quantities.size(); ++i) {
    const Quantity& q = quantities[i];
    switch (q.kind) {
      case QuantityKind::kOccupation: {
        if (!means) means = steady_means(model, options.stability_margin, options.lyapunov.tolerances);
        const Triple& n = q.first.kind == ModeKind::kCavity ? means->N_a : means->N_m;
        report.values[i] = n[q.first.index - 1];
        break;
      }
      case QuantityKind::kLogNegativity:
        report.values[i] = log_negativity(covariance(), q.first, q.second, options.pairing_tolerance);
        break;
      case QuantityKind::kResidualContangle:
        if (!r_min) {
          const auto triple = extract_submatrix(covariance(), options.triple);
          r_min = residual_contangle(triple, options.pairing_tolerance).minimum;
        }
        report.values[i] = *r_min;
        break;
      case QuantityKind::kAbscissa:
        report.values[i] = report.stability.spectral_abscissa;
        break;
    }
  }
  return report;
}

bool is_parameter_path(const std::string& path) {
  if (path == "J12" || path == "J23" || path == "G" || path == "T") return true;
  SystemParams scratch;
  int index = 0;
  return indexed_field(scratch, path, index) != nullptr;
}

void set_parameter(SystemParams& p, const std::string& path, double value,
                   std::span<const int> opa_cavities) {
  if (path == "T") {
    p.T = value * 1e-3;
  } else if (path == "J12") {
    p.J12 = from_mhz(value);
  } else if (path == "J23") {
    p.J23 = from_mhz(value);
  } else if (path == "G") {
    for (int cav : opa_cavities) p.G.at(static_cast<std::size_t>(cav - 1)) = from_mhz(value);
  } else {
    int index = 0;
    Triple* field = indexed_field(p, path, index);
    if (field == nullptr) throw std::invalid_argument("unknown parameter path '" + path + "'");
    (*field)[index] = from_mhz(value);
  }
}

double SweepAxis::value(int i) const {
  if (i == points - 1) return upper;
  return lower + (upper - lower) * i / (points - 1);
}

void SweepSpec::validate() const {
  base.validate();
  auto check_axis = [this](const SweepAxis& axis, const char* name) {
    if (!is_parameter_path(axis.parameter)) {
      throw std::invalid_argument(std::string(name) + ": unknown parameter path '" + axis.parameter + "'");
    }
    if (axis.points < 2) throw std::invalid_argument(std::string(name) + ": points must be >= 2");
    if (!(axis.lower < axis.upper)) throw std::invalid_argument(std::string(name) + ": lower must be < upper");
    if (constraint == DetuningConstraint::kLinked) {
      for (const char* linked : {"delta_a2", "delta_a3", "delta_m2", "delta_m3"}) {
        if (axis.parameter == linked) {
          throw std::invalid_argument(std::string(name) + ": " + linked +
                                      " is fixed by the linked-detuning constraint");
        }
      }
    }
  };
  check_axis(axis1, "axis1");
  if (axis2) check_axis(*axis2, "axis2");
  if (quantities.empty()) throw std::invalid_argument("sweep needs at least one quantity");
  for (int cav : opa_cavities) {
    if (cav < 1 || cav > 3) throw std::invalid_argument("opa cavity index must be 1..3");
  }
}

std::size_t SweepSpec::row_count() const {
  return static_cast<std::size_t>(axis1.points) * (axis2 ? static_cast<std::size_t>(axis2->points) : 1);
}

std::size_t SweepTable::column_of(const Quantity& q) const {
  const auto it = std::find(quantities.begin(), quantities.end(), q);
  if (it == quantities.end()) throw std::invalid_argument("table has no column " + q.name());
  return static_cast<std::size_t>(it - quantities.begin());
}

SystemParams point_params(const SweepSpec& spec, std::size_t row) {
  const std::size_t inner = spec.axis2 ? static_cast<std::size_t>(spec.axis2->points) : 1;
  SystemParams p = spec.base;
  set_parameter(p, spec.axis1.parameter, spec.axis1.value(static_cast<int>(row / inner)), spec.opa_cavities);
  if (spec.axis2) {
    set_parameter(p, spec.axis2->parameter, spec.axis2->value(static_cast<int>(row % inner)), spec.opa_cavities);
  }
  if (spec.constraint == DetuningConstraint::kLinked) {
    const Detunings d = apply_detuning_constraints(p.delta_a[0], p.delta_m[0]);
    p.delta_a = d.delta_a;
    p.delta_m = d.delta_m;
  }
  return p;
}

void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(n, 1)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = n;
      }
    }
  };
  std::vector<std::jthread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

SweepTable run_sweep(const SweepSpec& spec, unsigned threads) {
  spec.validate();
  SweepTable table;
  table.axis_names.push_back(spec.axis1.parameter);
  if (spec.axis2) table.axis_names.push_back(spec.axis2->parameter);
  table.quantities = spec.quantities;
  table.rows.resize(spec.row_count());

  const std::size_t inner = spec.axis2 ? static_cast<std::size_t>(spec.axis2->points) : 1;
  parallel_for(table.rows.size(), threads, [&](std::size_t i) {
    EntanglementReport report = evaluate_point(point_params(spec, i), spec.quantities, spec.options);
    SweepRow& row = table.rows[i];
    row.axis1 = spec.axis1.value(static_cast<int>(i / inner));
    row.axis2 = spec.axis2 ? spec.axis2->value(static_cast<int>(i % inner)) : kNaN;
    row.stability = report.stability;
    row.values = std::move(report.values);
  });
  return table;
}

MaxLocation find_max(const SweepTable& table, const Quantity& q) {
  const std::size_t col = table.column_of(q);
  std::optional<MaxLocation> best;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const SweepRow& row = table.rows[i];
    const double v = row.values[col];
    if (std::isnan(v)) continue;
    if (!best || v > best->value) best = MaxLocation{i, row.axis1, row.axis2, v};
  }
  if (!best) throw AllUnstableError("find_max: no stable row carries " + q.name());
  return *best;
}

SweepTable temperature_sweep(const TemperatureSweepSpec& spec, unsigned threads) {
  spec.base.validate();
  if (spec.samples < 2 || !(spec.lower_mk > 0) || !(spec.lower_mk < spec.upper_mk)) {
    throw std::invalid_argument("temperature_sweep: need 0 < lower < upper and samples >= 2");
  }
  const SweepAxis axis{"T", spec.lower_mk, spec.upper_mk, spec.samples};

  SweepTable table;
  table.axis_names = {"T"};
  for (const auto& pt : spec.points) table.quantities.push_back(pt.quantity);
  table.rows.resize(static_cast<std::size_t>(spec.samples));

  parallel_for(table.rows.size(), threads, [&](std::size_t i) {
    SweepRow& row = table.rows[i];
    row.axis1 = axis.value(static_cast<int>(i));
    row.axis2 = kNaN;
    row.stability = {-std::numeric_limits<double>::infinity(), true, spec.options.stability_margin};
    row.values.assign(spec.points.size(), kNaN);
    for (std::size_t k = 0; k < spec.points.size(); ++k) {
      const TemperaturePoint& pt = spec.points[k];
      SystemParams p = spec.base;
      p.T = row.axis1 * 1e-3;
      const Detunings d = apply_detuning_constraints(pt.delta_a1, pt.delta_m1);
      p.delta_a = d.delta_a;
      p.delta_m = d.delta_m;
      const Quantity only[] = {pt.quantity};
      const EntanglementReport report = evaluate_point(p, only, spec.options);
      row.values[k] = report.values[0];
      row.stability.spectral_abscissa =
          std::max(row.stability.spectral_abscissa, report.stability.spectral_abscissa);
      row.stability.stable = row.stability.stable && report.stability.stable;
    }
  });
  return table;
}

}  // namespace magnonet
