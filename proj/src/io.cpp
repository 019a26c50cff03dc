#include "magnonet/io.hpp"

#include "json.hpp"

#include <cmath>
#include <cstdio>

namespace magnonet {

namespace {

std::string format_g(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", digits, v);
  return buf;
}

std::string format_fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
  return buf;
}

}  // namespace

void write_csv(std::ostream& out, const SweepTable& table) {
  for (const auto& name : table.axis_names) out << name << ',';
  out << "stable";
  for (const auto& q : table.quantities) out << ',' << q.name();
  out << '\n';
  for (const SweepRow& row : table.rows) {
    for (std::size_t a = 0; a < table.axis_names.size(); ++a) {
      out << format_g(a == 0 ? row.axis1 : row.axis2, 9) << ',';
    }
    out << (row.stability.stable ? 1 : 0);
    for (double v : row.values) {
      out << ',';
      if (!std::isnan(v)) out << format_g(v, 9);
    }
    out << '\n';
  }
}

void write_json(std::ostream& out, const SweepTable& table) {
  nlohmann::json rows = nlohmann::json::array();
  for (const SweepRow& row : table.rows) {
    nlohmann::json obj;
    for (std::size_t a = 0; a < table.axis_names.size(); ++a) {
      obj[table.axis_names[a]] = a == 0 ? row.axis1 : row.axis2;
    }
    obj["stable"] = row.stability.stable;
    for (std::size_t k = 0; k < table.quantities.size(); ++k) {
      const double v = row.values[k];
      obj[table.quantities[k].name()] = std::isnan(v) ? nlohmann::json(nullptr) : nlohmann::json(v);
    }
    rows.push_back(std::move(obj));
  }
  out << rows.dump(1) << '\n';
}

std::string summarize(const SweepTable& table) {
  std::string out;
  std::size_t stable = 0;
  for (const auto& row : table.rows) stable += row.stability.stable ? 1 : 0;
  out += "stable points: " + std::to_string(stable) + "/" + std::to_string(table.rows.size()) + "\n";
  for (const auto& q : table.quantities) {
    out += "max " + q.name() + " = ";
    try {
      const MaxLocation m = find_max(table, q);
      out += format_fixed(m.value, 3);
      if (!table.axis_names.empty()) out += " at " + table.axis_names[0] + "=" + format_g(m.axis1, 6);
      if (table.axis_names.size() > 1) out += ", " + table.axis_names[1] + "=" + format_g(m.axis2, 6);
    } catch (const AllUnstableError&) {
      out += "n/a (no stable point)";
    }
    out += "\n";
  }
  return out;
}

void write_matrix(std::ostream& out, const Eigen::Ref<const Eigen::MatrixXd>& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      out << (j ? " " : "") << format_g(m(i, j), 12);
    }
    out << '\n';
  }
}

}  // namespace magnonet
