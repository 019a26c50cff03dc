#pragma once

#include "magnonet/sweep.hpp"

#include <Eigen/Dense>

#include <ostream>
#include <string>

namespace magnonet {

/// Header: axis names, "stable", quantity names. Numbers use 9 significant
/// digits; masked (NaN) values are empty cells.
void write_csv(std::ostream& out, const SweepTable& table);

/// Array of row objects keyed by the CSV column names; masked values are null.
void write_json(std::ostream& out, const SweepTable& table);

/// One line per quantity: its maximum (3 decimals) and where it occurs.
std::string summarize(const SweepTable& table);

/// Whitespace-separated rows, 12 significant digits.
void write_matrix(std::ostream& out, const Eigen::Ref<const Eigen::MatrixXd>& m);

}  // namespace magnonet
