/// @file csv.hpp
/// CSV matrix files with '#'-prefixed key=value header lines. Doubles are
/// written with round-trip precision.

#pragma once

#include <Eigen/Dense>
#include <map>
#include <string>
#include <vector>

namespace romrl::csv {

using Header = std::map<std::string, std::string>;

std::string format_double(double v);

/// Write header lines ("# key=value"), an optional column-name row, then
/// one comma-separated row per matrix row.
void write_matrix(const std::string& path, const Eigen::MatrixXd& m, const Header& header = {},
                  const std::vector<std::string>& column_names = {});

/// Read a file written by write_matrix. Header entries land in `header`
/// when non-null; a column-name row is detected and skipped.
Eigen::MatrixXd read_matrix(const std::string& path, Header* header = nullptr);

double header_double(const Header& h, const std::string& key);
int header_int(const Header& h, const std::string& key);

}  // namespace romrl::csv
