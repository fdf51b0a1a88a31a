/// @file io.hpp
/// On-disk formats for snapshot databases and POD bases: CSV matrices with a
/// structured text header.

#pragma once

#include <string>

#include "romrl/burgers.hpp"
#include "romrl/pod.hpp"

namespace romrl {

void save_snapshots(const std::string& path, const SnapshotSet& set);
SnapshotSet load_snapshots(const std::string& path);

/// Writes <dir>/basis.csv (modes with grid/mesh header) and <dir>/spectrum.csv
/// (k, singular value, RIC).
void save_basis(const std::string& dir, const PodBasis& basis, const TimeMesh& times, double nu);

struct LoadedBasis {
    PodBasis basis;
    TimeMesh times;
    double nu = 0.0;  // training viscosity of the snapshot data
};

/// Reads a basis.csv written by save_basis; the sibling spectrum.csv supplies
/// the singular values when present.
LoadedBasis load_basis(const std::string& basis_path);

}  // namespace romrl
