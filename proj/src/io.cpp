#include "romrl/io.hpp"

#include <filesystem>
#include <stdexcept>

#include "romrl/csv.hpp"

namespace romrl {

namespace {

constexpr const char* kSnapshotFormat = "romrl-snapshots-v1";
constexpr const char* kBasisFormat = "romrl-basis-v1";

csv::Header mesh_header(const Grid& grid, const TimeMesh& times, double nu) {
    csv::Header h;
    h["nu"] = csv::format_double(nu);
    h["n_points"] = std::to_string(grid.n_points);
    h["x_min"] = csv::format_double(grid.x_min);
    h["x_max"] = csv::format_double(grid.x_max);
    h["n_snapshots"] = std::to_string(times.n_snapshots);
    h["t_min"] = csv::format_double(times.t_min);
    h["t_max"] = csv::format_double(times.t_max);
    return h;
}

void check_format(const csv::Header& h, const std::string& expected, const std::string& path) {
    const auto it = h.find("format");
    if (it == h.end() || it->second != expected)
        throw std::runtime_error("unexpected file format in " + path + " (want " + expected +
                                 ")");
}

}  // namespace

void save_snapshots(const std::string& path, const SnapshotSet& set) {
    csv::Header h = mesh_header(set.grid, set.times, set.nu);
    h["format"] = kSnapshotFormat;
    csv::write_matrix(path, set.values, h);
}

SnapshotSet load_snapshots(const std::string& path) {
    csv::Header h;
    const Eigen::MatrixXd values = csv::read_matrix(path, &h);
    check_format(h, kSnapshotFormat, path);

    SnapshotSet set;
    set.grid = Grid(csv::header_int(h, "n_points"), csv::header_double(h, "x_min"),
                    csv::header_double(h, "x_max"));
    set.times = TimeMesh(csv::header_int(h, "n_snapshots"), csv::header_double(h, "t_min"),
                         csv::header_double(h, "t_max"));
    set.nu = csv::header_double(h, "nu");
    if (values.rows() != set.grid.n_points || values.cols() != set.times.n_snapshots)
        throw std::runtime_error("snapshot matrix shape disagrees with header in " + path);
    set.values = values;
    return set;
}

void save_basis(const std::string& dir, const PodBasis& basis, const TimeMesh& times, double nu) {
    std::filesystem::create_directories(dir);

    csv::Header h = mesh_header(basis.grid, times, nu);
    h["format"] = kBasisFormat;
    h["r"] = std::to_string(basis.r_resolved);
    h["r_total"] = std::to_string(basis.r_total);
    csv::write_matrix(dir + "/basis.csv", basis.modes, h);

    const int n = static_cast<int>(basis.singular_values.size());
    Eigen::MatrixXd spectrum(n, 3);
    for (int k = 0; k < n; ++k) {
        spectrum(k, 0) = k + 1;
        spectrum(k, 1) = basis.singular_values[k];
        spectrum(k, 2) = ric(basis, k + 1);
    }
    csv::write_matrix(dir + "/spectrum.csv", spectrum, {}, {"k", "sigma", "ric"});
}

LoadedBasis load_basis(const std::string& basis_path) {
    csv::Header h;
    const Eigen::MatrixXd modes = csv::read_matrix(basis_path, &h);
    check_format(h, kBasisFormat, basis_path);

    LoadedBasis loaded;
    loaded.basis.grid = Grid(csv::header_int(h, "n_points"), csv::header_double(h, "x_min"),
                             csv::header_double(h, "x_max"));
    loaded.times = TimeMesh(csv::header_int(h, "n_snapshots"), csv::header_double(h, "t_min"),
                            csv::header_double(h, "t_max"));
    loaded.nu = csv::header_double(h, "nu");
    loaded.basis.r_resolved = csv::header_int(h, "r");
    loaded.basis.r_total = csv::header_int(h, "r_total");
    if (modes.rows() != loaded.basis.grid.n_points || modes.cols() != loaded.basis.r_total)
        throw std::runtime_error("mode matrix shape disagrees with header in " + basis_path);
    loaded.basis.modes = modes;

    const auto spectrum_path =
        std::filesystem::path(basis_path).parent_path() / "spectrum.csv";
    if (std::filesystem::exists(spectrum_path)) {
        const Eigen::MatrixXd spectrum = csv::read_matrix(spectrum_path.string());
        loaded.basis.singular_values = spectrum.col(1);
    } else {
        loaded.basis.singular_values = Eigen::VectorXd::Ones(loaded.basis.r_total);
    }
    return loaded;
}

}  // namespace romrl
