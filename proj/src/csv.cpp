#include "romrl/csv.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace romrl::csv {

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_matrix(const std::string& path, const Eigen::MatrixXd& m, const Header& header,
                  const std::vector<std::string>& column_names) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("csv: cannot open for writing: " + path);
    for (const auto& [key, value] : header) out << "# " << key << "=" << value << "\n";
    if (!column_names.empty()) {
        for (size_t c = 0; c < column_names.size(); ++c)
            out << (c ? "," : "") << column_names[c];
        out << "\n";
    }
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            out << (j ? "," : "") << format_double(m(i, j));
        out << "\n";
    }
    if (!out) throw std::runtime_error("csv: write failed: " + path);
}

namespace {

bool parse_row(const std::string& line, std::vector<double>& row) {
    row.clear();
    size_t pos = 0;
    while (pos <= line.size()) {
        size_t comma = line.find(',', pos);
        if (comma == std::string::npos) comma = line.size();
        const std::string cell = line.substr(pos, comma - pos);
        try {
            size_t used = 0;
            row.push_back(std::stod(cell, &used));
        } catch (const std::exception&) {
            return false;
        }
        pos = comma + 1;
        if (comma == line.size()) break;
    }
    return !row.empty();
}

}  // namespace

Eigen::MatrixXd read_matrix(const std::string& path, Header* header) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("csv: cannot open for reading: " + path);

    std::vector<std::vector<double>> rows;
    std::string line;
    bool saw_data = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            if (header) {
                const size_t start = line.find_first_not_of("# ");
                const size_t eq = line.find('=', start);
                if (start != std::string::npos && eq != std::string::npos)
                    (*header)[line.substr(start, eq - start)] = line.substr(eq + 1);
            }
            continue;
        }
        std::vector<double> row;
        if (!parse_row(line, row)) {
            if (saw_data) throw std::runtime_error("csv: malformed row in " + path);
            continue;  // column-name row
        }
        saw_data = true;
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw std::runtime_error("csv: no data rows in " + path);

    Eigen::MatrixXd m(rows.size(), rows[0].size());
    for (size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != rows[0].size())
            throw std::runtime_error("csv: ragged rows in " + path);
        for (size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
    }
    return m;
}

double header_double(const Header& h, const std::string& key) {
    const auto it = h.find(key);
    if (it == h.end()) throw std::runtime_error("csv: missing header key " + key);
    return std::stod(it->second);
}

int header_int(const Header& h, const std::string& key) {
    const auto it = h.find(key);
    if (it == h.end()) throw std::runtime_error("csv: missing header key " + key);
    return std::stoi(it->second);
}

}  // namespace romrl::csv
