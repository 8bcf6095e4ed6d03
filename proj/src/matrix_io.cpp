#include "landscape/matrix_io.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

namespace landscape {

using nlohmann::json;

Matrix matrix_from_json(const json& j) {
    if (!j.is_object() || !j.contains("rows") || !j.contains("cols") || !j.contains("data"))
        throw InvalidInput("matrix JSON must be an object with rows, cols, data");
    const Index rows = j.at("rows").get<Index>();
    const Index cols = j.at("cols").get<Index>();
    if (rows < 0 || cols < 0) throw InvalidInput("matrix JSON: negative dimension");
    const auto& data = j.at("data");
    if (!data.is_array() || static_cast<Index>(data.size()) != rows * cols)
        throw InvalidInput("matrix JSON: data length does not equal rows*cols");
    Matrix m(rows, cols);
    Index k = 0;
    for (Index i = 0; i < rows; ++i)
        for (Index c = 0; c < cols; ++c) m(i, c) = data.at(k++).get<double>();
    if (!all_finite(m)) throw InvalidInput("matrix JSON: non-finite entry");
    return m;
}

nlohmann::ordered_json matrix_to_json(const Matrix& m) {
    nlohmann::ordered_json j;
    j["rows"] = m.rows();
    j["cols"] = m.cols();
    nlohmann::ordered_json data = nlohmann::ordered_json::array();
    for (Index i = 0; i < m.rows(); ++i)
        for (Index c = 0; c < m.cols(); ++c) data.push_back(m(i, c));
    j["data"] = std::move(data);
    return j;
}

Matrix matrix_from_csv(std::istream& in, const std::string& name) {
    std::vector<std::vector<double>> rows;
    std::string line;
    Index lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        // Strip trailing CR from CRLF files.
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            try {
                std::size_t used = 0;
                double v = std::stod(cell, &used);
                while (used < cell.size() && std::isspace(static_cast<unsigned char>(cell[used]))) ++used;
                if (used != cell.size()) throw std::invalid_argument(cell);
                row.push_back(v);
            } catch (const std::exception&) {
                throw InvalidInput(name + ":" + std::to_string(lineno) +
                                   ": cannot parse '" + cell + "' as a real number");
            }
        }
        if (!rows.empty() && row.size() != rows.front().size())
            throw InvalidInput(name + ":" + std::to_string(lineno) + ": ragged row (" +
                               std::to_string(row.size()) + " cells, expected " +
                               std::to_string(rows.front().size()) + ")");
        rows.push_back(std::move(row));
    }
    const Index r = static_cast<Index>(rows.size());
    const Index c = r > 0 ? static_cast<Index>(rows.front().size()) : 0;
    Matrix m(r, c);
    for (Index i = 0; i < r; ++i)
        for (Index j = 0; j < c; ++j) m(i, j) = rows[i][j];
    if (!all_finite(m)) throw InvalidInput(name + ": non-finite entry");
    return m;
}

void matrix_to_csv(std::ostream& out, const Matrix& m) {
    out.precision(17);
    for (Index i = 0; i < m.rows(); ++i) {
        for (Index j = 0; j < m.cols(); ++j) {
            if (j) out << ',';
            out << m(i, j);
        }
        out << '\n';
    }
}

Matrix load_matrix(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open matrix file: " + path);
    if (std::filesystem::path(path).extension() == ".csv")
        return matrix_from_csv(in, path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw InvalidInput(path + ": " + e.what());
    }
    return matrix_from_json(j);
}

Matrix matrix_field(const json& j, const std::string& field, const std::string& base_dir) {
    if (!j.contains(field)) throw InvalidInput("manifest: missing field '" + field + "'");
    const auto& v = j.at(field);
    if (v.is_string()) {
        std::filesystem::path p(v.get<std::string>());
        if (p.is_relative() && !base_dir.empty()) p = std::filesystem::path(base_dir) / p;
        return load_matrix(p.string());
    }
    return matrix_from_json(v);
}

} // namespace landscape
