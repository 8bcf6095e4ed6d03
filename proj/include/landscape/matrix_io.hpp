#ifndef LANDSCAPE_MATRIX_IO_HPP
#define LANDSCAPE_MATRIX_IO_HPP

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "landscape/spectral.hpp"

namespace landscape {

/// Parses the JSON matrix form {"rows": n, "cols": m, "data": [row-major]}.
Matrix matrix_from_json(const nlohmann::json& j);

nlohmann::ordered_json matrix_to_json(const Matrix& m);

/// CSV, one row per line, comma-separated decimal reals.
Matrix matrix_from_csv(std::istream& in, const std::string& name = "<csv>");

void matrix_to_csv(std::ostream& out, const Matrix& m);

/// Loads a matrix from a file; .csv parses as CSV, anything else as JSON.
Matrix load_matrix(const std::string& path);

/// Resolves a manifest field that may hold either an inline JSON matrix
/// object or a path string (relative paths resolve against base_dir).
Matrix matrix_field(const nlohmann::json& j, const std::string& field,
                    const std::string& base_dir);

} // namespace landscape

#endif
