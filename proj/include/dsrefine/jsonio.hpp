#pragma once

#include <json.hpp>

#include <string>

#include "dsrefine/systems.hpp"

// Shared JSON (de)serialization helpers for the file formats. Matrices are
// arrays of row arrays of decimal numbers; a matrix with zero columns is an
// array of empty rows.

namespace dsrefine::jsonio {

using json = nlohmann::ordered_json;

json load_file(const std::string& path);
void write_file(const json& j, const std::string& path);

json matrix_to_json(const Matrix& m);

/// Parse a matrix field; `path` and `field` feed error messages. With
/// expected_cols >= 0 an empty array is read as a 0 x expected_cols matrix.
Matrix matrix_from_json(const json& j, const std::string& path, const std::string& field,
                        int expected_cols = -1);

/// Fetch j[field] or throw ParseError naming the missing field.
const json& require_field(const json& j, const std::string& path, const std::string& field);

json init_to_json(const InitialSet& s);
InitialSet init_from_json(const json& j, int dim, const std::string& path);

}  // namespace dsrefine::jsonio
