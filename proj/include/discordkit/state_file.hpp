#pragma once

// JSON state files: {"matrix": [[[re, im], ...4], ...4]} in the basis order
// |00>, |01>, |10>, |11>.

#include <string>

#include "discordkit/qcore.hpp"

namespace discordkit {

/// Throws FileNotFound, SchemaError, or the qcore validation errors.
TwoQubitState parse_state_file(const std::string& path);
TwoQubitState parse_state_json(const std::string& text);
/// Raw matrix without validation. Throws SchemaError.
Matrix4 parse_matrix_json(const std::string& text);

std::string state_to_json(const Matrix4& matrix);

}  // namespace discordkit
