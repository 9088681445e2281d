#include "discordkit/state_file.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace discordkit {

Matrix4 parse_matrix_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::SchemaError, std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("matrix"))
    throw Error(ErrorCode::SchemaError, "expected an object with key \"matrix\"");
  const auto& rows = doc["matrix"];
  if (!rows.is_array() || rows.size() != 4)
    throw Error(ErrorCode::SchemaError, "\"matrix\" must be a 4x4 array of [re, im] pairs");
  Matrix4 m;
  for (std::size_t i = 0; i < 4; ++i) {
    const auto& row = rows[i];
    if (!row.is_array() || row.size() != 4)
      throw Error(ErrorCode::SchemaError, "row " + std::to_string(i) + " must have 4 entries");
    for (std::size_t j = 0; j < 4; ++j) {
      const auto& z = row[j];
      if (!z.is_array() || z.size() != 2 || !z[0].is_number() || !z[1].is_number())
        throw Error(ErrorCode::SchemaError,
                    "entry (" + std::to_string(i) + ", " + std::to_string(j) + ") must be [re, im]");
      m(i, j) = Complex(z[0].get<double>(), z[1].get<double>());
    }
  }
  return m;
}

TwoQubitState parse_state_json(const std::string& text) { return TwoQubitState::validate(parse_matrix_json(text)); }

TwoQubitState parse_state_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::FileNotFound, path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_state_json(buf.str());
}

std::string state_to_json(const Matrix4& matrix) {
  nlohmann::json rows = nlohmann::json::array();
  for (int i = 0; i < 4; ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int j = 0; j < 4; ++j) row.push_back({matrix(i, j).real(), matrix(i, j).imag()});
    rows.push_back(row);
  }
  return nlohmann::json{{"matrix", rows}}.dump();
}

}  // namespace discordkit
