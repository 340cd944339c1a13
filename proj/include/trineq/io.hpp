#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"

#include "trineq/matrix.hpp"

namespace trineq::io {

/// Matrix interchange format: {"dim": n, "re": [[..]], "im": [[..]]},
/// row-major. Serialization round-trips doubles exactly.
nlohmann::json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const nlohmann::json& j);

/// Load + validate Hermiticity (worst entry named on failure).
HermitianMatrix hermitian_from_json(const nlohmann::json& j);
HermitianMatrix load_matrix(const std::filesystem::path& path);

void save_matrix(const Matrix& m, const std::filesystem::path& path);

void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

/// ISO-8601 UTC wall-clock; excluded from determinism comparisons.
std::string timestamp_utc();

}  // namespace trineq::io
