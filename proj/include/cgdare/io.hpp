#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "cgdare/numerics.hpp"

// Problem-file schema (version "1"): top-level keys n, m, A, B, Q, R, S,
// optional C, D, X_candidates, x0, tol. Matrices are nested row-major arrays
// of numbers. Reports carry the same version field.

namespace cgdare {

struct ProblemFile {
    Eigen::Index n = 0;
    Eigen::Index m = 0;
    Matrix A, B, Q, R, S;
    std::optional<Matrix> C, D;
    std::vector<Matrix> X_candidates;
    std::optional<Vector> x0;
    TolerancePolicy tol;
};

ProblemFile load_problem(const std::string& path);
ProblemFile parse_problem(const nlohmann::json& j);

nlohmann::json matrix_to_json(const Matrix& M);
Matrix matrix_from_json(const nlohmann::json& j, const std::string& field);
nlohmann::json vector_to_json(const Vector& v);

inline constexpr const char* kSchemaVersion = "1";

}  // namespace cgdare
