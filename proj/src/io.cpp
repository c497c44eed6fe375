#include "cgdare/io.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

namespace cgdare {

using nlohmann::json;

json matrix_to_json(const Matrix& M) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < M.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < M.cols(); ++j) row.push_back(M(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

json vector_to_json(const Vector& v) {
    json arr = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
    return arr;
}

Matrix matrix_from_json(const json& j, const std::string& field) {
    if (!j.is_array() || j.empty() || !j[0].is_array()) {
        throw ParseError("field '" + field + "': expected a nested array of rows");
    }
    const Eigen::Index rows = static_cast<Eigen::Index>(j.size());
    const Eigen::Index cols = static_cast<Eigen::Index>(j[0].size());
    Matrix M(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        if (!j[i].is_array() || static_cast<Eigen::Index>(j[i].size()) != cols) {
            throw ParseError("field '" + field + "': ragged rows at row " + std::to_string(i));
        }
        for (Eigen::Index c = 0; c < cols; ++c) {
            if (!j[i][c].is_number()) {
                throw ParseError("field '" + field + "': non-numeric entry at (" +
                                 std::to_string(i) + "," + std::to_string(c) + ")");
            }
            M(i, c) = j[i][c].get<double>();
        }
    }
    return M;
}

namespace {

Matrix required_matrix(const json& j, const char* field, Eigen::Index rows, Eigen::Index cols) {
    if (!j.contains(field)) throw ParseError(std::string("missing required field '") + field + "'");
    Matrix M = matrix_from_json(j.at(field), field);
    if (M.rows() != rows || M.cols() != cols) {
        throw ParseError(std::string("field '") + field + "': expected " + std::to_string(rows) +
                         "x" + std::to_string(cols) + ", got " + std::to_string(M.rows()) + "x" +
                         std::to_string(M.cols()));
    }
    return M;
}

}  // namespace

ProblemFile parse_problem(const json& j) {
    ProblemFile p;
    if (!j.contains("n") || !j.contains("m") || !j["n"].is_number_integer() ||
        !j["m"].is_number_integer()) {
        throw ParseError("problem file must declare integer fields 'n' and 'm'");
    }
    p.n = j["n"].get<Eigen::Index>();
    p.m = j["m"].get<Eigen::Index>();
    if (p.n < 1 || p.m < 1) throw ParseError("'n' and 'm' must be positive");

    p.A = required_matrix(j, "A", p.n, p.n);
    p.B = required_matrix(j, "B", p.n, p.m);
    p.Q = required_matrix(j, "Q", p.n, p.n);
    p.R = required_matrix(j, "R", p.m, p.m);
    p.S = required_matrix(j, "S", p.n, p.m);

    if (j.contains("C") != j.contains("D")) {
        throw ParseError("'C' and 'D' must be supplied together");
    }
    if (j.contains("C")) {
        Matrix C = matrix_from_json(j.at("C"), "C");
        Matrix D = matrix_from_json(j.at("D"), "D");
        if (C.cols() != p.n || D.cols() != p.m || C.rows() != D.rows()) {
            throw ParseError("'C'/'D' dimensions inconsistent with n, m");
        }
        p.C = std::move(C);
        p.D = std::move(D);
    }

    if (j.contains("X_candidates")) {
        if (!j["X_candidates"].is_array()) throw ParseError("'X_candidates' must be an array");
        for (size_t i = 0; i < j["X_candidates"].size(); ++i) {
            Matrix X = matrix_from_json(j["X_candidates"][i],
                                        "X_candidates[" + std::to_string(i) + "]");
            if (X.rows() != p.n || X.cols() != p.n) {
                throw ParseError("candidate " + std::to_string(i) + " is not n x n");
            }
            p.X_candidates.push_back(std::move(X));
        }
    }

    if (j.contains("x0")) {
        const auto& arr = j.at("x0");
        if (!arr.is_array() || static_cast<Eigen::Index>(arr.size()) != p.n) {
            throw ParseError("'x0' must be an array of n numbers");
        }
        Vector x0(p.n);
        for (Eigen::Index i = 0; i < p.n; ++i) x0(i) = arr[i].get<double>();
        p.x0 = x0;
    }

    if (j.contains("tol")) {
        const auto& t = j.at("tol");
        if (t.contains("rank_rel")) p.tol.rank_rel = t["rank_rel"].get<double>();
        if (t.contains("conv_rel")) p.tol.conv_rel = t["conv_rel"].get<double>();
        if (t.contains("psd_clip")) p.tol.psd_clip = t["psd_clip"].get<double>();
        if (t.contains("max_iter")) p.tol.max_iter = t["max_iter"].get<int>();
        try {
            p.tol.validate();
        } catch (const std::invalid_argument& e) {
            throw ParseError(std::string("field 'tol': ") + e.what());
        }
    }

    return p;
}

ProblemFile load_problem(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open problem file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("JSON parse error: ") + e.what());
    }
    return parse_problem(j);
}

}  // namespace cgdare
