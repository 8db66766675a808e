#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "douglas.hpp"
#include "frames.hpp"
#include "lab.hpp"
#include "theorems.hpp"

namespace opframe::io {

using nlohmann::json;

inline constexpr int kInstanceVersion = 1;

// ---- writers ---------------------------------------------------------------

inline json complex_to_json(Complex z) { return json::array({z.real(), z.imag()}); }

/// Nested arrays of [re, im] pairs, row-major.
inline json matrix_to_json(const Matrix& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(complex_to_json(m(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline json operator_to_json(const ModuleOperator& t) {
    return json{{"n", t.n()}, {"d", t.d()}, {"rep", matrix_to_json(t.rep())}};
}

inline json vector_to_json(const ModuleVector& x) {
    json blocks = json::array();
    for (std::size_t k = 0; k < x.d(); ++k) blocks.push_back(matrix_to_json(x.block(k)));
    return json{{"n", x.n()}, {"d", x.d()}, {"blocks", std::move(blocks)}};
}

inline json instance_to_json(const ControlledSystem& sys,
                             const std::vector<ModuleVector>* vectors = nullptr) {
    json family = json::array();
    for (const auto& t : sys.family.members) family.push_back(operator_to_json(t));
    json out{{"version", kInstanceVersion},
             {"n", sys.n()},
             {"d", sys.d()},
             {"family", std::move(family)},
             {"C", operator_to_json(sys.C.op)},
             {"Cprime", operator_to_json(sys.Cp.op)},
             {"K", operator_to_json(sys.K)}};
    if (vectors != nullptr) {
        json vs = json::array();
        for (const auto& x : *vectors) vs.push_back(vector_to_json(x));
        out["vectors"] = std::move(vs);
    }
    return out;
}

inline json report_to_json(const douglas::DouglasReport& report) {
    json out;
    out["majorization_lambda"] =
        report.majorization_lambda ? json(*report.majorization_lambda) : json(nullptr);
    out["mu"] = report.mu ? json(*report.mu) : json(nullptr);
    out["has_solution"] = report.solution.has_value();
    out["solution_residual"] = report.solution_residual;
    if (report.solution) out["solution_norm"] = operator_norm(report.solution->rep());
    out["range_included"] = report.range_included;
    out["consistent"] = report.consistent;
    return out;
}

inline json verdict_to_json(const theorems::TheoremVerdict& v) {
    return json{{"theorem_id", theorems::theorem_name(v.id)},
                {"hypothesis_ok", v.hypothesis_ok},
                {"conclusion_ok", v.conclusion_ok},
                {"witnesses", v.witnesses},
                {"defects", v.defects}};
}

inline json summary_to_json(const lab::SuiteSummary& summary) {
    json runs = json::array();
    for (const auto& run : summary.runs) {
        runs.push_back(json{{"theorem", theorems::theorem_name(run.id)},
                            {"trials", run.trials},
                            {"passes", run.passes},
                            {"failures", run.failures},
                            {"inconclusive", run.inconclusive},
                            {"errors", run.errors},
                            {"max_defect", run.max_defect},
                            {"failing_seeds", run.failing_seeds}});
    }
    return json{{"seed", summary.seed},
                {"trials", summary.trials},
                {"tol", summary.tol},
                {"runs", std::move(runs)},
                {"all_ok", summary.all_ok}};
}

// ---- readers ---------------------------------------------------------------
// Every field is validated; errors carry the JSON path of the offender.

namespace detail {

inline const json& expect_field(const json& j, const char* key, const std::string& path) {
    if (!j.is_object()) throw ParseError(path + ": expected an object");
    const auto it = j.find(key);
    if (it == j.end()) throw ParseError(path + "/" + key + ": missing field");
    return *it;
}

inline std::size_t expect_positive_size(const json& j, const std::string& path) {
    if (!j.is_number_unsigned() || j.get<std::uint64_t>() == 0) {
        throw ParseError(path + ": expected a positive integer");
    }
    return j.get<std::size_t>();
}

inline double expect_number(const json& j, const std::string& path) {
    if (!j.is_number()) throw ParseError(path + ": expected a number");
    return j.get<double>();
}

}  // namespace detail

inline Complex complex_from_json(const json& j, const std::string& path) {
    if (!j.is_array() || j.size() != 2) throw ParseError(path + ": expected a [re, im] pair");
    return {detail::expect_number(j[0], path + "/0"), detail::expect_number(j[1], path + "/1")};
}

inline Matrix matrix_from_json(const json& j, std::size_t rows, std::size_t cols,
                               const std::string& path) {
    if (!j.is_array() || j.size() != rows) {
        throw ParseError(path + ": expected " + std::to_string(rows) + " rows");
    }
    Matrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        const json& row = j[i];
        const std::string row_path = path + "/" + std::to_string(i);
        if (!row.is_array() || row.size() != cols) {
            throw ParseError(row_path + ": expected " + std::to_string(cols) + " entries");
        }
        for (std::size_t k = 0; k < cols; ++k) {
            m(i, k) = complex_from_json(row[k], row_path + "/" + std::to_string(k));
        }
    }
    return m;
}

inline ModuleOperator operator_from_json(const json& j, std::size_t n, std::size_t d,
                                         const std::string& path) {
    const std::size_t jn = detail::expect_positive_size(detail::expect_field(j, "n", path),
                                                        path + "/n");
    const std::size_t jd = detail::expect_positive_size(detail::expect_field(j, "d", path),
                                                        path + "/d");
    if (jn != n || jd != d) {
        throw ParseError(path + ": operator dimensions (" + std::to_string(jn) + ", " +
                         std::to_string(jd) + ") do not match instance (" + std::to_string(n) +
                         ", " + std::to_string(d) + ")");
    }
    return ModuleOperator(
        n, d, matrix_from_json(detail::expect_field(j, "rep", path), n * d, n * d, path + "/rep"));
}

inline ModuleOperator operator_from_json(const json& j, const std::string& path) {
    const std::size_t n = detail::expect_positive_size(detail::expect_field(j, "n", path),
                                                       path + "/n");
    const std::size_t d = detail::expect_positive_size(detail::expect_field(j, "d", path),
                                                       path + "/d");
    return operator_from_json(j, n, d, path);
}

inline ModuleVector vector_from_json(const json& j, std::size_t n, std::size_t d,
                                     const std::string& path) {
    const std::size_t jn = detail::expect_positive_size(detail::expect_field(j, "n", path),
                                                        path + "/n");
    const std::size_t jd = detail::expect_positive_size(detail::expect_field(j, "d", path),
                                                        path + "/d");
    if (jn != n || jd != d) {
        throw ParseError(path + ": vector dimensions do not match instance");
    }
    const json& blocks = detail::expect_field(j, "blocks", path);
    if (!blocks.is_array() || blocks.size() != d) {
        throw ParseError(path + "/blocks: expected " + std::to_string(d) + " blocks");
    }
    ModuleVector x(n, d);
    for (std::size_t k = 0; k < d; ++k) {
        x.set_block(k, matrix_from_json(blocks[k], n, n,
                                        path + "/blocks/" + std::to_string(k)));
    }
    return x;
}

struct InstanceFile {
    ControlledSystem system;
    std::optional<std::vector<ModuleVector>> vectors;
};

inline InstanceFile instance_from_json(const json& j) {
    const std::string root;
    const json& version = detail::expect_field(j, "version", root);
    if (!version.is_number_integer() || version.get<int>() != kInstanceVersion) {
        throw ParseError("/version: unsupported instance version");
    }
    const std::size_t n = detail::expect_positive_size(detail::expect_field(j, "n", root), "/n");
    const std::size_t d = detail::expect_positive_size(detail::expect_field(j, "d", root), "/d");

    const json& family_json = detail::expect_field(j, "family", root);
    if (!family_json.is_array() || family_json.empty()) {
        throw ParseError("/family: expected a nonempty array of operators");
    }
    OperatorFamily family;
    for (std::size_t i = 0; i < family_json.size(); ++i) {
        family.members.push_back(
            operator_from_json(family_json[i], n, d, "/family/" + std::to_string(i)));
    }

    // Controllers are certified positive invertible on parse.
    const GLPlusOperator c =
        make_glplus(operator_from_json(detail::expect_field(j, "C", root), n, d, "/C"));
    const GLPlusOperator cp =
        make_glplus(operator_from_json(detail::expect_field(j, "Cprime", root), n, d, "/Cprime"));
    ModuleOperator k = operator_from_json(detail::expect_field(j, "K", root), n, d, "/K");

    InstanceFile out{ControlledSystem{std::move(family), c, cp, std::move(k)}, std::nullopt};
    if (j.contains("vectors")) {
        const json& vs = j["vectors"];
        if (!vs.is_array()) throw ParseError("/vectors: expected an array");
        std::vector<ModuleVector> vectors;
        for (std::size_t i = 0; i < vs.size(); ++i) {
            vectors.push_back(vector_from_json(vs[i], n, d, "/vectors/" + std::to_string(i)));
        }
        out.vectors = std::move(vectors);
    }
    out.system.validate();
    return out;
}

inline json parse_document(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& err) {
        throw ParseError(std::string("invalid JSON: ") + err.what());
    }
}

}  // namespace opframe::io
