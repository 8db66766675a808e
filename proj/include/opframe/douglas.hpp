#pragma once

#include <cmath>
#include <optional>

#include "algebra.hpp"
#include "operators.hpp"

namespace opframe::douglas {

/// Joint verdict of the four equivalent factorization statements for a pair
/// (T', T): majorization T'T'* <= lambda TT*, adjoint norm domination,
/// solvability of T X = T', and range inclusion R(T') in R(T).
///
/// The classical equivalence asks for the closure of R(T*) to be orthogonally
/// complemented; every submodule of a finite-dimensional module is closed and
/// complemented, so no check is needed here.
struct DouglasReport {
    std::optional<double> majorization_lambda;
    std::optional<double> mu;
    std::optional<ModuleOperator> solution;
    double solution_residual = 0.0;
    bool range_included = false;
    bool consistent = false;
};

/// R(T') subset of R(T), decided for the module action: the rows of rep(T')
/// must lie in the row space of rep(T).  Projector built from the right
/// singular vectors of rep(T).
inline bool range_inclusion(const ModuleOperator& t_prime, const ModuleOperator& t,
                            double rank_tol = kRankTol) {
    if (!t_prime.same_space(t)) throw DimensionMismatch("range_inclusion: mismatched (n, d)");
    const std::size_t dim = t.dim();
    const Svd s = svd(t.rep());
    if (s.singular_values.front() == 0.0) {
        return operator_norm(t_prime.rep()) <= rank_tol;
    }
    const double cut = rank_tol * s.singular_values.front();
    Matrix projector(dim, dim);
    for (std::size_t j = 0; j < s.singular_values.size(); ++j) {
        if (s.singular_values[j] <= cut) continue;
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t k = 0; k < dim; ++k)
                projector(i, k) += s.v(i, j) * std::conj(s.v(k, j));
    }
    const Matrix residual = t_prime.rep() * (Matrix::identity(dim) - projector);
    return operator_norm(residual) <= rank_tol * std::max(1.0, operator_norm(t_prime.rep()));
}

/// Least lambda with T'T'* <= lambda TT*, found by bisection over Loewner
/// checks on the representing grams; absent when no lambda exists in the
/// window (equivalently, when range inclusion fails).  Bisection stays robust
/// when TT* is singular, which a direct pencil solve would not.
inline std::optional<double> majorization_lambda(const ModuleOperator& t_prime,
                                                 const ModuleOperator& t, double tol = kTolRel,
                                                 double rank_tol = kRankTol) {
    if (!t_prime.same_space(t)) throw DimensionMismatch("majorization_lambda: mismatched (n, d)");
    const Matrix lhs = t_prime.rep().adjoint() * t_prime.rep();
    const Matrix rhs = t.rep().adjoint() * t.rep();

    const auto check = [&](double lambda) { return loewner_leq(lhs, lambda * rhs, tol); };
    if (check(0.0)) return 0.0;

    const Svd s = svd(t.rep());
    const double smax = s.singular_values.front();
    if (smax == 0.0) return std::nullopt;  // T = 0 but T' != 0
    double smin_pos = smax;
    for (double sv : s.singular_values) {
        if (sv > rank_tol * smax) smin_pos = sv;
    }
    const double hi = std::pow(operator_norm(t_prime.rep()) / smin_pos, 2.0) + 1.0;
    if (!check(hi)) return std::nullopt;

    double lo = 0.0, top = hi;
    for (int iter = 0; iter < 100 && (top - lo) > tol * std::max(1.0, top); ++iter) {
        const double mid = 0.5 * (lo + top);
        if (check(mid)) {
            top = mid;
        } else {
            lo = mid;
        }
    }
    return top;
}

/// Minimal-norm solution D of T o D = T', i.e. rep(D) rep(T) = rep(T') at the
/// representation level (the anti-homomorphism reverses the product order).
inline ModuleOperator factorize(const ModuleOperator& t_prime, const ModuleOperator& t,
                                double rank_tol = kRankTol) {
    if (!t_prime.same_space(t)) throw DimensionMismatch("factorize: mismatched (n, d)");
    const Matrix d_rep = t_prime.rep() * pseudo_inverse(t.rep(), rank_tol);
    const double residual = operator_norm(d_rep * t.rep() - t_prime.rep());
    if (residual > rank_tol * std::max(1.0, operator_norm(t_prime.rep()))) {
        throw NoSolution("factorize: T X = T' has no solution", residual);
    }
    return ModuleOperator(t.n(), t.d(), d_rep);
}

/// Evaluates all four statements independently and records whether they
/// agree.  Disagreement is reported, not thrown; it flags a numerical-rank
/// boundary case.
inline DouglasReport equivalence_report(const ModuleOperator& t_prime, const ModuleOperator& t,
                                        double tol = kTolRel, double rank_tol = kRankTol) {
    DouglasReport out;
    out.majorization_lambda = majorization_lambda(t_prime, t, tol, rank_tol);
    if (out.majorization_lambda) out.mu = std::sqrt(*out.majorization_lambda);
    out.range_included = range_inclusion(t_prime, t, rank_tol);
    try {
        ModuleOperator d = factorize(t_prime, t, rank_tol);
        out.solution_residual = operator_norm(d.rep() * t.rep() - t_prime.rep());
        out.solution = std::move(d);
    } catch (const NoSolution& err) {
        out.solution_residual = err.residual();
    }
    const bool v1 = out.majorization_lambda.has_value();
    const bool v2 = out.mu.has_value();
    const bool v3 = out.solution.has_value();
    const bool v4 = out.range_included;
    out.consistent = (v1 == v2) && (v2 == v3) && (v3 == v4);
    return out;
}

}  // namespace opframe::douglas
