#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>

#include "algebra.hpp"
#include "matrix.hpp"
#include "module_space.hpp"
#include "rng.hpp"

namespace opframe {

/// Adjointable operator on H = A^d, stored through its right-multiplication
/// representation: apply(T, x) has stacked form stacked(x) * rep(T), with
/// rep(T) an (n*d) x (n*d) complex matrix.  A-linearity is structural in this
/// form.  Composition reverses the representation product:
/// rep(S o T) = rep(T) * rep(S).
class ModuleOperator {
public:
    ModuleOperator(std::size_t n, std::size_t d, Matrix rep)
        : n_(n), d_(d), rep_(std::move(rep)) {
        if (n == 0 || d == 0) throw DimensionMismatch("ModuleOperator: n and d must be positive");
        if (rep_.rows() != n * d || rep_.cols() != n * d) {
            throw DimensionMismatch("ModuleOperator: rep must be " + std::to_string(n * d) +
                                    "x" + std::to_string(n * d) + ", got " + rep_.shape_string());
        }
    }

    static ModuleOperator identity(std::size_t n, std::size_t d) {
        return ModuleOperator(n, d, Matrix::identity(n * d));
    }

    std::size_t n() const { return n_; }
    std::size_t d() const { return d_; }
    std::size_t dim() const { return n_ * d_; }
    const Matrix& rep() const { return rep_; }

    bool same_space(const ModuleOperator& rhs) const { return n_ == rhs.n_ && d_ == rhs.d_; }

private:
    std::size_t n_;
    std::size_t d_;
    Matrix rep_;
};

inline ModuleVector apply(const ModuleOperator& t, const ModuleVector& x) {
    if (t.n() != x.n() || t.d() != x.d()) {
        throw DimensionMismatch("apply: operator (n,d) does not match vector");
    }
    return ModuleVector::from_stacked(x.n(), x.d(), x.stacked() * t.rep());
}

/// T*: conjugate transpose of the representation; satisfies
/// <Tx, y> = <x, T*y> for all x, y.
inline ModuleOperator adjoint(const ModuleOperator& t) {
    return ModuleOperator(t.n(), t.d(), t.rep().adjoint());
}

/// compose(S, T) = S o T, i.e. x -> S(T(x)).  The right action makes rep an
/// anti-homomorphism: rep(S o T) = rep(T) * rep(S).
inline ModuleOperator compose(const ModuleOperator& s, const ModuleOperator& t) {
    if (!s.same_space(t)) throw DimensionMismatch("compose: mismatched (n, d)");
    return ModuleOperator(s.n(), s.d(), t.rep() * s.rep());
}

inline bool is_self_adjoint(const ModuleOperator& t, double tol = kTolRel) {
    return hermitian_defect(t.rep()) <= tol * std::max(1.0, t.rep().frobenius_norm());
}

/// Positive in the operator order: self-adjoint with spectrum >= -tol*scale.
inline bool is_positive(const ModuleOperator& t, double tol = kTolRel) {
    if (!is_self_adjoint(t, std::max(tol, 1e-12))) return false;
    const auto eig = detail::jacobi_hermitian(hermitian_part(t.rep()));
    const double top =
        std::max(std::abs(eig.eigenvalues.front()), std::abs(eig.eigenvalues.back()));
    return eig.eigenvalues.front() >= -tol * std::max(1.0, top);
}

/// Largest m with <T*x, T*x> >= m <x, x> for all x, present exactly when T is
/// surjective.  In the stacked form the inequality reduces to
/// rep* rep >= m I, so m is the smallest squared singular value of rep; the
/// value is absent when rep is numerically rank-deficient.
inline std::optional<double> surjectivity_lower_bound(const ModuleOperator& t,
                                                      double rank_tol = kRankTol) {
    const Svd s = svd(t.rep());
    const double smax = s.singular_values.front();
    const double smin = s.singular_values.back();
    if (smax == 0.0 || smin <= rank_tol * smax) return std::nullopt;
    return smin * smin;
}

/// Checks <Tx, Tx> <= ||T||^2 <x, x> on sampled vectors plus the global PSD
/// certificate ||T||^2 I - rep* rep >= -tol.
inline bool norm_dominance_check(const ModuleOperator& t, int trials, double tol = kTolRel,
                                 std::uint64_t seed = 0x6e6f726dull) {
    if (trials < 1) throw DimensionMismatch("norm_dominance_check: trials must be >= 1");
    const double norm_sq = operator_norm(t.rep()) * operator_norm(t.rep());
    const Matrix bound = norm_sq * Matrix::identity(t.dim());
    if (!loewner_leq(t.rep().adjoint() * t.rep(), bound, tol)) return false;
    for (int i = 0; i < trials; ++i) {
        const ModuleVector x = random_vector(t.n(), t.d(), derive_seed(seed, i));
        const ModuleVector tx = apply(t, x);
        if (!loewner_leq(inner_product(tx, tx), norm_sq * inner_product(x, x), tol)) return false;
    }
    return true;
}

/// Positive invertible operator (an element of GL+(H)) together with its
/// certified spectral floor.
struct GLPlusOperator {
    ModuleOperator op;
    double lambda_min;
};

/// Certifies positivity and invertibility of op and records lambda_min.
inline GLPlusOperator make_glplus(const ModuleOperator& op, double tol = kTolRel) {
    const double defect = hermitian_defect(op.rep());
    if (defect > tol * std::max(1.0, op.rep().frobenius_norm())) {
        throw NotPositiveInvertible("make_glplus: hermitian defect " + std::to_string(defect));
    }
    const auto eig = detail::jacobi_hermitian(hermitian_part(op.rep()));
    const double lo = eig.eigenvalues.front();
    const double hi = std::abs(eig.eigenvalues.back());
    if (lo <= tol * std::max(1.0, hi)) {
        throw NotPositiveInvertible("make_glplus: lambda_min " + std::to_string(lo) +
                                    " is not positive");
    }
    return {op, lo};
}

inline GLPlusOperator identity_glplus(std::size_t n, std::size_t d) {
    return {ModuleOperator::identity(n, d), 1.0};
}

/// rep = G* G + eps I, positive with lambda_min >= eps by construction.
inline GLPlusOperator glplus_from_factor(std::size_t n, std::size_t d, const Matrix& g,
                                         double eps) {
    if (eps <= 0.0) throw InfeasibleSpec("glplus_from_factor: eps must be positive");
    const Matrix rep =
        hermitian_part(g.adjoint() * g + eps * Matrix::identity(n * d));
    return make_glplus(ModuleOperator(n, d, rep), std::min(kTolRel, eps / 2.0));
}

inline GLPlusOperator random_glplus(std::size_t n, std::size_t d, double eps,
                                    std::uint64_t seed) {
    Rng rng(seed);
    Matrix g(n * d, n * d);
    for (std::size_t i = 0; i < n * d; ++i)
        for (std::size_t j = 0; j < n * d; ++j) g(i, j) = rng.complex_gaussian();
    // normalize so the spectral range stays O(1) regardless of dimension
    g *= Complex{1.0 / std::sqrt(static_cast<double>(n * d)), 0.0};
    return glplus_from_factor(n, d, g, eps);
}

}  // namespace opframe
