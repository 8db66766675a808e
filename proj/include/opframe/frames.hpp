#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

#include "algebra.hpp"
#include "matrix.hpp"
#include "module_space.hpp"
#include "operators.hpp"

namespace opframe {

/// Finite family {T_i} of adjointable operators on a shared H = A^d.
struct OperatorFamily {
    std::vector<ModuleOperator> members;

    std::size_t size() const { return members.size(); }

    void validate() const {
        if (members.empty()) throw InfeasibleSpec("OperatorFamily: at least one member required");
        for (const auto& t : members) {
            if (!t.same_space(members.front())) {
                throw DimensionMismatch("OperatorFamily: members on different spaces");
            }
        }
    }
};

/// Full datum of a (C, C')-controlled K-operator frame candidate.
struct ControlledSystem {
    OperatorFamily family;
    GLPlusOperator C;
    GLPlusOperator Cp;
    ModuleOperator K;

    std::size_t n() const { return K.n(); }
    std::size_t d() const { return K.d(); }
    std::size_t dim() const { return K.dim(); }

    void validate() const {
        family.validate();
        if (!family.members.front().same_space(K) || !C.op.same_space(K) ||
            !Cp.op.same_space(K)) {
            throw DimensionMismatch("ControlledSystem: components on different spaces");
        }
    }
};

/// Certified frame bounds; lower is +infinity when the lower inequality is
/// vacuous (K = 0).
struct FrameBounds {
    double lower;
    double upper;
    double tol;
};

/// Quadratic-form matrix of the middle term sum_i <T_i C x, T_i C' x>: the
/// unique phi with X phi X* equal to the sum for every stacked X.  The
/// Hermitian defect is recorded, never silently dropped.
struct MiddleOperator {
    Matrix phi;
    double hermitian_defect;
};

struct BoundCheck {
    bool lower_ok;
    bool upper_ok;
    double hermitian_defect;
};

struct BesselCheck {
    bool upper_ok;
    double hermitian_defect;
};

namespace detail {

/// Gram matrix of the lower side: <K*x, K*x> has representing matrix
/// rep(K)* rep(K).
inline Matrix lower_gram(const ModuleOperator& k) { return k.rep().adjoint() * k.rep(); }

inline Matrix family_gram(const OperatorFamily& family) {
    Matrix g(family.members.front().dim(), family.members.front().dim());
    for (const auto& t : family.members) g = g + t.rep() * t.rep().adjoint();
    return g;
}

inline void gate_middle(const MiddleOperator& mid, double tol, bool symmetrize,
                        const char* what) {
    if (symmetrize) return;
    if (mid.hermitian_defect > tol * std::max(1.0, operator_norm(mid.phi))) {
        throw NonHermitianMiddle(std::string(what) + ": middle operator is not Hermitian",
                                 mid.hermitian_defect);
    }
}

// Lower inequality A <K*x,K*x> <= middle as a single PSD check.  A may be the
// +infinity sentinel, which is satisfiable only with K = 0.
inline bool lower_check(double a, const Matrix& gram_k, const Matrix& phi, double tol) {
    if (!std::isfinite(a)) {
        if (operator_norm(gram_k) > 1e-300) return false;
        return loewner_leq(Matrix(phi.rows(), phi.cols()), phi, tol);
    }
    return loewner_leq(a * gram_k, phi, tol);
}

}  // namespace detail

/// phi = rep(C) (sum_i rep(T_i) rep(T_i)*) rep(C').
inline MiddleOperator middle_operator(const ControlledSystem& sys) {
    sys.validate();
    const Matrix phi = sys.C.op.rep() * detail::family_gram(sys.family) * sys.Cp.op.rep();
    return {phi, hermitian_defect(phi)};
}

/// Decides the two Loewner inequalities of the frame definition at the given
/// constants.  Setting K = I decides controlled operator frames, C = C' = I
/// decides K-operator frames, and both give plain operator frames.
inline BoundCheck verify_bounds(const ControlledSystem& sys, double a, double b,
                                double tol = kTolRel, bool symmetrize = false) {
    const MiddleOperator mid = middle_operator(sys);
    detail::gate_middle(mid, tol, symmetrize, "verify_bounds");
    const Matrix phi = hermitian_part(mid.phi);

    const auto eig = detail::jacobi_hermitian(phi);
    const double top =
        std::max(std::abs(eig.eigenvalues.front()), std::abs(eig.eigenvalues.back()));
    if (eig.eigenvalues.front() < -tol * std::max(1.0, top)) {
        throw NotPositive("verify_bounds: middle operator has negative eigenvalue " +
                          std::to_string(eig.eigenvalues.front()));
    }

    BoundCheck out{false, false, mid.hermitian_defect};
    out.upper_ok = loewner_leq(phi, b * Matrix::identity(sys.dim()), tol);
    out.lower_ok = detail::lower_check(a, detail::lower_gram(sys.K), phi, tol);
    return out;
}

/// Upper inequality only (Bessel check).
inline BesselCheck verify_bessel(const ControlledSystem& sys, double b, double tol = kTolRel,
                                 bool symmetrize = false) {
    const MiddleOperator mid = middle_operator(sys);
    detail::gate_middle(mid, tol, symmetrize, "verify_bessel");
    const Matrix phi = hermitian_part(mid.phi);
    const auto eig = detail::jacobi_hermitian(phi);
    const double top =
        std::max(std::abs(eig.eigenvalues.front()), std::abs(eig.eigenvalues.back()));
    if (eig.eigenvalues.front() < -tol * std::max(1.0, top)) {
        throw NotPositive("verify_bessel: middle operator has negative eigenvalue " +
                          std::to_string(eig.eigenvalues.front()));
    }
    return {loewner_leq(phi, b * Matrix::identity(sys.dim()), tol), mid.hermitian_defect};
}

/// Optimal frame bounds.  The upper bound is lambda_max(sym(phi)).  The lower
/// bound is the smallest eigenvalue of the pencil (phi, K K*-gram) restricted
/// to ran(rep(K)* rep(K)); outside that range the lower inequality is vacuous.
/// K = 0 yields the +infinity sentinel.  Rank and whitening decisions are made
/// on one shared eigendecomposition of the gram so thresholds stay coherent.
inline FrameBounds optimal_bounds(const ControlledSystem& sys, double rank_tol = kRankTol,
                                  double tol = kTolRel, bool symmetrize = false) {
    const MiddleOperator mid = middle_operator(sys);
    detail::gate_middle(mid, tol, symmetrize, "optimal_bounds");
    const Matrix phi = hermitian_part(mid.phi);

    const auto eig_phi = detail::jacobi_hermitian(phi);
    const double upper = eig_phi.eigenvalues.back();

    const Matrix gram = detail::lower_gram(sys.K);
    const auto eig_p = detail::jacobi_hermitian(hermitian_part(gram));
    const std::size_t dim = sys.dim();
    const double pmax = eig_p.eigenvalues.back();

    std::vector<std::size_t> kept;
    for (std::size_t i = 0; i < dim; ++i) {
        if (pmax > 0.0 && eig_p.eigenvalues[i] > rank_tol * pmax) kept.push_back(i);
    }
    if (kept.empty()) {
        return {std::numeric_limits<double>::infinity(), upper, tol};
    }

    // Restricted whitened pencil: D (V* phi V)|kept D with D = diag(lambda^-1/2).
    Matrix basis(dim, kept.size());
    for (std::size_t j = 0; j < kept.size(); ++j) {
        const double w = 1.0 / std::sqrt(eig_p.eigenvalues[kept[j]]);
        for (std::size_t i = 0; i < dim; ++i) basis(i, j) = eig_p.eigenvectors(i, kept[j]) * w;
    }
    const Matrix pencil = hermitian_part(basis.adjoint() * phi * basis);
    const auto eig_r = detail::jacobi_hermitian(pencil);
    return {eig_r.eigenvalues.front(), upper, tol};
}

/// (C C')^(1/2) as an operator; requires the controllers to commute (the
/// rep-level product must be Hermitian within tol).
inline ModuleOperator controlled_sqrt(const ControlledSystem& sys, double tol = kTolRel) {
    const ModuleOperator prod = compose(sys.C.op, sys.Cp.op);
    const double defect = hermitian_defect(prod.rep());
    if (defect > tol * std::max(1.0, operator_norm(prod.rep()))) {
        throw NonCommutingControllers("controlled_sqrt: C and C' do not commute", defect);
    }
    return ModuleOperator(sys.n(), sys.d(), positive_sqrt(hermitian_part(prod.rep()), tol));
}

/// Analysis: x -> { T_i (C C')^(1/2) x }.
inline std::vector<ModuleVector> analysis(const ControlledSystem& sys, const ModuleVector& x,
                                          double tol = kTolRel) {
    sys.validate();
    const ModuleOperator root = controlled_sqrt(sys, tol);
    std::vector<ModuleVector> out;
    out.reserve(sys.family.size());
    for (const auto& t : sys.family.members) out.push_back(apply(compose(t, root), x));
    return out;
}

/// Synthesis (adjoint of analysis): {a_i} -> sum_i (C C')^(1/2) T_i* a_i.
inline ModuleVector synthesis(const ControlledSystem& sys,
                              const std::vector<ModuleVector>& coefficients,
                              double tol = kTolRel) {
    sys.validate();
    if (coefficients.size() != sys.family.size()) {
        throw DimensionMismatch("synthesis: coefficient count does not match family");
    }
    const ModuleOperator root = controlled_sqrt(sys, tol);
    ModuleVector acc(sys.n(), sys.d());
    for (std::size_t i = 0; i < coefficients.size(); ++i) {
        acc = acc + apply(compose(root, adjoint(sys.family.members[i])), coefficients[i]);
    }
    return acc;
}

/// Frame operator S: x -> sum_i C' T_i* T_i C x.  Its representation equals
/// the middle-operator matrix; positivity and self-adjointness hold under the
/// commutation hypotheses and are reported, not assumed.
inline ModuleOperator controlled_frame_operator(const ControlledSystem& sys) {
    return ModuleOperator(sys.n(), sys.d(), middle_operator(sys).phi);
}

/// Decides the two inequalities of a C-controlled K-frame of vectors:
/// A <C^(1/2) K* x, C^(1/2) K* x> <= sum_i <x, x_i><C x_i, x> <= B <x, x>,
/// reduced to PSD checks on representing matrices (no sampling).
inline BoundCheck verify_c_controlled_k_frame(const std::vector<ModuleVector>& vectors,
                                              const GLPlusOperator& c, const ModuleOperator& k,
                                              double a, double b, double tol = kTolRel) {
    if (vectors.empty()) throw InfeasibleSpec("verify_c_controlled_k_frame: no vectors");
    for (const auto& x : vectors) {
        if (x.n() != k.n() || x.d() != k.d()) {
            throw DimensionMismatch("verify_c_controlled_k_frame: vector space mismatch");
        }
    }
    if (!c.op.same_space(k)) {
        throw DimensionMismatch("verify_c_controlled_k_frame: controller space mismatch");
    }

    Matrix gram(k.dim(), k.dim());
    for (const auto& x : vectors) gram = gram + x.stacked().adjoint() * x.stacked();
    const Matrix phi = gram * c.op.rep();
    const double defect = hermitian_defect(phi);
    if (defect > tol * std::max(1.0, operator_norm(phi))) {
        throw NonHermitianMiddle("verify_c_controlled_k_frame: middle term not Hermitian",
                                 defect);
    }
    const Matrix phi_sym = hermitian_part(phi);

    // <C^(1/2) K* x, ...> has representing matrix rep(K)* rep(C) rep(K).
    const Matrix lhs = k.rep().adjoint() * c.op.rep() * k.rep();
    BoundCheck out{false, false, defect};
    out.lower_ok = loewner_leq(a * hermitian_part(lhs), phi_sym, tol);
    out.upper_ok = loewner_leq(phi_sym, b * Matrix::identity(k.dim()), tol);
    return out;
}

/// Lifts a C-controlled K-frame of vectors {x_i} to the operator family
/// Gamma_i(x) = <x, x_i> e_i targeting the module basis e_1..e_d; the result
/// is an (Id, C)-controlled K-operator system.  Requires at most d vectors.
inline ControlledSystem lift_from_controlled_k_frame(const std::vector<ModuleVector>& vectors,
                                                     const GLPlusOperator& c,
                                                     const ModuleOperator& k) {
    if (vectors.empty()) throw InfeasibleSpec("lift_from_controlled_k_frame: no vectors");
    const std::size_t n = k.n();
    const std::size_t d = k.d();
    if (vectors.size() > d) {
        throw TooManyVectors("lift_from_controlled_k_frame: " + std::to_string(vectors.size()) +
                             " vectors exceed module rank " + std::to_string(d));
    }

    OperatorFamily family;
    for (std::size_t i = 0; i < vectors.size(); ++i) {
        const Matrix& stacked = vectors[i].stacked();
        if (stacked.rows() != n || stacked.cols() != n * d) {
            throw DimensionMismatch("lift_from_controlled_k_frame: vector space mismatch");
        }
        // rep(Gamma_i) = stacked(x_i)* S_i with S_i the selector of block i.
        Matrix rep(n * d, n * d);
        for (std::size_t a = 0; a < n * d; ++a)
            for (std::size_t r = 0; r < n; ++r) rep(a, i * n + r) = std::conj(stacked(r, a));
        family.members.emplace_back(n, d, std::move(rep));
    }
    return ControlledSystem{std::move(family), identity_glplus(n, d), c, k};
}

}  // namespace opframe
