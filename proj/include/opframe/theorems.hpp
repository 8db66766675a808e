#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "douglas.hpp"
#include "frames.hpp"

namespace opframe::theorems {

enum class TheoremId {
    OpframeIsKframe,
    SurjectiveUpgrade,
    CommutingUpgrade,
    FrameIffSIffFactor,
    ComposeQ,
    TightIff,
    PowerShift,
    Perturbation,
};

inline const std::vector<TheoremId>& all_theorems() {
    static const std::vector<TheoremId> ids = {
        TheoremId::OpframeIsKframe,  TheoremId::SurjectiveUpgrade, TheoremId::CommutingUpgrade,
        TheoremId::FrameIffSIffFactor, TheoremId::ComposeQ,        TheoremId::TightIff,
        TheoremId::PowerShift,        TheoremId::Perturbation,
    };
    return ids;
}

inline const char* theorem_name(TheoremId id) {
    switch (id) {
        case TheoremId::OpframeIsKframe: return "opframe_is_kframe";
        case TheoremId::SurjectiveUpgrade: return "surjective_upgrade";
        case TheoremId::CommutingUpgrade: return "commuting_upgrade";
        case TheoremId::FrameIffSIffFactor: return "frame_iff_s_iff_factor";
        case TheoremId::ComposeQ: return "compose_q";
        case TheoremId::TightIff: return "tight_iff";
        case TheoremId::PowerShift: return "power_shift";
        case TheoremId::Perturbation: return "perturbation";
    }
    return "unknown";
}

inline std::optional<TheoremId> theorem_from_name(const std::string& name) {
    for (TheoremId id : all_theorems()) {
        if (name == theorem_name(id)) return id;
    }
    return std::nullopt;
}

/// Structured checker result.  conclusion_ok may be false only on a genuine,
/// wide-margin violation; boundary cases raise Inconclusive instead.
struct TheoremVerdict {
    TheoremId id = TheoremId::OpframeIsKframe;
    bool hypothesis_ok = false;
    bool conclusion_ok = false;
    std::map<std::string, double> witnesses;
    std::map<std::string, double> defects;
};

namespace detail {

// Verdict discipline: pass at tol -> true, fail even at 10*tol -> false,
// anything in between is a tolerance-boundary case and must not be judged.
template <typename CheckFn>
bool certify_with_band(CheckFn&& check, double tol, const char* what) {
    if (check(tol)) return true;
    if (check(10.0 * tol)) {
        throw Inconclusive(std::string(what) + ": verdict falls inside the tolerance band");
    }
    return false;
}

// Same discipline for a measured defect that should vanish.
inline bool defect_within_band(double defect, double tol, double scale, const char* what) {
    const double s = std::max(1.0, scale);
    if (defect <= tol * s) return true;
    if (defect < 10.0 * tol * s) {
        throw Inconclusive(std::string(what) + ": defect " + std::to_string(defect) +
                           " falls inside the tolerance band");
    }
    return false;
}

// One-sided inequality lhs <= rhs with the same band discipline.
inline bool violation_within_band(double violation, double tol, double scale, const char* what) {
    return defect_within_band(std::max(0.0, violation), tol, scale, what);
}

inline bool frame_lower_ok(const FrameBounds& b, double tol) {
    if (!std::isfinite(b.lower)) return true;  // K = 0: lower inequality vacuous
    return b.lower >= 10.0 * tol * std::max(1.0, b.upper);
}

inline double commutator_defect(const Matrix& a, const Matrix& b) {
    return commutator_norm(a, b);
}

inline double commutator_scale(const Matrix& a, const Matrix& b) {
    return std::max(1.0, operator_norm(a) * operator_norm(b));
}

inline ControlledSystem with_identity_k(const ControlledSystem& sys) {
    return ControlledSystem{sys.family, sys.C, sys.Cp,
                            ModuleOperator::identity(sys.n(), sys.d())};
}

inline ModuleOperator operator_power(const ModuleOperator& k, int n) {
    ModuleOperator acc = ModuleOperator::identity(k.n(), k.d());
    for (int i = 0; i < n; ++i) acc = compose(k, acc);
    return acc;
}

inline double real_trace(const Matrix& m) {
    double acc = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i) acc += m(i, i).real();
    return acc;
}

}  // namespace detail

/// Every controlled operator frame is a controlled K-operator frame with
/// lower constant A / ||K||^2.
inline TheoremVerdict prop_opframe_is_kframe(const ControlledSystem& sys, double tol = kTolRel,
                                             double rank_tol = kRankTol) {
    TheoremVerdict v;
    v.id = TheoremId::OpframeIsKframe;
    const double k_norm = operator_norm(sys.K.rep());
    if (k_norm < rank_tol) {
        throw DegenerateK("prop_opframe_is_kframe: ||K|| below rank tolerance, claim vacuous");
    }
    const FrameBounds base = optimal_bounds(detail::with_identity_k(sys), rank_tol, tol);
    v.witnesses["A"] = base.lower;
    v.witnesses["B"] = base.upper;
    v.witnesses["k_norm"] = k_norm;
    v.hypothesis_ok = detail::frame_lower_ok(base, tol);
    if (!v.hypothesis_ok) return v;

    const double lower = base.lower / (k_norm * k_norm);
    v.witnesses["lower_constant"] = lower;
    v.conclusion_ok = detail::certify_with_band(
        [&](double t) {
            const BoundCheck chk = verify_bounds(sys, lower, base.upper, t);
            return chk.lower_ok && chk.upper_ok;
        },
        tol, "prop_opframe_is_kframe");
    return v;
}

/// If K is surjective, a controlled K-operator frame is a controlled operator
/// frame with lower constant A m, m the surjectivity lower bound of K.
inline TheoremVerdict prop_surjective_upgrade(const ControlledSystem& sys, double tol = kTolRel,
                                              double rank_tol = kRankTol) {
    TheoremVerdict v;
    v.id = TheoremId::SurjectiveUpgrade;
    const FrameBounds base = optimal_bounds(sys, rank_tol, tol);
    const std::optional<double> m = surjectivity_lower_bound(sys.K, rank_tol);
    v.witnesses["A"] = base.lower;
    v.witnesses["B"] = base.upper;
    if (m) v.witnesses["m"] = *m;
    v.hypothesis_ok = m.has_value() && detail::frame_lower_ok(base, tol);
    if (!v.hypothesis_ok) return v;

    const double a = std::isfinite(base.lower) ? base.lower : 1.0;
    const double lower = a * (*m);
    v.witnesses["lower_constant"] = lower;
    v.conclusion_ok = detail::certify_with_band(
        [&](double t) {
            const BoundCheck chk =
                verify_bounds(detail::with_identity_k(sys), lower, base.upper, t);
            return chk.lower_ok && chk.upper_ok;
        },
        tol, "prop_surjective_upgrade");
    return v;
}

/// If C, C' commute with the T_i and K, a K-operator frame is a controlled
/// K-operator frame with constants (A m, B ||(CC')^(1/2)||^2).
inline TheoremVerdict prop_commuting_upgrade(const ControlledSystem& sys, double tol = kTolRel,
                                             double rank_tol = kRankTol) {
    TheoremVerdict v;
    v.id = TheoremId::CommutingUpgrade;
    const Matrix& c = sys.C.op.rep();
    const Matrix& cp = sys.Cp.op.rep();
    const Matrix& k = sys.K.rep();

    double worst = 0.0;
    const auto record = [&](const std::string& name, const Matrix& a, const Matrix& b) {
        const double defect = detail::commutator_defect(a, b);
        v.defects[name] = defect;
        worst = std::max(worst, defect / (tol * detail::commutator_scale(a, b)));
    };
    record("comm_C_Cp", c, cp);
    record("comm_C_K", c, k);
    record("comm_Cp_K", cp, k);
    for (std::size_t i = 0; i < sys.family.size(); ++i) {
        const Matrix& t = sys.family.members[i].rep();
        record("comm_C_T" + std::to_string(i), c, t);
        record("comm_Cp_T" + std::to_string(i), cp, t);
    }
    const bool commuting_ok = worst <= 1.0;

    const ControlledSystem plain{sys.family, identity_glplus(sys.n(), sys.d()),
                                 identity_glplus(sys.n(), sys.d()), sys.K};
    const FrameBounds base = optimal_bounds(plain, rank_tol, tol);
    v.witnesses["A"] = base.lower;
    v.witnesses["B"] = base.upper;
    v.hypothesis_ok = commuting_ok && detail::frame_lower_ok(base, tol);
    if (!v.hypothesis_ok) return v;

    const ModuleOperator root = controlled_sqrt(sys, tol);
    const std::optional<double> m = surjectivity_lower_bound(root, rank_tol);
    if (!m) {
        throw HypothesisViolated("prop_commuting_upgrade: (CC')^(1/2) not invertible");
    }
    const double root_norm = operator_norm(root.rep());
    const double a = std::isfinite(base.lower) ? base.lower : 1.0;
    const double lower = a * (*m);
    const double upper = base.upper * root_norm * root_norm;
    v.witnesses["m"] = *m;
    v.witnesses["lower_constant"] = lower;
    v.witnesses["upper_constant"] = upper;
    v.conclusion_ok = detail::certify_with_band(
        [&](double t) {
            const BoundCheck chk = verify_bounds(sys, lower, upper, t);
            return chk.lower_ok && chk.upper_ok;
        },
        tol, "prop_commuting_upgrade");
    return v;
}

/// Equivalence of (1) the lower frame property, (2) S >= A K K*, and
/// (3) K = S^(1/2) Q for some adjointable Q, for controlled Bessel families
/// under the frame-operator commutation hypotheses.
inline TheoremVerdict thm_frame_iff_s_iff_factor(const ControlledSystem& sys,
                                                 double tol = kTolRel,
                                                 double rank_tol = kRankTol) {
    TheoremVerdict v;
    v.id = TheoremId::FrameIffSIffFactor;
    const Matrix& c = sys.C.op.rep();
    const Matrix& cp = sys.Cp.op.rep();

    double worst = 0.0;
    const auto record = [&](const std::string& name, const Matrix& a, const Matrix& b) {
        const double defect = detail::commutator_defect(a, b);
        v.defects[name] = defect;
        worst = std::max(worst, defect / (tol * detail::commutator_scale(a, b)));
    };
    record("comm_C_Cp", c, cp);
    for (std::size_t i = 0; i < sys.family.size(); ++i) {
        const Matrix gram_i = sys.family.members[i].rep() * sys.family.members[i].rep().adjoint();
        record("comm_C_T" + std::to_string(i) + "T*", c, gram_i);
        record("comm_Cp_T" + std::to_string(i) + "T*", cp, gram_i);
    }
    v.hypothesis_ok = worst <= 1.0;
    if (!v.hypothesis_ok) return v;

    const FrameBounds bounds = optimal_bounds(sys, rank_tol, tol);
    const double theta = 10.0 * tol * std::max(1.0, bounds.upper);
    v.witnesses["A_opt"] = bounds.lower;
    v.witnesses["B_opt"] = bounds.upper;

    // (1) lower frame property from the restricted pencil, certified globally.
    bool v1;
    if (!std::isfinite(bounds.lower)) {
        v1 = true;
    } else if (bounds.lower >= theta) {
        v1 = detail::certify_with_band(
            [&](double t) {
                return verify_bounds(sys, bounds.lower * (1.0 - 100.0 * tol), bounds.upper, t)
                    .lower_ok;
            },
            tol, "thm_frame_iff_s_iff_factor (1)");
    } else if (bounds.lower < theta / 10.0) {
        v1 = false;
    } else {
        throw Inconclusive("thm_frame_iff_s_iff_factor: optimal lower bound in tolerance band");
    }

    // (2) largest a with S >= a K K*, by bisection on the Loewner check.
    const ModuleOperator s_op = controlled_frame_operator(sys);
    const Matrix s_sym = hermitian_part(s_op.rep());
    const Matrix gram_k = opframe::detail::lower_gram(sys.K);
    const auto eig_p = opframe::detail::jacobi_hermitian(hermitian_part(gram_k));
    const double pmax = eig_p.eigenvalues.back();
    bool v2;
    double a_bisect = 0.0;
    if (pmax <= rank_tol) {
        v2 = true;  // K = 0, condition (2) vacuous
    } else {
        double pmin_pos = pmax;
        for (double l : eig_p.eigenvalues) {
            if (l > rank_tol * pmax) pmin_pos = std::min(pmin_pos, l);
        }
        const auto check = [&](double a) { return loewner_leq(a * gram_k, s_sym, tol); };
        double lo = 0.0;
        double hi = std::max(bounds.upper, 1.0) / pmin_pos + 1.0;
        if (check(hi)) {
            a_bisect = hi;
        } else {
            for (int iter = 0; iter < 100 && (hi - lo) > tol * std::max(1.0, hi); ++iter) {
                const double mid = 0.5 * (lo + hi);
                if (check(mid)) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            a_bisect = lo;
        }
        v.witnesses["A_bisect"] = a_bisect;
        if (a_bisect >= theta) {
            v2 = true;
        } else if (a_bisect < theta / 10.0) {
            v2 = false;
        } else {
            throw Inconclusive("thm_frame_iff_s_iff_factor: bisected constant in tolerance band");
        }
    }

    // (3) solvability of S^(1/2) X = K.
    const Matrix root = positive_sqrt(s_sym, tol);
    bool v3 = false;
    try {
        const ModuleOperator q =
            douglas::factorize(sys.K, ModuleOperator(sys.n(), sys.d(), root), rank_tol);
        v.witnesses["factor_residual"] =
            operator_norm(q.rep() * root - sys.K.rep());
        v.witnesses["q_norm"] = operator_norm(q.rep());
        v3 = true;
    } catch (const NoSolution& err) {
        v.witnesses["factor_residual"] = err.residual();
    }

    v.witnesses["v1"] = v1 ? 1.0 : 0.0;
    v.witnesses["v2"] = v2 ? 1.0 : 0.0;
    v.witnesses["v3"] = v3 ? 1.0 : 0.0;
    v.conclusion_ok = (v1 == v2) && (v2 == v3);
    return v;
}

/// If Q commutes with C, C' and K then {T_i Q} is a controlled Q*K-operator
/// frame with bounds (A, B ||Q||^2).
inline TheoremVerdict thm_compose_q(const ControlledSystem& sys, const ModuleOperator& q,
                                    double tol = kTolRel, double rank_tol = kRankTol) {
    TheoremVerdict v;
    v.id = TheoremId::ComposeQ;
    double worst = 0.0;
    const auto record = [&](const std::string& name, const Matrix& a, const Matrix& b) {
        const double defect = detail::commutator_defect(a, b);
        v.defects[name] = defect;
        worst = std::max(worst, defect / (tol * detail::commutator_scale(a, b)));
    };
    record("comm_Q_C", q.rep(), sys.C.op.rep());
    record("comm_Q_Cp", q.rep(), sys.Cp.op.rep());
    record("comm_Q_K", q.rep(), sys.K.rep());

    const FrameBounds base = optimal_bounds(sys, rank_tol, tol);
    v.witnesses["A"] = base.lower;
    v.witnesses["B"] = base.upper;
    v.hypothesis_ok = worst <= 1.0 && detail::frame_lower_ok(base, tol);
    if (!v.hypothesis_ok) return v;

    OperatorFamily transformed;
    for (const auto& t : sys.family.members) transformed.members.push_back(compose(t, q));
    const ControlledSystem composed{std::move(transformed), sys.C, sys.Cp,
                                    compose(adjoint(q), sys.K)};
    const double q_norm = operator_norm(q.rep());
    const double a = std::isfinite(base.lower) ? base.lower : 1.0;
    const double upper = base.upper * q_norm * q_norm;
    v.witnesses["q_norm"] = q_norm;
    v.witnesses["upper_constant"] = upper;
    v.conclusion_ok = detail::certify_with_band(
        [&](double t) {
            const BoundCheck chk = verify_bounds(composed, a, upper, t);
            return chk.lower_ok && chk.upper_ok;
        },
        tol, "thm_compose_q");
    return v;
}

/// An A1-tight controlled K-operator frame is A2-tight as a controlled
/// operator frame iff K K* = (A2/A1) Id; both directions are checked through
/// that proof-level identity.
inline TheoremVerdict thm_tight_iff(const ControlledSystem& sys, double a1, double a2,
                                    double tol = kTolRel) {
    TheoremVerdict v;
    v.id = TheoremId::TightIff;
    const MiddleOperator mid = middle_operator(sys);
    opframe::detail::gate_middle(mid, tol, false, "thm_tight_iff");
    const Matrix phi = hermitian_part(mid.phi);
    const Matrix gram_k = opframe::detail::lower_gram(sys.K);
    const Matrix id = Matrix::identity(sys.dim());

    const double s_phi = std::max(1.0, operator_norm(phi));
    const double s_gram = std::max(1.0, operator_norm(gram_k));
    const double tight_k_defect = operator_norm(phi - a1 * gram_k);
    const double tight_op_defect = operator_norm(phi - a2 * id);
    const double identity_defect = operator_norm(gram_k - (a2 / a1) * id);
    v.defects["tight_K_defect"] = tight_k_defect;
    v.defects["tight_op_defect"] = tight_op_defect;
    v.witnesses["kk_star_identity_defect"] = identity_defect;

    v.hypothesis_ok = tight_k_defect <= tol * s_phi;
    if (!v.hypothesis_ok) return v;

    bool forward_ok = true;
    if (tight_op_defect <= tol * s_phi) {
        forward_ok = detail::defect_within_band(identity_defect, tol, s_gram,
                                                "thm_tight_iff forward");
    }
    bool backward_ok = true;
    if (identity_defect <= tol * s_gram) {
        backward_ok = detail::defect_within_band(tight_op_defect, tol, s_phi,
                                                 "thm_tight_iff backward");
    }
    v.conclusion_ok = forward_ok && backward_ok;
    return v;
}

/// Tight-frame transforms under powers of K: a tight K-frame composed with
/// (K^n)* is a tight K^(n+1)-frame, and a tight operator frame composed with
/// K* is a tight K-frame, with unchanged constants.
inline TheoremVerdict cor_power_shift(const ControlledSystem& sys, int n_pow,
                                      double tol = kTolRel) {
    if (n_pow < 0) throw InfeasibleSpec("cor_power_shift: power must be nonnegative");
    TheoremVerdict v;
    v.id = TheoremId::PowerShift;
    double worst = 0.0;
    const auto record = [&](const std::string& name, const Matrix& a, const Matrix& b) {
        const double defect = detail::commutator_defect(a, b);
        v.defects[name] = defect;
        worst = std::max(worst, defect / (tol * detail::commutator_scale(a, b)));
    };
    record("comm_K_C", sys.K.rep(), sys.C.op.rep());
    record("comm_K_Cp", sys.K.rep(), sys.Cp.op.rep());

    const MiddleOperator mid = middle_operator(sys);
    opframe::detail::gate_middle(mid, tol, false, "cor_power_shift");
    const Matrix phi = hermitian_part(mid.phi);
    const Matrix gram_k = opframe::detail::lower_gram(sys.K);
    const double s_phi = std::max(1.0, operator_norm(phi));

    const double trace_gram = detail::real_trace(gram_k);
    const bool case1_applicable = [&] {
        if (trace_gram <= 1e-300) return false;
        const double lambda = detail::real_trace(phi) / trace_gram;
        return operator_norm(phi - lambda * gram_k) <= tol * s_phi;
    }();
    const double lambda1 = case1_applicable ? detail::real_trace(phi) / trace_gram : 0.0;
    const double lambda2 = detail::real_trace(phi) / static_cast<double>(sys.dim());
    const bool case2_applicable =
        operator_norm(phi - lambda2 * Matrix::identity(sys.dim())) <= tol * s_phi;

    v.hypothesis_ok = worst <= 1.0 && (case1_applicable || case2_applicable);
    if (!v.hypothesis_ok) return v;

    bool ok = true;
    if (case1_applicable) {
        const ModuleOperator k_pow = detail::operator_power(sys.K, n_pow);
        OperatorFamily family;
        for (const auto& t : sys.family.members) {
            family.members.push_back(compose(t, adjoint(k_pow)));
        }
        const ModuleOperator k_next = compose(sys.K, k_pow);
        const ControlledSystem shifted{std::move(family), sys.C, sys.Cp, k_next};
        const Matrix phi1 = hermitian_part(middle_operator(shifted).phi);
        const Matrix gram1 = opframe::detail::lower_gram(k_next);
        const double defect = operator_norm(phi1 - lambda1 * gram1);
        v.witnesses["lambda_case1"] = lambda1;
        v.defects["case1_tight_defect"] = defect;
        ok = ok && detail::defect_within_band(defect, tol, std::max(1.0, operator_norm(phi1)),
                                              "cor_power_shift case 1");
    }
    if (case2_applicable) {
        OperatorFamily family;
        for (const auto& t : sys.family.members) {
            family.members.push_back(compose(t, adjoint(sys.K)));
        }
        const ControlledSystem shifted{std::move(family), sys.C, sys.Cp, sys.K};
        const Matrix phi2 = hermitian_part(middle_operator(shifted).phi);
        const double defect = operator_norm(phi2 - lambda2 * gram_k);
        v.witnesses["lambda_case2"] = lambda2;
        v.defects["case2_tight_defect"] = defect;
        ok = ok && detail::defect_within_band(defect, tol, std::max(1.0, operator_norm(phi2)),
                                              "cor_power_shift case 2");
    }
    v.conclusion_ok = ok;
    return v;
}

/// Best-bound sandwich for {T_i Q} with invertible Q whose inverse commutes
/// with K*: A||Q^-1||^-2 <= M <= A||Q||^2 and A||Q^-1||^-2 <= N <= B||Q||^2.
inline TheoremVerdict thm_perturbation(const ControlledSystem& sys, const ModuleOperator& q,
                                       double tol = kTolRel, double rank_tol = kRankTol) {
    TheoremVerdict v;
    v.id = TheoremId::Perturbation;
    const std::optional<double> mq = surjectivity_lower_bound(q, rank_tol);
    if (!mq) return v;  // Q not invertible: hypothesis fails

    const double q_norm = operator_norm(q.rep());
    const double q_inv_norm = 1.0 / std::sqrt(*mq);
    const Matrix q_inv = pseudo_inverse(q.rep(), rank_tol);
    const Matrix k_star = sys.K.rep().adjoint();
    const double comm = operator_norm(k_star * q_inv - q_inv * k_star);
    v.defects["comm_Qinv_Kstar"] = comm;

    const FrameBounds base = optimal_bounds(sys, rank_tol, tol);
    v.witnesses["A"] = base.lower;
    v.witnesses["B"] = base.upper;
    v.witnesses["q_norm"] = q_norm;
    v.witnesses["q_inv_norm"] = q_inv_norm;
    v.hypothesis_ok = std::isfinite(base.lower) &&
                      detail::frame_lower_ok(base, tol) &&
                      comm <= tol * std::max(1.0, operator_norm(k_star) * q_inv_norm);
    if (!v.hypothesis_ok) return v;

    OperatorFamily transformed;
    for (const auto& t : sys.family.members) transformed.members.push_back(compose(t, q));
    const ControlledSystem composed{std::move(transformed), sys.C, sys.Cp, sys.K};
    const FrameBounds best = optimal_bounds(composed, rank_tol, tol);
    const double m_best = best.lower;
    const double n_best = best.upper;
    v.witnesses["M"] = m_best;
    v.witnesses["N"] = n_best;

    const double floor = base.lower / (q_inv_norm * q_inv_norm);
    const double m_cap = base.lower * q_norm * q_norm;
    const double n_cap = base.upper * q_norm * q_norm;
    const double scale = std::max({1.0, base.lower, base.upper, m_best, n_best});
    bool ok = true;
    ok = ok && detail::violation_within_band(floor - m_best, tol, scale, "perturbation M lower");
    ok = ok && detail::violation_within_band(m_best - m_cap, tol, scale, "perturbation M upper");
    ok = ok && detail::violation_within_band(floor - n_best, tol, scale, "perturbation N lower");
    ok = ok && detail::violation_within_band(n_best - n_cap, tol, scale, "perturbation N upper");
    v.conclusion_ok = ok;
    return v;
}

}  // namespace opframe::theorems
