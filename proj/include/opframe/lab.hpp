#pragma once

#include <cstdint>
#include <iomanip>
#include <optional>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include "frames.hpp"
#include "rng.hpp"
#include "theorems.hpp"

namespace opframe::lab {

enum class GenMode {
    General,
    CommutingDiagonal,
    Parseval,
    Tight,
    RankDeficientK,
    ControlledKVectorFrame,
};

inline const char* mode_name(GenMode mode) {
    switch (mode) {
        case GenMode::General: return "general";
        case GenMode::CommutingDiagonal: return "commuting_diagonal";
        case GenMode::Parseval: return "parseval";
        case GenMode::Tight: return "tight";
        case GenMode::RankDeficientK: return "rank_deficient_K";
        case GenMode::ControlledKVectorFrame: return "controlled_k_vector_frame";
    }
    return "unknown";
}

inline std::optional<GenMode> mode_from_name(const std::string& name) {
    for (GenMode m : {GenMode::General, GenMode::CommutingDiagonal, GenMode::Parseval,
                      GenMode::Tight, GenMode::RankDeficientK, GenMode::ControlledKVectorFrame}) {
        if (name == mode_name(m)) return m;
    }
    return std::nullopt;
}

inline constexpr std::size_t kDefaultRank = static_cast<std::size_t>(-1);

struct GenSpec {
    std::size_t n = 1;
    std::size_t d = 2;
    std::size_t m = 1;
    GenMode mode = GenMode::General;
    std::uint64_t seed = 0;
    double eps = 0.1;               // GL+ spectral floor
    double tight_lambda = 1.0;      // tight-mode constant
    std::size_t k_rank = kDefaultRank;  // rank_deficient_K: prescribed rank (< n*d)
};

/// Vector-frame instance: a C-controlled K-frame of module vectors together
/// with certified constants.
struct VectorFrameInstance {
    std::vector<ModuleVector> vectors;
    GLPlusOperator C;
    ModuleOperator K;
    double lower_bound;
    double upper_bound;
};

using Instance = std::variant<ControlledSystem, VectorFrameInstance>;

namespace detail {

inline Matrix random_gaussian_matrix(std::size_t rows, std::size_t cols, Rng& rng) {
    Matrix g(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) g(i, j) = rng.complex_gaussian();
    return g;
}

/// Haar-ish random unitary: Gram-Schmidt with one re-orthogonalization pass
/// on a Gaussian matrix.
inline Matrix random_unitary(std::size_t dim, Rng& rng) {
    Matrix g = random_gaussian_matrix(dim, dim, rng);
    for (std::size_t j = 0; j < dim; ++j) {
        for (int pass = 0; pass < 2; ++pass) {
            for (std::size_t i = 0; i < j; ++i) {
                Complex proj{0.0, 0.0};
                for (std::size_t k = 0; k < dim; ++k) proj += std::conj(g(k, i)) * g(k, j);
                for (std::size_t k = 0; k < dim; ++k) g(k, j) -= proj * g(k, i);
            }
        }
        double norm = 0.0;
        for (std::size_t k = 0; k < dim; ++k) norm += std::norm(g(k, j));
        norm = std::sqrt(norm);
        for (std::size_t k = 0; k < dim; ++k) g(k, j) /= norm;
    }
    return g;
}

inline Matrix conjugated_diagonal(const Matrix& u, const std::vector<Complex>& diag) {
    const std::size_t dim = u.rows();
    Matrix scaled(dim, dim);
    for (std::size_t j = 0; j < dim; ++j)
        for (std::size_t i = 0; i < dim; ++i) scaled(i, j) = u(i, j) * diag[j];
    return scaled * u.adjoint();
}

inline std::vector<Complex> real_to_complex(const std::vector<double>& v) {
    std::vector<Complex> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = Complex{v[i], 0.0};
    return out;
}

/// Shared draw of a simultaneously diagonalizable system: one random unitary
/// frame, real positive controller spectra, complex K and member spectra.
/// Draw order is fixed so instances are reproducible byte for byte.
struct CommutingDraw {
    std::size_t n, d, m;
    Matrix u;
    std::vector<double> c_diag, cp_diag;
    std::vector<Complex> k_diag;
    std::vector<std::vector<Complex>> t_diags;
    Rng rng;  // stream continues for mode-specific extras

    CommutingDraw(std::size_t n_, std::size_t d_, std::size_t m_, std::uint64_t seed, double eps)
        : n(n_), d(d_), m(m_), u(0, 0), rng(seed) {
        const std::size_t dim = n * d;
        u = random_unitary(dim, rng);
        c_diag.resize(dim);
        cp_diag.resize(dim);
        for (auto& v : c_diag) v = eps + 1.5 * rng.uniform01();
        for (auto& v : cp_diag) v = eps + 1.5 * rng.uniform01();
        k_diag.resize(dim);
        for (auto& v : k_diag) {
            v = std::polar(0.4 + 1.2 * rng.uniform01(),
                           2.0 * 3.141592653589793 * rng.uniform01());
        }
        t_diags.assign(m, std::vector<Complex>(dim));
        for (auto& row : t_diags) {
            for (auto& v : row) {
                v = std::polar(0.3 + 1.2 * rng.uniform01(),
                               2.0 * 3.141592653589793 * rng.uniform01());
            }
        }
    }

    std::vector<Complex> draw_spectrum(double radius_lo, double radius_hi) {
        std::vector<Complex> out(n * d);
        for (auto& v : out) {
            v = std::polar(radius_lo + (radius_hi - radius_lo) * rng.uniform01(),
                           2.0 * 3.141592653589793 * rng.uniform01());
        }
        return out;
    }

    ControlledSystem assemble() const {
        const std::size_t dim = n * d;
        OperatorFamily family;
        for (const auto& diag : t_diags) {
            family.members.emplace_back(n, d, conjugated_diagonal(u, diag));
        }
        GLPlusOperator c = make_glplus(
            ModuleOperator(n, d, hermitian_part(conjugated_diagonal(u, real_to_complex(c_diag)))));
        GLPlusOperator cp = make_glplus(
            ModuleOperator(n, d, hermitian_part(conjugated_diagonal(u, real_to_complex(cp_diag)))));
        ModuleOperator k(n, d, conjugated_diagonal(u, k_diag));
        ControlledSystem sys{std::move(family), std::move(c), std::move(cp), std::move(k)};
        check_commuting_contract(sys);
        (void)dim;
        return sys;
    }

    /// Scales every member spectrum so that phi matches the target diagonal
    /// profile target_j = c_j * g_j * cp_j after rescaling.
    void rescale_members(const std::vector<double>& target) {
        const std::size_t dim = n * d;
        for (std::size_t j = 0; j < dim; ++j) {
            double g = 0.0;
            for (const auto& row : t_diags) g += std::norm(row[j]);
            const double factor = std::sqrt(target[j] / (g * c_diag[j] * cp_diag[j]));
            for (auto& row : t_diags) row[j] *= factor;
        }
    }

    static void check_commuting_contract(const ControlledSystem& sys) {
        std::vector<const Matrix*> reps{&sys.C.op.rep(), &sys.Cp.op.rep(), &sys.K.rep()};
        for (const auto& t : sys.family.members) reps.push_back(&t.rep());
        for (std::size_t i = 0; i < reps.size(); ++i) {
            for (std::size_t j = i + 1; j < reps.size(); ++j) {
                if (commutator_norm(*reps[i], *reps[j]) > 1e-12) {
                    throw std::logic_error("lab: commuting-mode contract violated");
                }
            }
        }
    }
};

inline void check_spec(const GenSpec& spec) {
    if (spec.n < 1 || spec.d < 1 || spec.m < 1) {
        throw InfeasibleSpec("lab::generate: sizes must be at least 1");
    }
    if (spec.eps <= 0.0) throw InfeasibleSpec("lab::generate: eps must be positive");
    if (spec.mode == GenMode::Tight && spec.tight_lambda <= 0.0) {
        throw InfeasibleSpec("lab::generate: tight constant must be positive");
    }
}

}  // namespace detail

/// Deterministic instance generator.  Mode contracts are checked inline;
/// a violation is a generator bug, not an input error.
inline Instance generate(const GenSpec& spec) {
    detail::check_spec(spec);
    const std::size_t n = spec.n, d = spec.d, m = spec.m;
    const std::size_t dim = n * d;

    switch (spec.mode) {
        case GenMode::General: {
            Rng rng(spec.seed);
            const double scale = 1.0 / std::sqrt(static_cast<double>(dim));
            OperatorFamily family;
            for (std::size_t i = 0; i < m; ++i) {
                family.members.emplace_back(
                    n, d, scale * detail::random_gaussian_matrix(dim, dim, rng));
            }
            GLPlusOperator c = glplus_from_factor(
                n, d, scale * detail::random_gaussian_matrix(dim, dim, rng), spec.eps);
            GLPlusOperator cp = glplus_from_factor(
                n, d, scale * detail::random_gaussian_matrix(dim, dim, rng), spec.eps);
            ModuleOperator k(n, d, scale * detail::random_gaussian_matrix(dim, dim, rng));
            return ControlledSystem{std::move(family), std::move(c), std::move(cp), std::move(k)};
        }

        case GenMode::CommutingDiagonal: {
            detail::CommutingDraw draw(n, d, m, spec.seed, spec.eps);
            return draw.assemble();
        }

        case GenMode::Parseval: {
            detail::CommutingDraw draw(n, d, m, spec.seed, spec.eps);
            draw.rescale_members(std::vector<double>(dim, 1.0));
            ControlledSystem sys = draw.assemble();
            sys.K = ModuleOperator::identity(n, d);
            const MiddleOperator mid = middle_operator(sys);
            if (operator_norm(hermitian_part(mid.phi) - Matrix::identity(dim)) > 1e-9) {
                throw std::logic_error("lab: parseval contract violated");
            }
            return sys;
        }

        case GenMode::Tight: {
            detail::CommutingDraw draw(n, d, m, spec.seed, spec.eps);
            std::vector<double> target(dim);
            for (std::size_t j = 0; j < dim; ++j) {
                target[j] = spec.tight_lambda * std::norm(draw.k_diag[j]);
            }
            draw.rescale_members(target);
            ControlledSystem sys = draw.assemble();
            const Matrix phi = hermitian_part(middle_operator(sys).phi);
            const Matrix gram = sys.K.rep().adjoint() * sys.K.rep();
            const double defect = operator_norm(phi - spec.tight_lambda * gram);
            if (defect > 1e-9 * std::max(1.0, operator_norm(phi))) {
                throw std::logic_error("lab: tight contract violated");
            }
            return sys;
        }

        case GenMode::RankDeficientK: {
            const std::size_t rank = (spec.k_rank == kDefaultRank) ? dim - 1 : spec.k_rank;
            if (rank >= dim) {
                throw InfeasibleSpec("lab::generate: rank_deficient_K needs rank < n*d");
            }
            detail::CommutingDraw draw(n, d, m, spec.seed, spec.eps);
            std::vector<std::size_t> order(dim);
            for (std::size_t i = 0; i < dim; ++i) order[i] = i;
            for (std::size_t i = dim; i > 1; --i) {
                std::swap(order[i - 1], order[draw.rng.below(i)]);
            }
            for (std::size_t i = rank; i < dim; ++i) draw.k_diag[order[i]] = Complex{0.0, 0.0};
            ControlledSystem sys = draw.assemble();
            if (numerical_rank(sys.K.rep()) != rank) {
                throw std::logic_error("lab: rank_deficient_K contract violated");
            }
            return sys;
        }

        case GenMode::ControlledKVectorFrame: {
            if (m > d) {
                throw InfeasibleSpec("lab::generate: vector count must not exceed module rank d");
            }
            Rng rng(spec.seed);
            std::vector<ModuleVector> vectors;
            Matrix gram(dim, dim);
            for (std::size_t i = 0; i < m; ++i) {
                ModuleVector x = ModuleVector::from_stacked(
                    n, d, detail::random_gaussian_matrix(n, dim, rng));
                gram = gram + x.stacked().adjoint() * x.stacked();
                vectors.push_back(std::move(x));
            }
            const auto eig = opframe::detail::jacobi_hermitian(hermitian_part(gram));
            const double lam_max = eig.eigenvalues.back();
            if (lam_max <= 0.0) throw std::logic_error("lab: degenerate vector gram");

            std::vector<Complex> f_diag(dim), k_diag(dim);
            for (auto& v : f_diag) v = Complex{spec.eps + 1.5 * rng.uniform01(), 0.0};
            for (auto& v : k_diag) {
                v = std::polar(0.4 + 1.2 * rng.uniform01(),
                               2.0 * 3.141592653589793 * rng.uniform01());
            }
            // K lives in the eigenframe of the gram and vanishes on its null
            // directions, so the lower inequality has a positive constant.
            for (std::size_t j = 0; j < dim; ++j) {
                if (eig.eigenvalues[j] <= kRankTol * lam_max) k_diag[j] = Complex{0.0, 0.0};
            }
            const Matrix& v_frame = eig.eigenvectors;
            GLPlusOperator c = make_glplus(ModuleOperator(
                n, d, hermitian_part(detail::conjugated_diagonal(v_frame, f_diag))));
            ModuleOperator k(n, d, detail::conjugated_diagonal(v_frame, k_diag));

            double lower = std::numeric_limits<double>::infinity();
            double upper = 0.0;
            for (std::size_t j = 0; j < dim; ++j) {
                upper = std::max(upper, eig.eigenvalues[j] * f_diag[j].real());
                if (std::abs(k_diag[j]) > 0.0) {
                    lower = std::min(lower, eig.eigenvalues[j] / std::norm(k_diag[j]));
                }
            }
            if (!std::isfinite(lower)) lower = upper;  // K = 0 never happens here
            lower = std::min(lower, upper);

            const BoundCheck chk = verify_c_controlled_k_frame(vectors, c, k, lower, upper, 1e-9);
            if (!chk.lower_ok || !chk.upper_ok) {
                throw std::logic_error("lab: controlled_k_vector_frame contract violated");
            }
            return VectorFrameInstance{std::move(vectors), std::move(c), std::move(k), lower,
                                       upper};
        }
    }
    throw InfeasibleSpec("lab::generate: unknown mode");
}

/// System plus an extra commuting witness operator, for the checkers that
/// take a Q.
struct SystemWithWitness {
    ControlledSystem sys;
    ModuleOperator q;
};

/// Commuting-diagonal system with Q drawn in the same frame.
inline SystemWithWitness commuting_with_witness(std::size_t n, std::size_t d, std::size_t m,
                                                std::uint64_t seed, double eps = 0.1) {
    detail::CommutingDraw draw(n, d, m, seed, eps);
    const std::vector<Complex> q_diag = draw.draw_spectrum(0.5, 2.0);
    ControlledSystem sys = draw.assemble();
    ModuleOperator q(n, d, detail::conjugated_diagonal(draw.u, q_diag));
    return {std::move(sys), std::move(q)};
}

/// Perturbation pack: K a diagonal unitary in the shared frame (so the
/// sandwich has slack on both ends) and Q invertible in the same frame.
inline SystemWithWitness perturbation_pack(std::size_t n, std::size_t d, std::size_t m,
                                           std::uint64_t seed, double eps = 0.1) {
    detail::CommutingDraw draw(n, d, m, seed, eps);
    std::vector<Complex> k_diag(n * d);
    for (auto& v : k_diag) v = std::polar(1.0, 2.0 * 3.141592653589793 * draw.rng.uniform01());
    const std::vector<Complex> q_diag = draw.draw_spectrum(0.5, 2.0);
    draw.k_diag = k_diag;
    ControlledSystem sys = draw.assemble();
    ModuleOperator q(n, d, detail::conjugated_diagonal(draw.u, q_diag));
    return {std::move(sys), std::move(q)};
}

/// Tight system with K a scalar multiple of a diagonal unitary; returns the
/// tight K-frame constant A1 and the induced operator-frame constant
/// A2 = A1 t^2.
struct TightUnitaryPack {
    ControlledSystem sys;
    double a1;
    double a2;
};

inline TightUnitaryPack tight_unitary_pack(std::size_t n, std::size_t d, std::size_t m,
                                           std::uint64_t seed, double lambda, double eps = 0.1) {
    detail::CommutingDraw draw(n, d, m, seed, eps);
    const double t = 0.5 + 1.5 * draw.rng.uniform01();
    for (auto& v : draw.k_diag) {
        v = std::polar(t, 2.0 * 3.141592653589793 * draw.rng.uniform01());
    }
    std::vector<double> target(n * d, lambda * t * t);
    draw.rescale_members(target);
    ControlledSystem sys = draw.assemble();
    return {std::move(sys), lambda, lambda * t * t};
}

/// Per-theorem tally of a batch run.
struct TheoremRun {
    theorems::TheoremId id = theorems::TheoremId::OpframeIsKframe;
    int trials = 0;
    int passes = 0;
    int failures = 0;
    int inconclusive = 0;
    int errors = 0;
    double max_defect = 0.0;
    std::vector<std::uint64_t> failing_seeds;
};

struct SuiteSummary {
    std::uint64_t seed = 0;
    int trials = 0;
    double tol = kTolRel;
    std::vector<TheoremRun> runs;
    bool all_ok = true;
};

/// Builds one hypothesis-satisfying instance for the given checker and runs
/// it.  Sizes are drawn per trial within n <= 2, d <= 4, m <= 6.
inline theorems::TheoremVerdict run_single_trial(theorems::TheoremId id,
                                                 std::uint64_t instance_seed, double tol) {
    Rng meta(instance_seed);
    const std::size_t n = 1 + meta.below(2);
    const std::size_t d = 2 + meta.below(3);
    const std::size_t m = 1 + meta.below(6);
    const std::uint64_t sub = meta.next_u64();

    using theorems::TheoremId;
    switch (id) {
        case TheoremId::OpframeIsKframe: {
            auto sys = std::get<ControlledSystem>(
                generate({n, d, m, GenMode::CommutingDiagonal, sub}));
            return theorems::prop_opframe_is_kframe(sys, tol);
        }
        case TheoremId::SurjectiveUpgrade: {
            auto sys = std::get<ControlledSystem>(
                generate({n, d, m, GenMode::CommutingDiagonal, sub}));
            return theorems::prop_surjective_upgrade(sys, tol);
        }
        case TheoremId::CommutingUpgrade: {
            auto sys = std::get<ControlledSystem>(
                generate({n, d, m, GenMode::CommutingDiagonal, sub}));
            return theorems::prop_commuting_upgrade(sys, tol);
        }
        case TheoremId::FrameIffSIffFactor: {
            auto sys = std::get<ControlledSystem>(
                generate({n, d, m, GenMode::CommutingDiagonal, sub}));
            return theorems::thm_frame_iff_s_iff_factor(sys, tol);
        }
        case TheoremId::ComposeQ: {
            auto pack = commuting_with_witness(n, d, m, sub);
            return theorems::thm_compose_q(pack.sys, pack.q, tol);
        }
        case TheoremId::TightIff: {
            auto pack = tight_unitary_pack(n, d, m, sub, 1.0);
            return theorems::thm_tight_iff(pack.sys, pack.a1, pack.a2, tol);
        }
        case TheoremId::PowerShift: {
            GenSpec spec{n, d, m, GenMode::Tight, sub};
            auto sys = std::get<ControlledSystem>(generate(spec));
            const int n_pow = static_cast<int>(Rng(sub).below(3));
            return theorems::cor_power_shift(sys, n_pow, tol);
        }
        case TheoremId::Perturbation: {
            auto pack = perturbation_pack(n, d, m, sub);
            return theorems::thm_perturbation(pack.sys, pack.q, tol);
        }
    }
    throw InfeasibleSpec("run_single_trial: unknown theorem");
}

inline SuiteSummary run_suite(const std::vector<theorems::TheoremId>& suite, int trials,
                              std::uint64_t seed, double tol = kTolRel) {
    if (trials < 1) throw InfeasibleSpec("run_suite: trials must be >= 1");
    SuiteSummary summary;
    summary.seed = seed;
    summary.trials = trials;
    summary.tol = tol;
    for (std::size_t t_idx = 0; t_idx < suite.size(); ++t_idx) {
        TheoremRun run;
        run.id = suite[t_idx];
        run.trials = trials;
        const std::uint64_t theorem_seed = derive_seed(seed, t_idx);
        for (int trial = 0; trial < trials; ++trial) {
            const std::uint64_t instance_seed = derive_seed(theorem_seed, trial);
            try {
                const theorems::TheoremVerdict verdict =
                    run_single_trial(run.id, instance_seed, tol);
                for (const auto& [name, value] : verdict.defects) {
                    run.max_defect = std::max(run.max_defect, value);
                }
                if (verdict.hypothesis_ok && verdict.conclusion_ok) {
                    ++run.passes;
                } else if (!verdict.hypothesis_ok) {
                    ++run.errors;  // generator failed to satisfy the hypotheses
                    run.failing_seeds.push_back(instance_seed);
                } else {
                    ++run.failures;
                    run.failing_seeds.push_back(instance_seed);
                }
            } catch (const Inconclusive&) {
                ++run.inconclusive;
                run.failing_seeds.push_back(instance_seed);
            } catch (const Error&) {
                ++run.errors;
                run.failing_seeds.push_back(instance_seed);
            }
        }
        if (run.failures > 0 || run.errors > 0 || run.inconclusive > 0) summary.all_ok = false;
        summary.runs.push_back(std::move(run));
    }
    return summary;
}

inline void print_table(const SuiteSummary& summary, std::ostream& os) {
    os << "theorem                  trials  pass  fail  inconcl  error  max_defect\n";
    for (const auto& run : summary.runs) {
        os << std::left << std::setw(25) << theorems::theorem_name(run.id) << std::right
           << std::setw(6) << run.trials << std::setw(6) << run.passes << std::setw(6)
           << run.failures << std::setw(9) << run.inconclusive << std::setw(7) << run.errors
           << "  " << std::scientific << std::setprecision(2) << run.max_defect
           << std::defaultfloat << "\n";
    }
    os << (summary.all_ok ? "suite: all clear\n" : "suite: FAILURES PRESENT\n");
}

}  // namespace opframe::lab
