// Command-line front end: instance generation and I/O, frame verification,
// optimal bound computation, theorem suite runs, and the factorization report.
//
// Exit codes: 0 pass, 1 mathematical failure, 2 usage or parse error,
// 3 hypothesis or Hermiticity violation.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include <opframe/opframe.hpp>

namespace {

using opframe::io::json;

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitHypothesis = 3;

std::string read_input(const std::string& path) {
    if (path == "-") {
        std::ostringstream buffer;
        buffer << std::cin.rdbuf();
        return buffer.str();
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw opframe::ParseError("cannot open input file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

opframe::io::InstanceFile load_instance(const std::string& path) {
    return opframe::io::instance_from_json(opframe::io::parse_document(read_input(path)));
}

opframe::ModuleOperator load_operator(const std::string& path) {
    return opframe::io::operator_from_json(opframe::io::parse_document(read_input(path)), "");
}

std::uint64_t default_seed() {
    if (const char* env = std::getenv("OPFRAME_SEED")) {
        return std::strtoull(env, nullptr, 10);
    }
    return 42;
}

json bounds_to_json(const opframe::FrameBounds& bounds, double defect) {
    json out;
    out["A_opt"] = std::isfinite(bounds.lower) ? json(bounds.lower) : json("inf");
    out["B_opt"] = bounds.upper;
    out["hermitian_defect"] = defect;
    return out;
}

int run_gen(const opframe::lab::GenSpec& spec) {
    const opframe::lab::Instance instance = opframe::lab::generate(spec);
    json out;
    if (const auto* sys = std::get_if<opframe::ControlledSystem>(&instance)) {
        out = opframe::io::instance_to_json(*sys);
    } else {
        // Vector-frame instances ship as their operator lift with the raw
        // vectors attached, so every generated file verifies directly.
        const auto& vf = std::get<opframe::lab::VectorFrameInstance>(instance);
        const opframe::ControlledSystem lifted =
            opframe::lift_from_controlled_k_frame(vf.vectors, vf.C, vf.K);
        out = opframe::io::instance_to_json(lifted, &vf.vectors);
    }
    std::cout << out.dump() << "\n";
    return kExitPass;
}

int run_bounds(const std::string& file, double tol, double rank_tol, bool symmetrize) {
    const auto instance = load_instance(file);
    const opframe::FrameBounds bounds =
        opframe::optimal_bounds(instance.system, rank_tol, tol, symmetrize);
    const double defect = opframe::middle_operator(instance.system).hermitian_defect;
    json out = bounds_to_json(bounds, defect);
    if (symmetrize) out["symmetrized"] = true;
    std::cout << out.dump() << "\n";
    return kExitPass;
}

int run_verify(const std::string& file, std::optional<double> a, double b, double tol,
               bool symmetrize) {
    const auto instance = load_instance(file);
    json out;
    bool pass = true;
    if (a) {
        const opframe::BoundCheck chk =
            opframe::verify_bounds(instance.system, *a, b, tol, symmetrize);
        out["A"] = *a;
        out["lower"] = chk.lower_ok;
        out["upper"] = chk.upper_ok;
        out["hermitian_defect"] = chk.hermitian_defect;
        pass = chk.lower_ok && chk.upper_ok;
    } else {
        const opframe::BesselCheck chk =
            opframe::verify_bessel(instance.system, b, tol, symmetrize);
        out["lower"] = nullptr;
        out["upper"] = chk.upper_ok;
        out["hermitian_defect"] = chk.hermitian_defect;
        pass = chk.upper_ok;
    }
    out["B"] = b;
    if (symmetrize) out["symmetrized"] = true;
    std::cout << out.dump() << "\n";
    return pass ? kExitPass : kExitFail;
}

std::vector<opframe::theorems::TheoremId> resolve_theorems(const std::string& name) {
    if (name == "all") return opframe::theorems::all_theorems();
    const auto id = opframe::theorems::theorem_from_name(name);
    if (!id) {
        std::ostringstream known;
        known << "all";
        for (auto t : opframe::theorems::all_theorems()) {
            known << " " << opframe::theorems::theorem_name(t);
        }
        std::cerr << "unknown theorem id '" << name << "'; known ids: " << known.str() << "\n";
        std::exit(kExitUsage);
    }
    return {*id};
}

// Single-instance checker evaluation for `check --file`; witness operators
// that the instance does not carry are derived from the seed.
opframe::theorems::TheoremVerdict check_on_instance(opframe::theorems::TheoremId id,
                                                    const opframe::ControlledSystem& sys,
                                                    std::uint64_t seed, double tol) {
    using opframe::theorems::TheoremId;
    switch (id) {
        case TheoremId::OpframeIsKframe: return opframe::theorems::prop_opframe_is_kframe(sys, tol);
        case TheoremId::SurjectiveUpgrade:
            return opframe::theorems::prop_surjective_upgrade(sys, tol);
        case TheoremId::CommutingUpgrade:
            return opframe::theorems::prop_commuting_upgrade(sys, tol);
        case TheoremId::FrameIffSIffFactor:
            return opframe::theorems::thm_frame_iff_s_iff_factor(sys, tol);
        case TheoremId::ComposeQ: {
            opframe::Rng rng(seed);
            const double s = 0.5 + 1.5 * rng.uniform01();
            const opframe::ModuleOperator q(
                sys.n(), sys.d(), s * opframe::Matrix::identity(sys.dim()));
            return opframe::theorems::thm_compose_q(sys, q, tol);
        }
        case TheoremId::TightIff: {
            const opframe::Matrix phi =
                opframe::hermitian_part(opframe::middle_operator(sys).phi);
            const opframe::Matrix gram = sys.K.rep().adjoint() * sys.K.rep();
            double tr_phi = 0.0, tr_gram = 0.0;
            for (std::size_t i = 0; i < phi.rows(); ++i) {
                tr_phi += phi(i, i).real();
                tr_gram += gram(i, i).real();
            }
            const double a1 = (tr_gram > 0.0) ? tr_phi / tr_gram : 1.0;
            const double a2 = tr_phi / static_cast<double>(sys.dim());
            return opframe::theorems::thm_tight_iff(sys, a1, a2, tol);
        }
        case TheoremId::PowerShift:
            return opframe::theorems::cor_power_shift(sys, 1, tol);
        case TheoremId::Perturbation: {
            opframe::Rng rng(seed);
            const double s = 0.5 + 1.5 * rng.uniform01();
            const opframe::ModuleOperator q(
                sys.n(), sys.d(), s * opframe::Matrix::identity(sys.dim()));
            return opframe::theorems::thm_perturbation(sys, q, tol);
        }
    }
    throw opframe::InfeasibleSpec("check: unknown theorem");
}

int run_check(const std::string& theorem, int trials, std::uint64_t seed, double tol,
              const std::string& file, bool quiet) {
    const auto ids = resolve_theorems(theorem);
    opframe::lab::SuiteSummary summary;
    json verdicts = json::array();
    if (!file.empty()) {
        const auto instance = load_instance(file);
        summary.seed = seed;
        summary.trials = 1;
        summary.tol = tol;
        for (auto id : ids) {
            opframe::lab::TheoremRun run;
            run.id = id;
            run.trials = 1;
            try {
                const auto verdict = check_on_instance(id, instance.system, seed, tol);
                verdicts.push_back(opframe::io::verdict_to_json(verdict));
                for (const auto& [name, value] : verdict.defects) {
                    run.max_defect = std::max(run.max_defect, value);
                }
                if (verdict.hypothesis_ok && verdict.conclusion_ok) {
                    ++run.passes;
                } else if (!verdict.hypothesis_ok) {
                    ++run.errors;
                    run.failing_seeds.push_back(seed);
                } else {
                    ++run.failures;
                    run.failing_seeds.push_back(seed);
                }
            } catch (const opframe::Inconclusive&) {
                ++run.inconclusive;
                run.failing_seeds.push_back(seed);
            } catch (const opframe::Error&) {
                ++run.errors;
                run.failing_seeds.push_back(seed);
            }
            if (run.failures > 0 || run.errors > 0 || run.inconclusive > 0) {
                summary.all_ok = false;
            }
            summary.runs.push_back(std::move(run));
        }
    } else {
        summary = opframe::lab::run_suite(ids, trials, seed, tol);
    }
    json out = opframe::io::summary_to_json(summary);
    if (!file.empty()) out["verdicts"] = std::move(verdicts);
    std::cout << out.dump() << "\n";
    if (!quiet) opframe::lab::print_table(summary, std::cerr);
    return summary.all_ok ? kExitPass : kExitFail;
}

int run_douglas(const std::string& tprime_file, const std::string& t_file, double tol,
                double rank_tol) {
    const opframe::ModuleOperator t_prime = load_operator(tprime_file);
    const opframe::ModuleOperator t = load_operator(t_file);
    const auto report = opframe::douglas::equivalence_report(t_prime, t, tol, rank_tol);
    std::cout << opframe::io::report_to_json(report).dump() << "\n";
    return report.consistent ? kExitPass : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"controlled K-operator frame toolbox"};
    app.require_subcommand(1);

    // gen
    auto* gen = app.add_subcommand("gen", "generate a seeded instance on stdout");
    opframe::lab::GenSpec spec;
    spec.seed = default_seed();
    std::string mode_str = "general";
    std::int64_t rank_flag = -1;
    gen->add_option("--n", spec.n, "algebra dimension");
    gen->add_option("--d", spec.d, "module rank");
    gen->add_option("--m", spec.m, "family size / vector count");
    gen->add_option("--mode", mode_str,
                    "general|commuting_diagonal|parseval|tight|rank_deficient_K|"
                    "controlled_k_vector_frame");
    gen->add_option("--seed", spec.seed, "PRNG seed (default from OPFRAME_SEED or 42)");
    gen->add_option("--eps", spec.eps, "GL+ spectral floor");
    gen->add_option("--lambda", spec.tight_lambda, "tight-mode constant");
    gen->add_option("--rank", rank_flag, "prescribed rank for rank_deficient_K");

    // bounds
    auto* bounds = app.add_subcommand("bounds", "optimal frame bounds of an instance");
    std::string bounds_file;
    double bounds_tol = opframe::kTolRel;
    double bounds_rank_tol = opframe::kRankTol;
    bool bounds_symmetrize = false;
    bounds->add_option("file", bounds_file, "instance file ('-' for stdin)")->required();
    bounds->add_option("--tol", bounds_tol, "order-check tolerance");
    bounds->add_option("--rank-tol", bounds_rank_tol, "rank threshold");
    bounds->add_flag("--symmetrize", bounds_symmetrize,
                     "symmetrize a non-Hermitian middle operator instead of failing");

    // verify
    auto* verify = app.add_subcommand("verify", "verify frame bounds of an instance");
    std::string verify_file;
    double verify_a = 0.0, verify_b = 1.0;
    double verify_tol = opframe::kTolRel;
    bool verify_symmetrize = false;
    verify->add_option("file", verify_file, "instance file ('-' for stdin)")->required();
    auto* a_opt = verify->add_option("--A", verify_a, "lower bound (omit for Bessel-only)");
    verify->add_option("--B", verify_b, "upper bound")->required();
    verify->add_option("--tol", verify_tol, "order-check tolerance");
    verify->add_flag("--symmetrize", verify_symmetrize,
                     "symmetrize a non-Hermitian middle operator instead of failing");

    // check
    auto* check = app.add_subcommand("check", "run theorem checkers on seeded instances");
    std::string check_theorem;
    int check_trials = 100;
    std::uint64_t check_seed = default_seed();
    double check_tol = opframe::kTolRel;
    std::string check_file;
    bool check_quiet = false;
    check->add_option("--theorem", check_theorem, "theorem id or 'all'")->required();
    check->add_option("--trials", check_trials, "instances per theorem");
    check->add_option("--seed", check_seed, "suite seed (default from OPFRAME_SEED or 42)");
    check->add_option("--tol", check_tol, "verdict tolerance");
    check->add_option("--file", check_file, "run once on this instance instead of generating");
    check->add_flag("--quiet", check_quiet, "suppress the human-readable table on stderr");

    // douglas
    auto* doug = app.add_subcommand("douglas", "factorization equivalence report for (T', T)");
    std::string doug_tprime, doug_t;
    double doug_tol = opframe::kTolRel;
    double doug_rank_tol = opframe::kRankTol;
    doug->add_option("tprime", doug_tprime, "operator file for T' ('-' for stdin)")->required();
    doug->add_option("t", doug_t, "operator file for T")->required();
    doug->add_option("--tol", doug_tol, "order-check tolerance");
    doug->add_option("--rank-tol", doug_rank_tol, "rank threshold");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (gen->parsed()) {
            const auto mode = opframe::lab::mode_from_name(mode_str);
            if (!mode) {
                std::cerr << "unknown mode '" << mode_str << "'\n";
                return kExitUsage;
            }
            spec.mode = *mode;
            if (rank_flag >= 0) spec.k_rank = static_cast<std::size_t>(rank_flag);
            return run_gen(spec);
        }
        if (bounds->parsed()) {
            return run_bounds(bounds_file, bounds_tol, bounds_rank_tol, bounds_symmetrize);
        }
        if (verify->parsed()) {
            std::optional<double> a;
            if (a_opt->count() > 0) a = verify_a;
            return run_verify(verify_file, a, verify_b, verify_tol, verify_symmetrize);
        }
        if (check->parsed()) {
            return run_check(check_theorem, check_trials, check_seed, check_tol, check_file,
                             check_quiet);
        }
        if (doug->parsed()) {
            return run_douglas(doug_tprime, doug_t, doug_tol, doug_rank_tol);
        }
    } catch (const opframe::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const opframe::InfeasibleSpec& e) {
        std::cerr << "infeasible request: " << e.what() << "\n";
        return kExitUsage;
    } catch (const opframe::NonHermitianMiddle& e) {
        std::cerr << "hermiticity violation: " << e.what() << "\n";
        return kExitHypothesis;
    } catch (const opframe::Error& e) {
        std::cerr << "hypothesis violation: " << e.what() << "\n";
        return kExitHypothesis;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
