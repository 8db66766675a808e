#include <catch2/catch.hpp>

#include <opframe/operators.hpp>

#include "oracles.hpp"
#include "test_support.hpp"

using namespace opframe;
using support::random_matrix;
using support::real_diag;

namespace {

ModuleOperator random_operator(std::size_t n, std::size_t d, std::uint64_t seed) {
    return ModuleOperator(n, d, random_matrix(n * d, n * d, seed));
}

/// Invertible operator with singular values in [lo, hi]; the bounded spread
/// keeps the Rayleigh sampling oracle sound.
ModuleOperator bounded_spread_operator(std::size_t n, std::size_t d, double lo, double hi,
                                       std::uint64_t seed) {
    const std::size_t dim = n * d;
    const Matrix u = support::random_unitary(dim, seed);
    const Matrix v = support::random_unitary(dim, seed + 1);
    Rng rng(seed + 2);
    Matrix s(dim, dim);
    for (std::size_t i = 0; i < dim; ++i) {
        s(i, i) = Complex{lo + (hi - lo) * rng.uniform01(), 0.0};
    }
    return ModuleOperator(n, d, u * s * v.adjoint());
}

ModuleOperator rank_deficient_operator(std::size_t n, std::size_t d, std::size_t rank,
                                       std::uint64_t seed) {
    const std::size_t dim = n * d;
    const Matrix left = random_matrix(dim, rank, seed);
    const Matrix right = random_matrix(rank, dim, seed + 1);
    return ModuleOperator(n, d, left * right);
}

}  // namespace

TEST_CASE("apply on simple representations") {
    const ModuleVector x = random_vector(2, 2, 3);
    CHECK((apply(ModuleOperator::identity(2, 2), x).stacked() - x.stacked()).max_abs() == 0.0);

    const ModuleOperator twice(2, 2, 2.0 * Matrix::identity(4));
    CHECK((apply(twice, x).stacked() - (2.0 * x).stacked()).max_abs() <= 1e-15);
}

TEST_CASE("apply over the scalar algebra is the row-vector product") {
    const std::size_t d = 3;
    const ModuleOperator t = random_operator(1, d, 5);
    const ModuleVector x = random_vector(1, d, 6);
    const ModuleVector y = apply(t, x);
    for (std::size_t j = 0; j < d; ++j) {
        Complex acc{0.0, 0.0};
        for (std::size_t k = 0; k < d; ++k) acc += x.stacked()(0, k) * t.rep()(k, j);
        CHECK(std::abs(y.stacked()(0, j) - acc) <= 1e-14);
    }
}

TEST_CASE("apply is A-linear on sampled inputs") {
    for (std::uint64_t seed = 0; seed < 15; ++seed) {
        const ModuleOperator t = random_operator(2, 3, 7000 + seed);
        const Matrix a = random_matrix(2, 2, 7100 + seed);
        const ModuleVector x = random_vector(2, 3, 7200 + seed);
        const ModuleVector lhs = apply(t, left_mul(a, x));
        const ModuleVector rhs = left_mul(a, apply(t, x));
        CHECK((lhs.stacked() - rhs.stacked()).max_abs() <= 1e-12);
    }
}

TEST_CASE("adjoint is an involution fixing Hermitian representations") {
    const ModuleOperator h(2, 2, support::random_hermitian(4, 8));
    CHECK((adjoint(h).rep() - h.rep()).max_abs() <= 1e-15);

    const ModuleOperator t = random_operator(2, 2, 9);
    CHECK((adjoint(adjoint(t)).rep() - t.rep()).max_abs() == 0.0);
}

TEST_CASE("adjoint satisfies the inner-product pairing") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const ModuleOperator t = random_operator(2, 3, 100 + seed);
        const ModuleVector x = random_vector(2, 3, 200 + seed);
        const ModuleVector y = random_vector(2, 3, 300 + seed);
        const Matrix lhs = inner_product(apply(t, x), y);
        const Matrix rhs = inner_product(x, apply(adjoint(t), y));
        CHECK(operator_norm(lhs - rhs) <= 1e-10);
    }
}

TEST_CASE("compose applies right-to-left and reverses representations") {
    const ModuleOperator t = random_operator(1, 3, 11);
    CHECK((compose(t, ModuleOperator::identity(1, 3)).rep() - t.rep()).max_abs() == 0.0);

    for (std::uint64_t seed = 0; seed < 15; ++seed) {
        const ModuleOperator s = random_operator(2, 2, 400 + seed);
        const ModuleOperator t2 = random_operator(2, 2, 500 + seed);
        const ModuleVector x = random_vector(2, 2, 600 + seed);
        const ModuleVector via_compose = apply(compose(s, t2), x);
        const ModuleVector via_apply = apply(s, apply(t2, x));
        CHECK((via_compose.stacked() - via_apply.stacked()).max_abs() <= 1e-12);
        // anti-homomorphism at the representation level
        CHECK((compose(s, t2).rep() - t2.rep() * s.rep()).max_abs() == 0.0);
        // (S o T)* = T* o S*
        CHECK((adjoint(compose(s, t2)).rep() - compose(adjoint(t2), adjoint(s)).rep()).max_abs() <=
              1e-12);
    }
}

TEST_CASE("K K* is positive by the anti-homomorphism rule") {
    const ModuleOperator k = random_operator(2, 2, 21);
    const ModuleOperator kk = compose(k, adjoint(k));
    CHECK((kk.rep() - k.rep().adjoint() * k.rep()).max_abs() <= 1e-15);
    CHECK(is_positive(kk));
}

TEST_CASE("self-adjointness and positivity predicates") {
    const ModuleOperator diag(1, 2, real_diag({1.0, 2.0}));
    CHECK(is_self_adjoint(diag));
    CHECK(is_positive(diag));

    Matrix nil(2, 2);
    nil(0, 1) = Complex{1.0, 0.0};
    const ModuleOperator bad(1, 2, nil);
    CHECK_FALSE(is_self_adjoint(bad));
    CHECK_FALSE(is_positive(bad));

    const ModuleOperator g = random_operator(2, 2, 33);
    CHECK(is_positive(compose(adjoint(g), g)));
}

TEST_CASE("surjectivity lower bound on diagonal representations") {
    const ModuleOperator t(1, 2, real_diag({2.0, 1.0}));
    const auto m = surjectivity_lower_bound(t);
    REQUIRE(m.has_value());
    CHECK(*m == Approx(1.0).margin(1e-12));

    const ModuleOperator deficient(1, 2, real_diag({1.0, 0.0}));
    CHECK_FALSE(surjectivity_lower_bound(deficient).has_value());
}

TEST_CASE("surjectivity lower bound matches Rayleigh sampling from above") {
    const ModuleOperator t = bounded_spread_operator(1, 3, 0.85, 0.97, 55);
    const auto m = surjectivity_lower_bound(t);
    REQUIRE(m.has_value());
    const double sampled = oracles::rayleigh_min(t, 500, 56);
    CHECK(sampled >= *m - 1e-8);
    CHECK(sampled <= *m * 1.05);
}

TEST_CASE("surjectivity verdict matches the rank of the construction") {
    int checked = 0;
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
        const std::size_t n = 1 + seed % 2;
        const std::size_t d = 2 + seed % 2;
        if (seed % 2 == 0) {
            const ModuleOperator t = bounded_spread_operator(n, d, 0.5, 1.5, 700 + seed);
            CHECK(surjectivity_lower_bound(t).has_value());
        } else {
            const std::size_t rank = 1 + seed % (n * d - 1);
            const ModuleOperator t = rank_deficient_operator(n, d, rank, 800 + seed);
            CHECK_FALSE(surjectivity_lower_bound(t).has_value());
        }
        ++checked;
    }
    CHECK(checked == 60);
}

TEST_CASE("norm dominance holds with equality at the zero vector") {
    const ModuleOperator t = random_operator(2, 2, 59);
    const ModuleVector zero(2, 2);
    const ModuleVector tz = apply(t, zero);
    const double bound = operator_norm(t.rep());
    CHECK(loewner_leq(inner_product(tz, tz), bound * bound * inner_product(zero, zero), 0.0));
}

TEST_CASE("norm dominance holds for unitary and random operators") {
    const ModuleOperator u(2, 2, support::random_unitary(4, 60));
    CHECK(norm_dominance_check(u, 20, 1e-9, 61));

    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        const std::size_t n = 1 + seed % 3;
        const std::size_t d = 1 + (seed / 3) % 3;
        const ModuleOperator t = random_operator(n, d, 900 + seed);
        CHECK(norm_dominance_check(t, 5, 1e-9, seed));
    }
}

TEST_CASE("GL+ construction and certification") {
    // zero factor with eps = 1 gives the identity
    const GLPlusOperator id = glplus_from_factor(1, 2, Matrix(2, 2), 1.0);
    CHECK((id.op.rep() - Matrix::identity(2)).max_abs() <= 1e-15);
    CHECK(id.lambda_min == Approx(1.0).margin(1e-12));

    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const GLPlusOperator c = random_glplus(1 + seed % 2, 2, 0.25, 1000 + seed);
        CHECK(is_positive(c.op, 0.0));
        CHECK(c.lambda_min >= 0.25 - 1e-10);
        const auto eig = detail::jacobi_hermitian(hermitian_part(c.op.rep()));
        CHECK(c.lambda_min == Approx(eig.eigenvalues.front()).margin(1e-10));
        // C^(1/2) exists and squares back
        const Matrix root = positive_sqrt(c.op.rep());
        CHECK(operator_norm(root * root - c.op.rep()) <= 1e-9);
    }

    CHECK_THROWS_AS(make_glplus(ModuleOperator(1, 2, real_diag({1.0, -1.0}))),
                    NotPositiveInvertible);
}
