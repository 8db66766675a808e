#include <catch2/catch.hpp>

#include <opframe/module_space.hpp>

#include "oracles.hpp"
#include "test_support.hpp"

using namespace opframe;
using support::from_rows;

namespace {
const Complex I{0.0, 1.0};
const Complex one{1.0, 0.0};

ModuleVector scalar_vector(std::initializer_list<Complex> entries) {
    ModuleVector x(1, entries.size());
    std::size_t k = 0;
    for (Complex v : entries) x.set_block(k++, from_rows({{v}}));
    return x;
}
}  // namespace

TEST_CASE("inner product in the scalar algebra") {
    const ModuleVector x = scalar_vector({one, I});
    const ModuleVector y = scalar_vector({one, one});
    const Matrix ip = inner_product(x, y);
    CHECK(ip(0, 0).real() == Approx(1.0).margin(1e-15));
    CHECK(ip(0, 0).imag() == Approx(1.0).margin(1e-15));
}

TEST_CASE("inner product of a basis-like vector") {
    ModuleVector x(2, 2);
    x.set_block(0, Matrix::identity(2));
    CHECK(operator_norm(inner_product(x, x) - Matrix::identity(2)) <= 1e-15);
}

TEST_CASE("conjugate symmetry on random vectors") {
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
        const ModuleVector x = random_vector(2, 3, 10 + seed);
        const ModuleVector y = random_vector(2, 3, 500 + seed);
        const Matrix lhs = inner_product(x, y);
        const Matrix rhs = star(inner_product(y, x));
        CHECK((lhs - rhs).max_abs() <= 1e-12);
    }
}

TEST_CASE("a_valued_norm basics and multiply-back") {
    ModuleVector x(2, 2);
    x.set_block(0, 2.0 * Matrix::identity(2));
    CHECK(operator_norm(a_valued_norm(x) - 2.0 * Matrix::identity(2)) <= 1e-12);

    const ModuleVector zero(2, 3);
    CHECK(a_valued_norm(zero).frobenius_norm() == 0.0);

    const ModuleVector r = random_vector(2, 3, 77);
    const Matrix nr = a_valued_norm(r);
    CHECK(operator_norm(nr * nr - inner_product(r, r)) <= 1e-9);
}

TEST_CASE("module_norm equals the largest singular value of the stacked form") {
    ModuleVector e(2, 2);
    e.set_block(0, Matrix::identity(2));
    CHECK(module_norm(e) == Approx(1.0).margin(1e-12));

    const ModuleVector x = random_vector(2, 3, 99);
    CHECK(module_norm(3.5 * x) == Approx(3.5 * module_norm(x)).margin(1e-10));
    CHECK(module_norm(x) ==
          Approx(oracles::power_iteration_norm(x.stacked(), 4000, 3)).margin(1e-9));
}

TEST_CASE("random_vector is deterministic with the documented shape") {
    const ModuleVector a = random_vector(1, 1, 7);
    const ModuleVector b = random_vector(1, 1, 7);
    CHECK(a.stacked() == b.stacked());

    const ModuleVector c = random_vector(2, 3, 0);
    CHECK(c.n() == 2);
    CHECK(c.d() == 3);
    CHECK(c.block(2).rows() == 2);
}

TEST_CASE("random_vector entries have complex variance near 2") {
    double acc = 0.0;
    for (std::uint64_t s = 0; s < 1000; ++s) {
        const ModuleVector x = random_vector(1, 1, 100000 + s);
        acc += std::norm(x.stacked()(0, 0));
    }
    const double mean = acc / 1000.0;
    CHECK(mean >= 1.8);
    CHECK(mean <= 2.2);
}

TEST_CASE("positivity of the inner product") {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const ModuleVector x = random_vector(1 + seed % 2, 2 + seed % 3, 4000 + seed);
        CHECK(loewner_leq(Matrix(x.n(), x.n()), inner_product(x, x), 1e-10));
    }
    const ModuleVector zero(2, 2);
    CHECK(inner_product(zero, zero).max_abs() < 1e-12);
    const ModuleVector x = random_vector(2, 2, 5);
    CHECK(inner_product(x, x).max_abs() > 1e-12);
}

TEST_CASE("A-linearity in the first slot") {
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
        const std::size_t n = 2;
        const Matrix a = support::random_matrix(n, n, 600 + seed);
        const ModuleVector x = random_vector(n, 3, 700 + seed);
        const ModuleVector y = random_vector(n, 3, 800 + seed);
        const ModuleVector z = random_vector(n, 3, 900 + seed);
        const Matrix lhs = inner_product(left_mul(a, x) + y, z);
        const Matrix rhs = a * inner_product(x, z) + inner_product(y, z);
        CHECK(operator_norm(lhs - rhs) <= 1e-10);
    }
}

TEST_CASE("trace form of Cauchy-Schwarz") {
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
        const std::size_t n = 2;
        const ModuleVector x = random_vector(n, 3, 1500 + seed);
        const ModuleVector y = random_vector(n, 3, 1600 + seed);
        const Matrix ip = inner_product(x, y);
        Complex trace{0.0, 0.0};
        for (std::size_t i = 0; i < n; ++i) trace += ip(i, i);
        CHECK(std::abs(trace) <=
              static_cast<double>(n) * module_norm(x) * module_norm(y) + 1e-8);
    }
}

TEST_CASE("dimension mismatches are rejected") {
    const ModuleVector x = random_vector(2, 2, 1);
    const ModuleVector y = random_vector(2, 3, 1);
    CHECK_THROWS_AS(inner_product(x, y), DimensionMismatch);
    CHECK_THROWS_AS(left_mul(Matrix::identity(3), x), DimensionMismatch);
}
