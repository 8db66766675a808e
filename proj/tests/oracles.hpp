#pragma once

// Independent oracles used by the tests.  These deliberately avoid the
// library's Jacobi/Hestenes code paths: determinants via LU, norms via power
// iteration, PSD decisions via Cholesky, extremal constants via bisection on
// the PSD cone.

#include <cmath>
#include <cstdint>
#include <vector>

#include <opframe/matrix.hpp>
#include <opframe/module_space.hpp>
#include <opframe/operators.hpp>
#include <opframe/rng.hpp>

namespace oracles {

using opframe::Complex;
using opframe::Matrix;

/// Determinant by LU with partial pivoting.
inline Complex determinant(Matrix a) {
    const std::size_t n = a.rows();
    Complex det{1.0, 0.0};
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t pivot = k;
        for (std::size_t i = k + 1; i < n; ++i) {
            if (std::abs(a(i, k)) > std::abs(a(pivot, k))) pivot = i;
        }
        if (std::abs(a(pivot, k)) == 0.0) return {0.0, 0.0};
        if (pivot != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(pivot, j));
            det = -det;
        }
        det *= a(k, k);
        for (std::size_t i = k + 1; i < n; ++i) {
            const Complex factor = a(i, k) / a(k, k);
            for (std::size_t j = k; j < n; ++j) a(i, j) -= factor * a(k, j);
        }
    }
    return det;
}

/// Real characteristic function det(h - lambda I) of a Hermitian h.
inline double char_poly(const Matrix& h, double lambda) {
    Matrix shifted = h;
    for (std::size_t i = 0; i < h.rows(); ++i) shifted(i, i) -= Complex{lambda, 0.0};
    return determinant(shifted).real();
}

/// Eigenvalues of a Hermitian matrix with distinct spectrum, found by sign
/// changes of the characteristic function on a grid inside the Gershgorin
/// interval plus bisection.  Returns an empty vector when the grid does not
/// isolate all n roots.
inline std::vector<double> eigenvalues_by_bisection(const Matrix& h, std::size_t grid = 8000) {
    const std::size_t n = h.rows();
    double lo = 0.0, hi = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double radius = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (j != i) radius += std::abs(h(i, j));
        }
        lo = std::min(lo, h(i, i).real() - radius);
        hi = std::max(hi, h(i, i).real() + radius);
    }
    lo -= 1.0;
    hi += 1.0;

    std::vector<double> roots;
    double prev_x = lo;
    double prev_f = char_poly(h, lo);
    for (std::size_t g = 1; g <= grid; ++g) {
        const double x = lo + (hi - lo) * static_cast<double>(g) / static_cast<double>(grid);
        const double f = char_poly(h, x);
        if ((prev_f < 0.0 && f > 0.0) || (prev_f > 0.0 && f < 0.0)) {
            double a = prev_x, b = x, fa = prev_f;
            for (int iter = 0; iter < 200 && (b - a) > 1e-14 * std::max(1.0, std::abs(b));
                 ++iter) {
                const double mid = 0.5 * (a + b);
                const double fm = char_poly(h, mid);
                if ((fa < 0.0) == (fm < 0.0)) {
                    a = mid;
                    fa = fm;
                } else {
                    b = mid;
                }
            }
            roots.push_back(0.5 * (a + b));
        }
        prev_x = x;
        prev_f = f;
    }
    if (roots.size() != n) return {};
    return roots;
}

/// Largest singular value via power iteration on a* a.
inline double power_iteration_norm(const Matrix& a, int iters = 3000, std::uint64_t seed = 17) {
    const Matrix gram = a.adjoint() * a;
    const std::size_t n = gram.rows();
    opframe::Rng rng(seed);
    Matrix v(n, 1);
    for (std::size_t i = 0; i < n; ++i) v(i, 0) = rng.complex_gaussian();
    double value = 0.0;
    for (int it = 0; it < iters; ++it) {
        Matrix w = gram * v;
        double norm = w.frobenius_norm();
        if (norm == 0.0) return 0.0;
        for (std::size_t i = 0; i < n; ++i) w(i, 0) /= norm;
        value = norm;
        v = std::move(w);
    }
    // value approximates lambda_max(a* a) after normalization
    return std::sqrt(value);
}

/// Cholesky feasibility of a Hermitian matrix; fails on any nonpositive pivot.
inline bool cholesky_feasible(const Matrix& m) {
    const std::size_t n = m.rows();
    Matrix l(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        double diag = m(k, k).real();
        for (std::size_t j = 0; j < k; ++j) diag -= std::norm(l(k, j));
        if (diag <= 0.0) return false;
        l(k, k) = Complex{std::sqrt(diag), 0.0};
        for (std::size_t i = k + 1; i < n; ++i) {
            Complex acc = m(i, k);
            for (std::size_t j = 0; j < k; ++j) acc -= l(i, j) * std::conj(l(k, j));
            l(i, k) = acc / l(k, k);
        }
    }
    return true;
}

/// PSD within tol, decided by Cholesky of m + tol I.
inline bool psd_within(const Matrix& m, double tol) {
    Matrix shifted = m;
    for (std::size_t i = 0; i < m.rows(); ++i) shifted(i, i) += Complex{tol, 0.0};
    return cholesky_feasible(shifted);
}

/// Largest a with phi - a gram >= -tol, by bisection on the Cholesky check.
inline double bisect_lower_bound(const Matrix& phi, const Matrix& gram, double hi,
                                 double tol = 1e-9) {
    const auto ok = [&](double a) { return psd_within(phi - a * gram, tol); };
    if (!ok(0.0)) return 0.0;
    if (ok(hi)) return hi;
    double lo = 0.0, top = hi;
    for (int iter = 0; iter < 200 && (top - lo) > 1e-13 * std::max(1.0, top); ++iter) {
        const double mid = 0.5 * (lo + top);
        if (ok(mid)) {
            lo = mid;
        } else {
            top = mid;
        }
    }
    return lo;
}

/// Least b with b I - phi >= -tol, by bisection on the Cholesky check.
inline double bisect_upper_bound(const Matrix& phi, double hi, double tol = 1e-9) {
    const Matrix id = Matrix::identity(phi.rows());
    const auto ok = [&](double b) { return psd_within(b * id - phi, tol); };
    if (!ok(hi)) return hi;
    double lo = 0.0, top = hi;
    if (ok(0.0)) return 0.0;
    for (int iter = 0; iter < 200 && (top - lo) > 1e-13 * std::max(1.0, top); ++iter) {
        const double mid = 0.5 * (lo + top);
        if (ok(mid)) {
            top = mid;
        } else {
            lo = mid;
        }
    }
    return top;
}

/// Minimum over random unit samples of tr<T*x, T*x> / tr<x, x>.
inline double rayleigh_min(const opframe::ModuleOperator& t, int samples, std::uint64_t seed) {
    const opframe::ModuleOperator t_star = opframe::adjoint(t);
    double best = std::numeric_limits<double>::infinity();
    for (int s = 0; s < samples; ++s) {
        const opframe::ModuleVector x =
            opframe::random_vector(t.n(), t.d(), opframe::derive_seed(seed, s));
        const opframe::ModuleVector tx = opframe::apply(t_star, x);
        double num = 0.0, den = 0.0;
        const Matrix ip_num = opframe::inner_product(tx, tx);
        const Matrix ip_den = opframe::inner_product(x, x);
        for (std::size_t i = 0; i < ip_num.rows(); ++i) {
            num += ip_num(i, i).real();
            den += ip_den(i, i).real();
        }
        if (den > 0.0) best = std::min(best, num / den);
    }
    return best;
}

}  // namespace oracles
