#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <optional>
#include <vector>

#include "errors.hpp"
#include "matrix.hpp"

namespace opframe {

/// Default relative tolerance for order checks and Hermiticity gates.
inline constexpr double kTolRel = 1e-9;
/// Default relative threshold for numerical rank decisions.
inline constexpr double kRankTol = 1e-10;
/// Sweep budget for the Jacobi iterations.
inline constexpr int kSweepBudget = 100;

/// Eigendecomposition of a Hermitian matrix: a = V diag(lambda) V*.
struct SpectralDecomposition {
    std::vector<double> eigenvalues;  // ascending
    Matrix eigenvectors;              // unitary; column i pairs with eigenvalues[i]
};

/// Thin singular value decomposition: a = u diag(sigma) v*.
struct Svd {
    std::vector<double> singular_values;  // descending, >= 0
    Matrix u;
    Matrix v;
};

namespace detail {

// One complex Jacobi rotation parameter set zeroing a Hermitian 2x2 pivot
// [[app, apq], [conj(apq), aqq]].  c is real, s carries the phase of apq.
struct JacobiRotation {
    double c;
    Complex s;
    double t;  // tan(theta); diagonal update is app -= t*r, aqq += t*r
};

inline JacobiRotation make_rotation(double app, double aqq, Complex apq) {
    const double r = std::abs(apq);
    const double tau = (aqq - app) / (2.0 * r);
    double t;
    if (std::abs(tau) > 1e153) {
        t = 1.0 / (2.0 * tau);  // avoids overflow in tau*tau
    } else {
        const double sign = (tau >= 0.0) ? 1.0 : -1.0;
        t = sign / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
    }
    const double c = 1.0 / std::sqrt(1.0 + t * t);
    const Complex phase = apq / r;
    return {c, (t * c) * phase, t};
}

inline double off_diagonal_norm(const Matrix& m) {
    double acc = 0.0;
    for (std::size_t p = 0; p + 1 < m.rows(); ++p)
        for (std::size_t q = p + 1; q < m.cols(); ++q) acc += std::norm(m(p, q));
    return std::sqrt(2.0 * acc);
}

// Cyclic complex Jacobi on a Hermitian matrix.  The caller guarantees m is
// Hermitian; exact Hermiticity is maintained by updating both triangles from
// the structured formulas.
inline SpectralDecomposition jacobi_hermitian(Matrix m, int sweep_budget = kSweepBudget) {
    const std::size_t n = m.rows();
    Matrix v = Matrix::identity(n);

    const double scale = m.frobenius_norm();
    const double stop = 1e-14 * std::max(1.0, scale);
    const double pivot_skip = stop / static_cast<double>(n * n + 1);

    bool converged = (n <= 1) || (scale == 0.0);
    for (int sweep = 0; sweep < sweep_budget && !converged; ++sweep) {
        if (off_diagonal_norm(m) <= stop) {
            converged = true;
            break;
        }
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double r = std::abs(m(p, q));
                if (r <= pivot_skip) continue;
                const double app = m(p, p).real();
                const double aqq = m(q, q).real();
                const JacobiRotation rot = make_rotation(app, aqq, m(p, q));
                const double c = rot.c;
                const Complex s = rot.s;
                for (std::size_t k = 0; k < n; ++k) {
                    if (k == p || k == q) continue;
                    const Complex mkp = m(k, p);
                    const Complex mkq = m(k, q);
                    m(k, p) = c * mkp - std::conj(s) * mkq;
                    m(k, q) = s * mkp + c * mkq;
                    m(p, k) = std::conj(m(k, p));
                    m(q, k) = std::conj(m(k, q));
                }
                m(p, p) = Complex{app - rot.t * r, 0.0};
                m(q, q) = Complex{aqq + rot.t * r, 0.0};
                m(p, q) = Complex{0.0, 0.0};
                m(q, p) = Complex{0.0, 0.0};
                for (std::size_t k = 0; k < n; ++k) {
                    const Complex vkp = v(k, p);
                    const Complex vkq = v(k, q);
                    v(k, p) = c * vkp - std::conj(s) * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }
    if (!converged && off_diagonal_norm(m) > stop) {
        throw NoConvergence("jacobi_hermitian: sweep budget exhausted at dimension " +
                            std::to_string(n));
    }

    std::vector<double> lambda(n);
    for (std::size_t i = 0; i < n; ++i) lambda[i] = m(i, i).real();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return lambda[a] < lambda[b]; });

    SpectralDecomposition out;
    out.eigenvalues.resize(n);
    out.eigenvectors = Matrix(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        out.eigenvalues[i] = lambda[order[i]];
        for (std::size_t k = 0; k < n; ++k) out.eigenvectors(k, i) = v(k, order[i]);
    }
    return out;
}

}  // namespace detail

/// Involution of the algebra: conjugate transpose.
inline Matrix star(const Matrix& a) { return a.adjoint(); }

/// Largest singular value, valid for any shape.  Computed as the square root
/// of the top eigenvalue of the smaller Gram matrix.
inline double operator_norm(const Matrix& a) {
    if (a.rows() == 0 || a.cols() == 0) return 0.0;
    const Matrix gram = (a.rows() >= a.cols()) ? (a.adjoint() * a) : (a * a.adjoint());
    const auto eig = detail::jacobi_hermitian(hermitian_part(gram));
    return std::sqrt(std::max(0.0, eig.eigenvalues.back()));
}

/// Operator-norm distance of a from its own adjoint.
inline double hermitian_defect(const Matrix& a) {
    if (!a.is_square()) throw DimensionMismatch("hermitian_defect: " + a.shape_string());
    return operator_norm(a - a.adjoint());
}

/// Eigendecomposition by cyclic Jacobi rotations.  Requires the input to be
/// Hermitian within tol_herm (relative to max(1, ||a||)).
inline SpectralDecomposition hermitian_eigen(const Matrix& a, double tol_herm = kTolRel) {
    if (!a.is_square()) throw DimensionMismatch("hermitian_eigen: " + a.shape_string());
    const double defect = hermitian_defect(a);
    if (defect > tol_herm * std::max(1.0, a.frobenius_norm())) {
        throw NotHermitian("hermitian_eigen: defect " + std::to_string(defect) +
                           " exceeds tolerance");
    }
    return detail::jacobi_hermitian(hermitian_part(a));
}

/// Thin SVD by one-sided (Hestenes) Jacobi: columns of the working copy are
/// orthogonalized pairwise by right rotations.  Keeps full relative accuracy
/// on small singular values, which the rank decisions depend on.
inline Svd svd(const Matrix& a) {
    if (a.rows() < a.cols()) {
        Svd s = svd(a.adjoint());
        return {std::move(s.singular_values), std::move(s.v), std::move(s.u)};
    }
    const std::size_t rows = a.rows();
    const std::size_t cols = a.cols();
    Matrix w = a;
    Matrix v = Matrix::identity(cols);

    const double orth_eps = 1e-15;
    bool converged = false;
    for (int sweep = 0; sweep < kSweepBudget && !converged; ++sweep) {
        bool rotated = false;
        for (std::size_t p = 0; p + 1 < cols; ++p) {
            for (std::size_t q = p + 1; q < cols; ++q) {
                double alpha = 0.0, beta = 0.0;
                Complex gamma{0.0, 0.0};
                for (std::size_t k = 0; k < rows; ++k) {
                    alpha += std::norm(w(k, p));
                    beta += std::norm(w(k, q));
                    gamma += std::conj(w(k, p)) * w(k, q);
                }
                const double denom = std::sqrt(alpha * beta);
                if (denom == 0.0 || std::abs(gamma) <= orth_eps * denom) continue;
                const detail::JacobiRotation rot = detail::make_rotation(alpha, beta, gamma);
                const double c = rot.c;
                const Complex s = rot.s;
                for (std::size_t k = 0; k < rows; ++k) {
                    const Complex wkp = w(k, p);
                    const Complex wkq = w(k, q);
                    w(k, p) = c * wkp - std::conj(s) * wkq;
                    w(k, q) = s * wkp + c * wkq;
                }
                for (std::size_t k = 0; k < cols; ++k) {
                    const Complex vkp = v(k, p);
                    const Complex vkq = v(k, q);
                    v(k, p) = c * vkp - std::conj(s) * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
                rotated = true;
            }
        }
        if (!rotated) converged = true;
    }
    if (!converged) throw NoConvergence("svd: sweep budget exhausted");

    std::vector<double> sigma(cols);
    for (std::size_t j = 0; j < cols; ++j) {
        double acc = 0.0;
        for (std::size_t k = 0; k < rows; ++k) acc += std::norm(w(k, j));
        sigma[j] = std::sqrt(acc);
    }
    std::vector<std::size_t> order(cols);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return sigma[x] > sigma[y]; });

    Svd out;
    out.singular_values.resize(cols);
    out.u = Matrix(rows, cols);
    out.v = Matrix(cols, cols);
    for (std::size_t j = 0; j < cols; ++j) {
        const std::size_t src = order[j];
        out.singular_values[j] = sigma[src];
        if (sigma[src] > 0.0) {
            for (std::size_t k = 0; k < rows; ++k) out.u(k, j) = w(k, src) / sigma[src];
        }
        for (std::size_t k = 0; k < cols; ++k) out.v(k, j) = v(k, src);
    }
    return out;
}

/// Number of singular values above rank_tol * sigma_max.
inline std::size_t numerical_rank(const Matrix& a, double rank_tol = kRankTol) {
    const Svd s = svd(a);
    if (s.singular_values.empty() || s.singular_values.front() == 0.0) return 0;
    const double cut = rank_tol * s.singular_values.front();
    std::size_t rank = 0;
    for (double sv : s.singular_values)
        if (sv > cut) ++rank;
    return rank;
}

/// Loewner order check a <= b: both arguments Hermitian within tol and
/// lambda_min(b - a) >= -tol * max(1, ||b - a||).  The relative scaling keeps
/// the check meaningful under rescaling of the inputs.
inline bool loewner_leq(const Matrix& a, const Matrix& b, double tol = kTolRel) {
    if (!a.same_shape(b) || !a.is_square()) {
        throw DimensionMismatch("loewner_leq: " + a.shape_string() + " vs " + b.shape_string());
    }
    for (const Matrix* m : {&a, &b}) {
        const double defect = hermitian_defect(*m);
        if (defect > std::max(tol, 1e-12) * std::max(1.0, m->frobenius_norm())) {
            throw NotHermitian("loewner_leq: argument has hermitian defect " +
                               std::to_string(defect));
        }
    }
    const Matrix diff = hermitian_part(b - a);
    const auto eig = detail::jacobi_hermitian(diff);
    const double lo = eig.eigenvalues.front();
    const double hi = std::max(std::abs(eig.eigenvalues.front()), std::abs(eig.eigenvalues.back()));
    return lo >= -tol * std::max(1.0, hi);
}

/// Positive square root of a PSD Hermitian matrix.  Eigenvalues in
/// [-tol*scale, 0) are clamped to zero; anything lower is a hard error.
inline Matrix positive_sqrt(const Matrix& a, double tol = kTolRel) {
    if (!a.is_square()) throw DimensionMismatch("positive_sqrt: " + a.shape_string());
    const double defect = hermitian_defect(a);
    if (defect > tol * std::max(1.0, a.frobenius_norm())) {
        throw NotHermitian("positive_sqrt: defect " + std::to_string(defect));
    }
    auto eig = detail::jacobi_hermitian(hermitian_part(a));
    const std::size_t n = a.rows();
    double top = 0.0;
    for (double l : eig.eigenvalues) top = std::max(top, std::abs(l));
    const double clamp = tol * std::max(1.0, top);
    for (double& l : eig.eigenvalues) {
        if (l < -clamp) {
            throw NotPSD("positive_sqrt: eigenvalue " + std::to_string(l) +
                         " below -" + std::to_string(clamp));
        }
        l = std::max(l, 0.0);
    }
    Matrix scaled(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        const double root = std::sqrt(eig.eigenvalues[i]);
        for (std::size_t k = 0; k < n; ++k) scaled(k, i) = eig.eigenvectors(k, i) * root;
    }
    return hermitian_part(scaled * eig.eigenvectors.adjoint());
}

/// Moore-Penrose pseudoinverse; singular values below rank_tol * sigma_max
/// are treated as zero.
inline Matrix pseudo_inverse(const Matrix& a, double rank_tol = kRankTol) {
    const Svd s = svd(a);
    Matrix out(a.cols(), a.rows());
    if (s.singular_values.empty() || s.singular_values.front() == 0.0) return out;
    const double cut = rank_tol * s.singular_values.front();
    for (std::size_t j = 0; j < s.singular_values.size(); ++j) {
        const double sv = s.singular_values[j];
        if (sv <= cut) continue;
        const double inv = 1.0 / sv;
        for (std::size_t i = 0; i < a.cols(); ++i) {
            const Complex vij = s.v(i, j) * inv;
            for (std::size_t k = 0; k < a.rows(); ++k) out(i, k) += vij * std::conj(s.u(k, j));
        }
    }
    return out;
}

/// |a| = (a* a)^(1/2).
inline Matrix abs_element(const Matrix& a, double tol = kTolRel) {
    return positive_sqrt(star(a) * a, tol);
}

/// Operator norm of the commutator ab - ba.
inline double commutator_norm(const Matrix& a, const Matrix& b) {
    return operator_norm(commutator(a, b));
}

}  // namespace opframe
