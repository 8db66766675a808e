#pragma once

#include <cstddef>
#include <cstdint>

#include "algebra.hpp"
#include "matrix.hpp"
#include "rng.hpp"

namespace opframe {

/// Element of H = A^d over A = n x n complex matrices: a d-tuple of n x n
/// blocks, stored in its canonical stacked form, the n x (n*d) matrix
/// [x_1 ... x_d].  Every frame inequality in the library reduces to one PSD
/// check on expressions in this form.
class ModuleVector {
public:
    ModuleVector(std::size_t n, std::size_t d) : n_(n), d_(d), stacked_(n, n * d) {
        if (n == 0 || d == 0) throw DimensionMismatch("ModuleVector: n and d must be positive");
    }

    static ModuleVector from_stacked(std::size_t n, std::size_t d, Matrix stacked) {
        ModuleVector x(n, d);
        if (stacked.rows() != n || stacked.cols() != n * d) {
            throw DimensionMismatch("ModuleVector::from_stacked: got " + stacked.shape_string());
        }
        x.stacked_ = std::move(stacked);
        return x;
    }

    std::size_t n() const { return n_; }
    std::size_t d() const { return d_; }
    const Matrix& stacked() const { return stacked_; }

    Matrix block(std::size_t k) const {
        if (k >= d_) throw DimensionMismatch("ModuleVector::block: index out of range");
        Matrix b(n_, n_);
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = 0; j < n_; ++j) b(i, j) = stacked_(i, k * n_ + j);
        return b;
    }

    void set_block(std::size_t k, const Matrix& b) {
        if (k >= d_) throw DimensionMismatch("ModuleVector::set_block: index out of range");
        if (b.rows() != n_ || b.cols() != n_) {
            throw DimensionMismatch("ModuleVector::set_block: got " + b.shape_string());
        }
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = 0; j < n_; ++j) stacked_(i, k * n_ + j) = b(i, j);
    }

    ModuleVector operator+(const ModuleVector& rhs) const {
        require_same_space(rhs);
        return from_stacked(n_, d_, stacked_ + rhs.stacked_);
    }

    ModuleVector operator-(const ModuleVector& rhs) const {
        require_same_space(rhs);
        return from_stacked(n_, d_, stacked_ - rhs.stacked_);
    }

    bool same_space(const ModuleVector& rhs) const { return n_ == rhs.n_ && d_ == rhs.d_; }

private:
    void require_same_space(const ModuleVector& rhs) const {
        if (!same_space(rhs)) throw DimensionMismatch("ModuleVector: mismatched (n, d)");
    }

    std::size_t n_;
    std::size_t d_;
    Matrix stacked_;
};

inline ModuleVector operator*(Complex s, const ModuleVector& x) {
    return ModuleVector::from_stacked(x.n(), x.d(), s * x.stacked());
}

inline ModuleVector operator*(double s, const ModuleVector& x) { return Complex{s, 0.0} * x; }

/// Left module action a.x: every block is multiplied by a on the left, which
/// is exactly a * stacked(x).
inline ModuleVector left_mul(const Matrix& a, const ModuleVector& x) {
    if (!a.is_square() || a.rows() != x.n()) {
        throw DimensionMismatch("left_mul: algebra element " + a.shape_string() + " on n=" +
                                std::to_string(x.n()));
    }
    return ModuleVector::from_stacked(x.n(), x.d(), a * x.stacked());
}

/// A-valued inner product <x, y> = sum_k x_k y_k* = stacked(x) stacked(y)*.
/// A-linear in the first slot, star-linear in the second.
inline Matrix inner_product(const ModuleVector& x, const ModuleVector& y) {
    if (!x.same_space(y)) throw DimensionMismatch("inner_product: mismatched (n, d)");
    return x.stacked() * y.stacked().adjoint();
}

/// |x| = <x, x>^(1/2), an element of A.
inline Matrix a_valued_norm(const ModuleVector& x, double tol = kTolRel) {
    return positive_sqrt(inner_product(x, x), tol);
}

/// ||x|| = ||<x, x>||^(1/2); equals the largest singular value of stacked(x).
inline double module_norm(const ModuleVector& x) {
    return std::sqrt(std::max(0.0, operator_norm(inner_product(x, x))));
}

/// Deterministic random vector: entries i.i.d. complex standard normal
/// (real and imaginary parts each N(0,1)) drawn from the SplitMix64 stream in
/// block-major, then row-major order.
inline ModuleVector random_vector(std::size_t n, std::size_t d, std::uint64_t seed) {
    ModuleVector x(n, d);
    Rng rng(seed);
    Matrix stacked(n, n * d);
    for (std::size_t k = 0; k < d; ++k)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) stacked(i, k * n + j) = rng.complex_gaussian();
    return ModuleVector::from_stacked(n, d, std::move(stacked));
}

}  // namespace opframe
