#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "errors.hpp"

namespace opframe {

using Complex = std::complex<double>;

/// Dense row-major complex matrix.  The single value type of the whole
/// library: algebra elements are square instances, module vectors and
/// operator representations are rectangular ones.
class Matrix {
public:
    Matrix() = default;

    Matrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, Complex{0.0, 0.0}) {}

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = Complex{1.0, 0.0};
        return m;
    }

    static Matrix scalar(std::size_t n, Complex value) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = value;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool is_square() const { return rows_ == cols_; }
    bool same_shape(const Matrix& other) const {
        return rows_ == other.rows_ && cols_ == other.cols_;
    }

    Complex& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const Complex& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    /// Conjugate transpose.
    Matrix adjoint() const {
        Matrix out(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) out(j, i) = std::conj((*this)(i, j));
        return out;
    }

    Matrix operator+(const Matrix& rhs) const {
        require_same_shape(rhs, "matrix addition");
        Matrix out(rows_, cols_);
        for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] = data_[i] + rhs.data_[i];
        return out;
    }

    Matrix operator-(const Matrix& rhs) const {
        require_same_shape(rhs, "matrix subtraction");
        Matrix out(rows_, cols_);
        for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] = data_[i] - rhs.data_[i];
        return out;
    }

    Matrix operator-() const {
        Matrix out(rows_, cols_);
        for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] = -data_[i];
        return out;
    }

    Matrix operator*(const Matrix& rhs) const {
        if (cols_ != rhs.rows_) {
            throw DimensionMismatch("matrix product: " + shape_string() + " times " +
                                    rhs.shape_string());
        }
        Matrix out(rows_, rhs.cols_);
        for (std::size_t i = 0; i < rows_; ++i) {
            for (std::size_t k = 0; k < cols_; ++k) {
                const Complex aik = (*this)(i, k);
                if (aik == Complex{0.0, 0.0}) continue;
                for (std::size_t j = 0; j < rhs.cols_; ++j) out(i, j) += aik * rhs(k, j);
            }
        }
        return out;
    }

    Matrix& operator*=(Complex s) {
        for (auto& v : data_) v *= s;
        return *this;
    }

    double frobenius_norm() const {
        double acc = 0.0;
        for (const auto& v : data_) acc += std::norm(v);
        return std::sqrt(acc);
    }

    double max_abs() const {
        double best = 0.0;
        for (const auto& v : data_) best = std::max(best, std::abs(v));
        return best;
    }

    bool operator==(const Matrix& rhs) const {
        return rows_ == rhs.rows_ && cols_ == rhs.cols_ && data_ == rhs.data_;
    }
    bool operator!=(const Matrix& rhs) const { return !(*this == rhs); }

    std::string shape_string() const {
        return std::to_string(rows_) + "x" + std::to_string(cols_);
    }

private:
    void require_same_shape(const Matrix& rhs, const char* what) const {
        if (!same_shape(rhs)) {
            throw DimensionMismatch(std::string(what) + ": " + shape_string() + " vs " +
                                    rhs.shape_string());
        }
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Complex> data_;
};

inline Matrix operator*(Complex s, const Matrix& m) {
    Matrix out = m;
    out *= s;
    return out;
}

inline Matrix operator*(double s, const Matrix& m) { return Complex{s, 0.0} * m; }

inline Matrix operator*(const Matrix& m, Complex s) { return s * m; }

inline Matrix operator*(const Matrix& m, double s) { return Complex{s, 0.0} * m; }

/// Hermitian part (a + a*)/2.
inline Matrix hermitian_part(const Matrix& a) {
    if (!a.is_square()) throw DimensionMismatch("hermitian_part: " + a.shape_string());
    return 0.5 * (a + a.adjoint());
}

/// Commutator ab - ba.
inline Matrix commutator(const Matrix& a, const Matrix& b) { return a * b - b * a; }

}  // namespace opframe
