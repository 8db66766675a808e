#pragma once

#include <initializer_list>
#include <vector>

#include <opframe/matrix.hpp>
#include <opframe/rng.hpp>

namespace support {

using opframe::Complex;
using opframe::Matrix;

inline Matrix from_rows(std::initializer_list<std::initializer_list<Complex>> rows) {
    const std::size_t r = rows.size();
    const std::size_t c = rows.begin()->size();
    Matrix m(r, c);
    std::size_t i = 0;
    for (const auto& row : rows) {
        std::size_t j = 0;
        for (const auto& v : row) m(i, j++) = v;
        ++i;
    }
    return m;
}

inline Matrix real_diag(std::initializer_list<double> values) {
    Matrix m(values.size(), values.size());
    std::size_t i = 0;
    for (double v : values) {
        m(i, i) = Complex{v, 0.0};
        ++i;
    }
    return m;
}

inline Matrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
    opframe::Rng rng(seed);
    Matrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) m(i, j) = rng.complex_gaussian();
    return m;
}

inline Matrix random_hermitian(std::size_t n, std::uint64_t seed) {
    const Matrix g = random_matrix(n, n, seed);
    return 0.5 * (g + g.adjoint());
}

inline Matrix random_psd(std::size_t n, std::uint64_t seed) {
    const Matrix g = random_matrix(n, n, seed);
    return g.adjoint() * g;
}

inline Matrix random_unitary(std::size_t n, std::uint64_t seed) {
    opframe::Rng rng(seed);
    Matrix g = random_matrix(n, n, seed);
    for (std::size_t j = 0; j < n; ++j) {
        for (int pass = 0; pass < 2; ++pass) {
            for (std::size_t i = 0; i < j; ++i) {
                Complex proj{0.0, 0.0};
                for (std::size_t k = 0; k < n; ++k) proj += std::conj(g(k, i)) * g(k, j);
                for (std::size_t k = 0; k < n; ++k) g(k, j) -= proj * g(k, i);
            }
        }
        double norm = 0.0;
        for (std::size_t k = 0; k < n; ++k) norm += std::norm(g(k, j));
        norm = std::sqrt(norm);
        for (std::size_t k = 0; k < n; ++k) g(k, j) /= norm;
    }
    return g;
}

}  // namespace support
