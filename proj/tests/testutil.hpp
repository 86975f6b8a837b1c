#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <vector>

#include "framecast/frames.hpp"
#include "framecast/linalg.hpp"

namespace framecast::testutil {

using Rng = std::mt19937_64;

inline Vec random_vector(Rng& rng, std::size_t dim, double scale = 1.0) {
    std::normal_distribution<double> gauss(0.0, scale);
    Vec v(dim);
    for (double& x : v) x = gauss(rng);
    return v;
}

inline Vec random_unit_vector(Rng& rng, std::size_t dim) {
    Vec v = random_vector(rng, dim);
    double n = norm2(v);
    while (n < 1e-8) {
        v = random_vector(rng, dim);
        n = norm2(v);
    }
    for (double& x : v) x /= n;
    return v;
}

inline Matrix random_matrix(Rng& rng, std::size_t rows, std::size_t cols, double scale = 1.0) {
    std::normal_distribution<double> gauss(0.0, scale);
    Matrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) m(i, j) = gauss(rng);
    return m;
}

inline Matrix random_symmetric(Rng& rng, std::size_t n, double scale = 1.0) {
    Matrix m = random_matrix(rng, n, n, scale);
    Matrix s(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) s(i, j) = 0.5 * (m(i, j) + m(j, i));
    return s;
}

inline Matrix random_spd(Rng& rng, std::size_t n) {
    const Matrix a = random_matrix(rng, n, n);
    return a.transpose() * a + Matrix::identity(n);
}

// Modified Gram-Schmidt on a random Gaussian matrix.
inline Matrix random_orthogonal(Rng& rng, std::size_t n) {
    Matrix a = random_matrix(rng, n, n);
    for (std::size_t c = 0; c < n; ++c) {
        for (std::size_t p = 0; p < c; ++p) {
            double proj = 0.0;
            for (std::size_t r = 0; r < n; ++r) proj += a(r, p) * a(r, c);
            for (std::size_t r = 0; r < n; ++r) a(r, c) -= proj * a(r, p);
        }
        double nrm = 0.0;
        for (std::size_t r = 0; r < n; ++r) nrm += a(r, c) * a(r, c);
        nrm = std::sqrt(nrm);
        for (std::size_t r = 0; r < n; ++r) a(r, c) /= nrm;
    }
    return a;
}

inline double rayleigh(const Matrix& m, const Vec& v) { return dot(v, m.apply(v)); }

inline double sum_sq_coefficients(const VectorSystem& sys, const Vec& f) {
    double s = 0.0;
    for (const Vec& g : sys.vectors) {
        const double c = dot(f, g);
        s += c * c;
    }
    return s;
}

/// Real roots of x^3 + p2 x^2 + p1 x + p0 when all three roots are real
/// (characteristic polynomials of symmetric 3x3 matrices). Trigonometric
/// method; returns ascending roots.
inline std::array<double, 3> cubic_roots_real(double p2, double p1, double p0) {
    const double shift = p2 / 3.0;
    const double p = p1 - p2 * p2 / 3.0;
    const double q = 2.0 * p2 * p2 * p2 / 27.0 - p2 * p1 / 3.0 + p0;
    std::array<double, 3> roots{};
    if (p >= 0.0) {
        // degenerate (triple or near-triple root)
        const double r = std::cbrt(-q);
        roots = {r - shift, r - shift, r - shift};
        return roots;
    }
    const double m = 2.0 * std::sqrt(-p / 3.0);
    double arg = 3.0 * q / (p * m);
    arg = std::clamp(arg, -1.0, 1.0);
    const double theta = std::acos(arg) / 3.0;
    for (int k = 0; k < 3; ++k) {
        roots[static_cast<std::size_t>(k)] =
            m * std::cos(theta - 2.0 * M_PI * k / 3.0) - shift;
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

/// Characteristic-polynomial coefficients of a symmetric 3x3 matrix:
/// lambda^3 - tr lambda^2 + c1 lambda - det.
inline std::array<double, 3> char_poly_3x3(const Matrix& s) {
    const double tr = s(0, 0) + s(1, 1) + s(2, 2);
    const double c1 = (s(0, 0) * s(1, 1) - s(0, 1) * s(0, 1)) +
                      (s(0, 0) * s(2, 2) - s(0, 2) * s(0, 2)) +
                      (s(1, 1) * s(2, 2) - s(1, 2) * s(1, 2));
    const double det = s(0, 0) * (s(1, 1) * s(2, 2) - s(1, 2) * s(1, 2)) -
                       s(0, 1) * (s(0, 1) * s(2, 2) - s(1, 2) * s(0, 2)) +
                       s(0, 2) * (s(0, 1) * s(1, 2) - s(1, 1) * s(0, 2));
    return {-tr, c1, -det};
}

/// Gram matrix of the iterate window system for kernel (1, tau, tau^2),
/// I = {0,1,2}, omega = {0}, K = 2.
inline Matrix example_gram(double tau) {
    const std::vector<Vec> rows = {{1.0, 0.0, 0.0},
                                   {1.0, tau, tau * tau},
                                   {1.0, 2.0 * tau, 3.0 * tau * tau}};
    Matrix s(3, 3);
    for (const Vec& r : rows)
        for (std::size_t a = 0; a < 3; ++a)
            for (std::size_t b = 0; b < 3; ++b) s(a, b) += r[a] * r[b];
    return s;
}

}  // namespace framecast::testutil
