#pragma once

#include <cstddef>
#include <vector>

#include "framecast/errors.hpp"

namespace framecast {

using Vec = std::vector<double>;

double dot(const Vec& a, const Vec& b);
double norm2(const Vec& v);

/// Dense row-major real matrix. Entries are validated to be finite.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols);  // zero-filled
    Matrix(std::size_t rows, std::size_t cols, Vec entries);

    static Matrix identity(std::size_t n);
    static Matrix diagonal(const Vec& diag);
    static Matrix from_rows(const std::vector<Vec>& rows);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool square() const { return rows_ == cols_; }

    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }

    const Vec& data() const { return data_; }

    Matrix transpose() const;
    Matrix operator*(const Matrix& rhs) const;
    Matrix operator+(const Matrix& rhs) const;
    Matrix operator-(const Matrix& rhs) const;
    Matrix scaled(double factor) const;
    Vec apply(const Vec& v) const;

    Vec row(std::size_t i) const;
    Matrix submatrix(const std::vector<std::size_t>& indices) const;  // principal

    double max_abs() const;                        // entrywise max norm
    double max_abs_diff(const Matrix& rhs) const;  // max |a_ij - b_ij|
    double frobenius_norm() const;
    double asymmetry() const;  // max |a_ij - a_ji|

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    Vec data_;
};

/// Extreme eigenvalues of a symmetric matrix together with the worst
/// eigen-equation residual actually achieved for the two extreme pairs.
struct SpectralRange {
    double lambda_min = 0.0;
    double lambda_max = 0.0;
    double residual = 0.0;
};

/// Full symmetric eigendecomposition; values ascending, eigenvectors are
/// the corresponding columns of `vectors`.
struct EigenSystem {
    Vec values;
    Matrix vectors;
};

inline constexpr int kDefaultEigSweeps = 10000;

SpectralRange sym_eig_extremes(const Matrix& m, double tol, int max_sweeps = kDefaultEigSweeps);

/// Full-spectrum hook backing sym_eig_extremes; also used where an
/// orthonormal eigenbasis is required (rank-revealing factorizations).
EigenSystem sym_eig(const Matrix& m, double tol, int max_sweeps = kDefaultEigSweeps);

Vec solve_spd(const Matrix& m, const Vec& b, double tol = 1e-10);
std::vector<Vec> solve_spd_many(const Matrix& m, const std::vector<Vec>& rhs, double tol = 1e-10);

double determinant(const Matrix& m);

}  // namespace framecast
