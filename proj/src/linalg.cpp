#include "framecast/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace framecast {

namespace {

void check_finite(const Vec& entries) {
    for (double x : entries) {
        if (!std::isfinite(x)) {
            throw InvalidArgument("matrix entries must be finite");
        }
    }
}

}  // namespace

double dot(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) {
        throw DimensionMismatch("dot: vector lengths differ");
    }
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm2(const Vec& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

Matrix::Matrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {
    if (rows == 0 || cols == 0) throw InvalidArgument("matrix dimensions must be positive");
}

Matrix::Matrix(std::size_t rows, std::size_t cols, Vec entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (rows == 0 || cols == 0) throw InvalidArgument("matrix dimensions must be positive");
    if (data_.size() != rows * cols) {
        throw DimensionMismatch("matrix entries do not match rows*cols");
    }
    check_finite(data_);
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::diagonal(const Vec& diag) {
    Matrix m(diag.size(), diag.size());
    for (std::size_t i = 0; i < diag.size(); ++i) {
        if (!std::isfinite(diag[i])) throw InvalidArgument("diagonal entries must be finite");
        m(i, i) = diag[i];
    }
    return m;
}

Matrix Matrix::from_rows(const std::vector<Vec>& rows) {
    if (rows.empty()) throw InvalidArgument("from_rows: need at least one row");
    const std::size_t cols = rows.front().size();
    Matrix m(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != cols) throw DimensionMismatch("from_rows: ragged rows");
        check_finite(rows[i]);
        for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
    }
    return m;
}

Matrix Matrix::transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

Matrix Matrix::operator*(const Matrix& rhs) const {
    if (cols_ != rhs.rows_) throw DimensionMismatch("matrix product: inner dimensions differ");
    Matrix out(rows_, rhs.cols_);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t k = 0; k < cols_; ++k) {
            const double a = (*this)(i, k);
            if (a == 0.0) continue;
            for (std::size_t j = 0; j < rhs.cols_; ++j) {
                out(i, j) += a * rhs(k, j);
            }
        }
    }
    return out;
}

Matrix Matrix::operator+(const Matrix& rhs) const {
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_) throw DimensionMismatch("matrix sum: shapes differ");
    Matrix out = *this;
    for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] += rhs.data_[i];
    return out;
}

Matrix Matrix::operator-(const Matrix& rhs) const {
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_) throw DimensionMismatch("matrix difference: shapes differ");
    Matrix out = *this;
    for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] -= rhs.data_[i];
    return out;
}

Matrix Matrix::scaled(double factor) const {
    Matrix out = *this;
    for (double& x : out.data_) x *= factor;
    return out;
}

Vec Matrix::apply(const Vec& v) const {
    if (v.size() != cols_) throw DimensionMismatch("apply: vector length differs from cols");
    Vec out(rows_, 0.0);
    for (std::size_t i = 0; i < rows_; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < cols_; ++j) s += (*this)(i, j) * v[j];
        out[i] = s;
    }
    return out;
}

Vec Matrix::row(std::size_t i) const {
    Vec out(cols_);
    for (std::size_t j = 0; j < cols_; ++j) out[j] = (*this)(i, j);
    return out;
}

Matrix Matrix::submatrix(const std::vector<std::size_t>& indices) const {
    if (!square()) throw NotSquare("submatrix: principal submatrix needs a square matrix");
    if (indices.empty()) throw InvalidArgument("submatrix: empty index set");
    Matrix out(indices.size(), indices.size());
    for (std::size_t a = 0; a < indices.size(); ++a) {
        for (std::size_t b = 0; b < indices.size(); ++b) {
            if (indices[a] >= rows_ || indices[b] >= rows_) {
                throw InvalidArgument("submatrix: index out of range");
            }
            out(a, b) = (*this)(indices[a], indices[b]);
        }
    }
    return out;
}

double Matrix::max_abs() const {
    double m = 0.0;
    for (double x : data_) m = std::max(m, std::abs(x));
    return m;
}

double Matrix::max_abs_diff(const Matrix& rhs) const {
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_) throw DimensionMismatch("max_abs_diff: shapes differ");
    double m = 0.0;
    for (std::size_t i = 0; i < data_.size(); ++i) m = std::max(m, std::abs(data_[i] - rhs.data_[i]));
    return m;
}

double Matrix::frobenius_norm() const {
    double s = 0.0;
    for (double x : data_) s += x * x;
    return std::sqrt(s);
}

double Matrix::asymmetry() const {
    if (!square()) throw NotSquare("asymmetry: matrix is not square");
    double m = 0.0;
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = i + 1; j < cols_; ++j)
            m = std::max(m, std::abs((*this)(i, j) - (*this)(j, i)));
    return m;
}

namespace {

Matrix symmetrized_checked(const Matrix& m, double tol) {
    if (!m.square()) throw NotSquare("symmetric eigensolver: matrix is not square");
    const double asym = m.asymmetry();
    if (asym > tol * (1.0 + m.max_abs())) {
        std::ostringstream os;
        os << "matrix asymmetry " << asym << " exceeds tolerance";
        throw NotSymmetric(os.str());
    }
    Matrix s(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            s(i, j) = 0.5 * ((m)(i, j) + (m)(j, i));
    return s;
}

double offdiag_fro(const Matrix& a) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (i != j) s += a(i, j) * a(i, j);
    return std::sqrt(s);
}

// Cyclic Jacobi with eigenvector accumulation. Deterministic sweep order.
EigenSystem jacobi_eig(Matrix a, int max_sweeps) {
    const std::size_t n = a.rows();
    Matrix v = Matrix::identity(n);
    const double scale = a.frobenius_norm();
    const double stop = 1e-15 * (scale > 0.0 ? scale : 1.0);

    bool converged = offdiag_fro(a) <= stop;
    for (int sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (std::abs(apq) <= 1e-300) continue;
                const double app = a(p, p);
                const double aqq = a(q, q);
                const double theta = (aqq - app) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;

                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a(k, p);
                    const double akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a(p, k);
                    const double aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v(k, p);
                    const double vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
        converged = offdiag_fro(a) <= stop;
    }
    if (!converged) {
        throw NoConvergence("Jacobi eigensolver hit the sweep cap");
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t j) { return a(i, i) < a(j, j); });

    EigenSystem out;
    out.values.resize(n);
    out.vectors = Matrix(n, n);
    for (std::size_t col = 0; col < n; ++col) {
        out.values[col] = a(order[col], order[col]);
        for (std::size_t rowi = 0; rowi < n; ++rowi) out.vectors(rowi, col) = v(rowi, order[col]);
    }
    return out;
}

double eig_residual(const Matrix& m, const Matrix& vectors, double lambda, std::size_t col) {
    Vec v(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) v[i] = vectors(i, col);
    Vec mv = m.apply(v);
    for (std::size_t i = 0; i < mv.size(); ++i) mv[i] -= lambda * v[i];
    return norm2(mv);
}

}  // namespace

EigenSystem sym_eig(const Matrix& m, double tol, int max_sweeps) {
    Matrix s = symmetrized_checked(m, tol);
    return jacobi_eig(std::move(s), max_sweeps);
}

SpectralRange sym_eig_extremes(const Matrix& m, double tol, int max_sweeps) {
    Matrix s = symmetrized_checked(m, tol);
    EigenSystem es = jacobi_eig(s, max_sweeps);
    const std::size_t n = es.values.size();

    SpectralRange r;
    r.lambda_min = es.values.front();
    r.lambda_max = es.values.back();
    r.residual = std::max(eig_residual(s, es.vectors, r.lambda_min, 0),
                          eig_residual(s, es.vectors, r.lambda_max, n - 1));

    const double spectral_norm = std::max(std::abs(r.lambda_min), std::abs(r.lambda_max));
    if (r.residual > tol * spectral_norm && spectral_norm > 0.0) {
        throw NoConvergence("eigen-equation residual above requested tolerance");
    }
    return r;
}

namespace {

// Lower Cholesky factor; throws NotSpd on a non-positive pivot.
Matrix cholesky(const Matrix& m) {
    const std::size_t n = m.rows();
    Matrix l(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double s = m(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
            if (i == j) {
                if (s <= 0.0) throw NotSpd("Cholesky pivot is not positive");
                l(i, i) = std::sqrt(s);
            } else {
                l(i, j) = s / l(j, j);
            }
        }
    }
    return l;
}

Vec cholesky_solve(const Matrix& l, const Vec& b) {
    const std::size_t n = l.rows();
    Vec y(n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = b[i];
        for (std::size_t k = 0; k < i; ++k) s -= l(i, k) * y[k];
        y[i] = s / l(i, i);
    }
    Vec x(n);
    for (std::size_t ii = n; ii-- > 0;) {
        double s = y[ii];
        for (std::size_t k = ii + 1; k < n; ++k) s -= l(k, ii) * x[k];
        x[ii] = s / l(ii, ii);
    }
    return x;
}

}  // namespace

std::vector<Vec> solve_spd_many(const Matrix& m, const std::vector<Vec>& rhs, double tol) {
    Matrix s = symmetrized_checked(m, tol);
    Matrix l = cholesky(s);
    std::vector<Vec> out;
    out.reserve(rhs.size());
    for (const Vec& b : rhs) {
        if (b.size() != s.rows()) throw DimensionMismatch("solve_spd: rhs length differs");
        Vec x = cholesky_solve(l, b);
        // one step of iterative refinement
        Vec r = s.apply(x);
        for (std::size_t i = 0; i < r.size(); ++i) r[i] = b[i] - r[i];
        Vec dx = cholesky_solve(l, r);
        for (std::size_t i = 0; i < x.size(); ++i) x[i] += dx[i];
        out.push_back(std::move(x));
    }
    return out;
}

Vec solve_spd(const Matrix& m, const Vec& b, double tol) {
    return solve_spd_many(m, {b}, tol).front();
}

double determinant(const Matrix& m) {
    if (!m.square()) throw NotSquare("determinant: matrix is not square");
    Matrix a = m;
    const std::size_t n = a.rows();
    double det = 1.0;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t i = col + 1; i < n; ++i)
            if (std::abs(a(i, col)) > std::abs(a(pivot, col))) pivot = i;
        if (a(pivot, col) == 0.0) return 0.0;
        if (pivot != col) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a(pivot, j), a(col, j));
            det = -det;
        }
        det *= a(col, col);
        for (std::size_t i = col + 1; i < n; ++i) {
            const double f = a(i, col) / a(col, col);
            for (std::size_t j = col; j < n; ++j) a(i, j) -= f * a(col, j);
        }
    }
    return det;
}

}  // namespace framecast
