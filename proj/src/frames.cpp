#include "framecast/frames.hpp"

#include <algorithm>
#include <cmath>

namespace framecast {

void VectorSystem::validate() const {
    if (dim == 0) throw InvalidArgument("vector system: dim must be positive");
    if (vectors.empty()) throw InvalidArgument("vector system: needs at least one vector");
    for (const Vec& v : vectors) {
        if (v.size() != dim) throw DimensionMismatch("vector system: vector length differs from dim");
        for (double x : v) {
            if (!std::isfinite(x)) throw InvalidArgument("vector system: entries must be finite");
        }
    }
    if (!labels.empty() && labels.size() != vectors.size()) {
        throw DimensionMismatch("vector system: label count differs from vector count");
    }
}

const char* to_string(Provenance p) {
    return p == Provenance::Measured ? "Measured" : "TheoremPredicted";
}

Matrix analysis_matrix(const VectorSystem& sys) {
    sys.validate();
    return Matrix::from_rows(sys.vectors);
}

Matrix frame_operator(const VectorSystem& sys) {
    sys.validate();
    Matrix s(sys.dim, sys.dim);
    for (const Vec& v : sys.vectors) {
        for (std::size_t a = 0; a < sys.dim; ++a) {
            if (v[a] == 0.0) continue;
            for (std::size_t b = 0; b < sys.dim; ++b) {
                s(a, b) += v[a] * v[b];
            }
        }
    }
    return s;
}

FrameBounds frame_bounds(const VectorSystem& sys, double tol) {
    const SpectralRange r = sym_eig_extremes(frame_operator(sys), tol);
    FrameBounds b;
    b.lower = std::max(0.0, r.lambda_min);
    b.upper = std::max(b.lower, r.lambda_max);
    b.provenance = Provenance::Measured;
    return b;
}

FrameVerdict is_frame(const VectorSystem& sys, double tol) {
    FrameVerdict v;
    v.bounds = frame_bounds(sys, tol);
    v.frame = v.bounds.lower > tol;
    return v;
}

VectorSystem canonical_dual(const VectorSystem& sys, double tol) {
    const FrameVerdict v = is_frame(sys, tol);
    if (!v.frame) throw NotAFrame("canonical dual: lower frame bound is not above tolerance");
    const Matrix s = frame_operator(sys);
    VectorSystem dual;
    dual.dim = sys.dim;
    dual.vectors = solve_spd_many(s, sys.vectors, tol);
    dual.labels = sys.labels;
    return dual;
}

Vec reconstruct(const VectorSystem& dual, const Vec& coefficients) {
    dual.validate();
    if (coefficients.size() != dual.vectors.size()) {
        throw DimensionMismatch("reconstruct: coefficient count differs from dual size");
    }
    Vec out(dual.dim, 0.0);
    for (std::size_t i = 0; i < coefficients.size(); ++i) {
        const double c = coefficients[i];
        if (c == 0.0) continue;
        for (std::size_t a = 0; a < dual.dim; ++a) out[a] += c * dual.vectors[i][a];
    }
    return out;
}

}  // namespace framecast
