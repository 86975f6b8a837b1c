#pragma once

#include <string>
#include <vector>

#include "framecast/linalg.hpp"

namespace framecast {

/// Finite family of vectors in R^dim. Labels are optional opaque tags
/// recording each vector's origin (either empty or one per vector).
struct VectorSystem {
    std::size_t dim = 0;
    std::vector<Vec> vectors;
    std::vector<std::string> labels;

    void validate() const;
};

enum class Provenance { Measured, TheoremPredicted };

const char* to_string(Provenance p);

/// Certified pair of frame bounds attached to a system.
struct FrameBounds {
    double lower = 0.0;
    double upper = 0.0;
    Provenance provenance = Provenance::Measured;
};

/// Matrix whose rows are the system's vectors, so row i of (analysis * f)
/// is the coefficient <f, f_i>.
Matrix analysis_matrix(const VectorSystem& sys);

/// Frame operator S = Phi^T Phi = sum_i f_i f_i^T.
Matrix frame_operator(const VectorSystem& sys);

/// Optimal (tight) frame bounds: the extreme eigenvalues of the frame
/// operator. The lower bound is clamped at zero (S is a Gram matrix).
FrameBounds frame_bounds(const VectorSystem& sys, double tol);

struct FrameVerdict {
    bool frame = false;
    FrameBounds bounds;
};

/// A system is a frame iff its optimal lower bound exceeds tol. In finite
/// dimensions the upper (Bessel) bound always exists.
FrameVerdict is_frame(const VectorSystem& sys, double tol);

/// Canonical dual {S^{-1} f_i}. Throws NotAFrame if the lower bound <= tol.
VectorSystem canonical_dual(const VectorSystem& sys, double tol);

/// Sum of coefficient-weighted dual vectors: sum_i c_i * dual_i.
Vec reconstruct(const VectorSystem& dual, const Vec& coefficients);

}  // namespace framecast
