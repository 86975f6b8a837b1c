#pragma once

#include <cstddef>
#include <vector>

#include "framecast/frames.hpp"
#include "framecast/linalg.hpp"

namespace framecast {

/// Orthogonal projector: a symmetric idempotent matrix, validated at
/// construction against the stored tolerance. Downstream operations trust
/// the invariants; violations are rejected, never repaired.
class Projector {
public:
    Projector(Matrix matrix, double tol);

    static Projector coordinate(std::size_t dim, const std::vector<std::size_t>& support,
                                double tol);

    const Matrix& matrix() const { return matrix_; }
    double tol() const { return tol_; }
    std::size_t dim() const { return matrix_.rows(); }

private:
    Matrix matrix_;
    double tol_;
};

/// Ordered family of projectors on a shared space. The order is significant:
/// disjointify's recursion follows it.
struct ProjectorFamily {
    std::size_t dim = 0;
    std::vector<Projector> members;

    void validate() const;
};

/// Pairwise-disjoint coordinate blocks covering {0..dim-1}: a resolution of
/// the identity by coordinate projectors.
struct PartitionProjectors {
    std::size_t dim = 0;
    std::vector<std::vector<std::size_t>> blocks;

    void validate() const;
    ProjectorFamily family(double tol) const;
};

/// Optimal fusion-frame bounds: extreme eigenvalues of sum_j P_j.
FrameBounds fusion_bounds(const ProjectorFamily& fam, double tol);

/// True iff the members' kernels intersect trivially, decided spectrally:
/// lambda_min(sum_j P_j) > tol.
bool is_complete(const ProjectorFamily& fam, double tol);

struct PairViolation {
    enum class Kind { NonCommuting, NonZeroProduct };
    std::size_t j = 0;
    std::size_t k = 0;
    double magnitude = 0.0;
    Kind kind = Kind::NonCommuting;
};

struct BandedCommutingVerdict {
    bool pass = false;
    std::vector<PairViolation> violations;
};

/// Checks that all pairs commute and that pairs at index distance >= band
/// have zero product; the verdict lists every violating pair.
BandedCommutingVerdict check_banded_commuting(const ProjectorFamily& fam, std::size_t band,
                                              double tol);

/// Sequential disjointification Q_1 = P_1, Q_n = P_n - P_n sum_{k<n} Q_k.
/// Requires a pairwise-commuting family; yields mutually orthogonal
/// projectors dominated by the P family.
ProjectorFamily disjointify(const ProjectorFamily& fam, double tol);

}  // namespace framecast
