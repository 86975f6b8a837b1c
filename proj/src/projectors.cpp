#include "framecast/projectors.hpp"

#include <algorithm>
#include <sstream>

namespace framecast {

namespace {

void validate_projector(const Matrix& m, double tol, const char* what) {
    if (!m.square()) throw InvalidProjector(std::string(what) + ": matrix is not square");
    const double asym = m.asymmetry();
    if (asym > tol) {
        std::ostringstream os;
        os << what << ": symmetry violation " << asym << " exceeds tol " << tol;
        throw InvalidProjector(os.str());
    }
    const double idem = (m * m).max_abs_diff(m);
    if (idem > tol) {
        std::ostringstream os;
        os << what << ": idempotency violation " << idem << " exceeds tol " << tol;
        throw InvalidProjector(os.str());
    }
}

}  // namespace

Projector::Projector(Matrix matrix, double tol) : matrix_(std::move(matrix)), tol_(tol) {
    validate_projector(matrix_, tol_, "projector");
}

Projector Projector::coordinate(std::size_t dim, const std::vector<std::size_t>& support,
                                double tol) {
    Matrix m(dim, dim);
    for (std::size_t i : support) {
        if (i >= dim) throw InvalidArgument("coordinate projector: index out of range");
        m(i, i) = 1.0;
    }
    return Projector(std::move(m), tol);
}

void ProjectorFamily::validate() const {
    if (members.empty()) throw InvalidArgument("projector family: needs at least one member");
    for (const Projector& p : members) {
        if (p.dim() != dim) throw DimensionMismatch("projector family: member dimension differs");
    }
}

void PartitionProjectors::validate() const {
    if (dim == 0) throw InvalidArgument("partition: dim must be positive");
    std::vector<char> seen(dim, 0);
    for (const auto& block : blocks) {
        for (std::size_t i : block) {
            if (i >= dim) throw InvalidArgument("partition: index out of range");
            if (seen[i]) throw InvalidArgument("partition: blocks are not disjoint");
            seen[i] = 1;
        }
    }
    if (std::find(seen.begin(), seen.end(), 0) != seen.end()) {
        throw InvalidArgument("partition: blocks do not cover all coordinates");
    }
}

ProjectorFamily PartitionProjectors::family(double tol) const {
    validate();
    ProjectorFamily fam;
    fam.dim = dim;
    fam.members.reserve(blocks.size());
    for (const auto& block : blocks) fam.members.push_back(Projector::coordinate(dim, block, tol));
    return fam;
}

FrameBounds fusion_bounds(const ProjectorFamily& fam, double tol) {
    fam.validate();
    for (const Projector& p : fam.members) validate_projector(p.matrix(), tol, "fusion_bounds");
    Matrix sum(fam.dim, fam.dim);
    for (const Projector& p : fam.members) sum = sum + p.matrix();
    const SpectralRange r = sym_eig_extremes(sum, tol);
    FrameBounds b;
    b.lower = std::max(0.0, r.lambda_min);
    b.upper = std::max(b.lower, r.lambda_max);
    b.provenance = Provenance::Measured;
    return b;
}

bool is_complete(const ProjectorFamily& fam, double tol) {
    fam.validate();
    Matrix sum(fam.dim, fam.dim);
    for (const Projector& p : fam.members) sum = sum + p.matrix();
    return sym_eig_extremes(sum, tol).lambda_min > tol;
}

BandedCommutingVerdict check_banded_commuting(const ProjectorFamily& fam, std::size_t band,
                                              double tol) {
    fam.validate();
    if (band == 0) throw InvalidArgument("check_banded_commuting: band must be positive");
    BandedCommutingVerdict verdict;
    const std::size_t n = fam.members.size();
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = j + 1; k < n; ++k) {
            const Matrix pjpk = fam.members[j].matrix() * fam.members[k].matrix();
            const Matrix pkpj = fam.members[k].matrix() * fam.members[j].matrix();
            const double comm = pjpk.max_abs_diff(pkpj);
            if (comm > tol) {
                verdict.violations.push_back({j, k, comm, PairViolation::Kind::NonCommuting});
            }
            if (k - j >= band) {
                const double prod = pjpk.max_abs();
                if (prod > tol) {
                    verdict.violations.push_back({j, k, prod, PairViolation::Kind::NonZeroProduct});
                }
            }
        }
    }
    verdict.pass = verdict.violations.empty();
    return verdict;
}

ProjectorFamily disjointify(const ProjectorFamily& fam, double tol) {
    fam.validate();
    // Band = family size disables the zero-product clause; only the
    // commuting hypothesis is needed for the recursion's algebra.
    const BandedCommutingVerdict comm = check_banded_commuting(fam, fam.members.size() + 1, tol);
    if (!comm.pass) {
        const PairViolation& v = comm.violations.front();
        std::ostringstream os;
        os << "disjointify: members " << v.j << " and " << v.k << " do not commute (magnitude "
           << v.magnitude << ")";
        throw HypothesisViolated(os.str());
    }

    ProjectorFamily out;
    out.dim = fam.dim;
    out.members.reserve(fam.members.size());
    Matrix running(fam.dim, fam.dim);  // sum of Q_k built so far
    for (std::size_t n = 0; n < fam.members.size(); ++n) {
        const Matrix& p = fam.members[n].matrix();
        Matrix q = (n == 0) ? p : p - (p * running);
        running = running + q;
        try {
            // The recursion is algebraically exact under commutation; allow
            // 100*tol of accumulated roundoff before rejecting.
            out.members.emplace_back(std::move(q), 100.0 * tol);
        } catch (const InvalidProjector& e) {
            throw HypothesisViolated(std::string("disjointify: constructed Q is not a projector (") +
                                     e.what() + ")");
        }
    }
    return out;
}

}  // namespace framecast
