#include "framecast/localglobal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace framecast {

void LocalSystem::validate() const {
    if (dim == 0) throw InvalidArgument("local system: dim must be positive");
    if (patches.empty()) throw InvalidArgument("local system: needs at least one patch");
    for (const auto& patch : patches) {
        for (const Vec& g : patch) {
            if (g.size() != dim) throw DimensionMismatch("local system: generator length differs from dim");
        }
    }
}

std::size_t LocalSystem::max_generators() const {
    std::size_t m = 0;
    for (const auto& patch : patches) m = std::max(m, patch.size());
    return m;
}

void OperatorFamily::validate() const {
    if (dim == 0) throw InvalidArgument("operator family: dim must be positive");
    if (members.empty()) throw InvalidArgument("operator family: needs at least one member");
    for (const Matrix& t : members) {
        if (!t.square() || t.rows() != dim) {
            throw DimensionMismatch("operator family: members must be dim x dim");
        }
    }
}

double EnvelopeSequence::at(int m) const {
    auto it = values.find(m);
    return it == values.end() ? 0.0 : it->second;
}

const char* to_string(GlueVerdict v) {
    switch (v) {
        case GlueVerdict::Certified: return "Certified";
        case GlueVerdict::HypothesisFailed: return "HypothesisFailed";
        default: return "ConditionFailed";
    }
}

namespace {

std::string pair_label(std::size_t j, std::size_t k) {
    std::ostringstream os;
    os << "(" << j << "," << k << ")";
    return os.str();
}

}  // namespace

VectorSystem assemble_global(const OperatorFamily& ops, const LocalSystem& local) {
    ops.validate();
    local.validate();
    if (ops.dim != local.dim) throw DimensionMismatch("assemble_global: dims differ");
    if (ops.members.size() != local.patch_count()) {
        throw DimensionMismatch("assemble_global: patch count differs from operator count");
    }
    VectorSystem out;
    out.dim = local.dim;
    for (std::size_t j = 0; j < ops.members.size(); ++j) {
        const Matrix m = ops.members[j].transpose() * ops.members[j];
        for (std::size_t k = 0; k < local.patches[j].size(); ++k) {
            out.vectors.push_back(m.apply(local.patches[j][k]));
            out.labels.push_back(pair_label(j, k));
        }
    }
    out.validate();
    return out;
}

namespace {

// Orthonormal basis of range(T) as columns, by eigendecomposition of T T^T.
// Ambiguity guard: any singular value within a decade of the rank threshold
// is rejected. Singular values obtained through the Gram matrix cannot be
// resolved below ~sqrt(machine eps) relative to sigma_max; anything under
// that floor counts as an exact zero, and the rank threshold never drops
// below it.
Matrix range_basis(const Matrix& t, double tol, std::size_t* rank_out) {
    const Matrix g = t * t.transpose();
    const EigenSystem es = sym_eig(g, tol);
    const std::size_t n = es.values.size();
    const double lambda_max = std::max(0.0, es.values.back());
    if (lambda_max == 0.0) {
        *rank_out = 0;
        return Matrix();  // zero operator: trivial range
    }
    const double sigma_max = std::sqrt(lambda_max);
    const double sigma_floor = std::sqrt(static_cast<double>(n) * 1e-14 * lambda_max);
    const double threshold = std::max(tol * sigma_max, sigma_floor);
    std::size_t rank = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double sigma = std::sqrt(std::max(0.0, es.values[i]));
        if (sigma <= sigma_floor) continue;
        if (sigma > threshold * 0.1 && sigma < threshold * 10.0) {
            std::ostringstream os;
            os << "singular value " << sigma << " straddles rank tolerance " << threshold;
            throw RankDeficiencyAmbiguous(os.str());
        }
        if (sigma >= threshold) ++rank;
    }
    *rank_out = rank;
    Matrix basis(t.rows(), rank == 0 ? 1 : rank);
    // eigenvalues ascending: the top `rank` columns span the range
    for (std::size_t c = 0; c < rank; ++c) {
        const std::size_t src = n - rank + c;
        for (std::size_t r = 0; r < t.rows(); ++r) basis(r, c) = es.vectors(r, src);
    }
    return basis;
}

struct LocalUniform {
    double alpha = std::numeric_limits<double>::infinity();
    double beta = 0.0;
    bool any_patch = false;
    bool degenerate = false;  // some nontrivial patch has lower bound ~ 0
    double worst_lower = std::numeric_limits<double>::infinity();
};

}  // namespace

PropOfCertificate verify_prop_of(const OperatorFamily& ops, const LocalSystem& local, double tol) {
    ops.validate();
    local.validate();
    if (ops.dim != local.dim) throw DimensionMismatch("verify_prop_of: dims differ");
    if (ops.members.size() != local.patch_count()) {
        throw DimensionMismatch("verify_prop_of: patch count differs from operator count");
    }

    PropOfCertificate cert;

    Matrix fusion_sum(ops.dim, ops.dim);
    for (const Matrix& t : ops.members) fusion_sum = fusion_sum + t.transpose() * t;
    const SpectralRange ab = sym_eig_extremes(fusion_sum, tol);
    cert.fusion = {std::max(0.0, ab.lambda_min), std::max(0.0, ab.lambda_max),
                   Provenance::Measured};

    LocalUniform lu;
    for (std::size_t j = 0; j < ops.members.size(); ++j) {
        std::size_t rank = 0;
        const Matrix basis = range_basis(ops.members[j], tol, &rank);
        if (rank == 0) continue;  // trivial range: no local constraint
        lu.any_patch = true;
        if (local.patches[j].empty()) {
            lu.degenerate = true;
            lu.worst_lower = 0.0;
            continue;
        }
        VectorSystem coords;
        coords.dim = rank;
        for (const Vec& g : local.patches[j]) {
            const Vec tg = ops.members[j].apply(g);
            Vec w(rank, 0.0);
            for (std::size_t c = 0; c < rank; ++c) {
                double s = 0.0;
                for (std::size_t r = 0; r < ops.dim; ++r) s += basis(r, c) * tg[r];
                w[c] = s;
            }
            coords.vectors.push_back(std::move(w));
        }
        const FrameBounds fb = frame_bounds(coords, tol);
        lu.alpha = std::min(lu.alpha, fb.lower);
        lu.beta = std::max(lu.beta, fb.upper);
        lu.worst_lower = std::min(lu.worst_lower, fb.lower);
        if (fb.lower <= tol) lu.degenerate = true;
    }
    if (!lu.any_patch) {
        lu.alpha = 0.0;
        lu.degenerate = true;
        lu.worst_lower = 0.0;
    }
    cert.local_uniform = {lu.alpha == std::numeric_limits<double>::infinity() ? 0.0 : lu.alpha,
                          lu.beta, Provenance::Measured};

    cert.hypothesis_report.push_back(
        {"operator_family_lower_positive", cert.fusion.lower > tol, cert.fusion.lower});
    cert.hypothesis_report.push_back(
        {"uniform_local_lower_positive", !lu.degenerate && cert.local_uniform.lower > tol,
         lu.worst_lower == std::numeric_limits<double>::infinity() ? 0.0 : lu.worst_lower});

    cert.measured = frame_bounds(assemble_global(ops, local), tol);

    const bool hypotheses_ok =
        std::all_of(cert.hypothesis_report.begin(), cert.hypothesis_report.end(),
                    [](const HypothesisCheck& h) { return h.pass; });
    if (!hypotheses_ok) {
        cert.verdict = GlueVerdict::HypothesisFailed;
        return cert;
    }

    cert.predicted = FrameBounds{cert.local_uniform.lower * cert.fusion.lower,
                                 cert.local_uniform.upper * cert.fusion.upper,
                                 Provenance::TheoremPredicted};
    const bool brackets = cert.measured.lower >= cert.predicted->lower - tol &&
                          cert.measured.upper <= cert.predicted->upper + tol;
    cert.verdict = (cert.predicted->lower > tol && brackets) ? GlueVerdict::Certified
                                                             : GlueVerdict::ConditionFailed;
    return cert;
}

FrameBounds deduce_fusion_bounds(const FrameBounds& local_uniform,
                                 const FrameBounds& global_measured) {
    if (local_uniform.lower <= 0.0) {
        throw DegenerateLocalBounds("deduce_fusion_bounds: local lower bound must be positive");
    }
    return {global_measured.lower / local_uniform.upper,
            global_measured.upper / local_uniform.lower, Provenance::TheoremPredicted};
}

namespace {

double block_restriction_norm(const Vec& g, const std::vector<std::size_t>& block) {
    double s = 0.0;
    for (std::size_t i : block) s += g[i] * g[i];
    return std::sqrt(s);
}

}  // namespace

std::vector<EnvelopeSequence> envelope(const PartitionProjectors& partition,
                                       const LocalSystem& local) {
    partition.validate();
    local.validate();
    if (partition.dim != local.dim) throw DimensionMismatch("envelope: dims differ");
    const std::size_t patch_count = local.patch_count();
    if (partition.blocks.size() != patch_count) {
        throw DimensionMismatch("envelope: patch count differs from block count");
    }

    std::vector<EnvelopeSequence> envelopes;
    const std::size_t union_k = local.max_generators();
    envelopes.reserve(union_k);
    const int span = static_cast<int>(patch_count);
    for (std::size_t k = 0; k < union_k; ++k) {
        EnvelopeSequence env;
        env.k = k;
        for (int m = -(span - 1); m < span; ++m) {
            if (m == 0) continue;  // diagonal excluded by convention
            double worst = 0.0;
            for (int j = 0; j < span; ++j) {
                const int r = j - m;
                if (r < 0 || r >= span) continue;
                const auto& patch = local.patches[static_cast<std::size_t>(j)];
                if (k >= patch.size()) continue;
                worst = std::max(
                    worst, block_restriction_norm(patch[k],
                                                  partition.blocks[static_cast<std::size_t>(r)]));
            }
            if (worst > 0.0) {
                env.values[m] = worst;
                env.l1 += worst;
            }
        }
        envelopes.push_back(std::move(env));
    }
    return envelopes;
}

std::optional<FrameBounds> L1Certificate::best_predicted() const {
    if (predicted_statement && predicted_proof) {
        return predicted_statement->lower >= predicted_proof->lower ? predicted_statement
                                                                    : predicted_proof;
    }
    if (predicted_statement) return predicted_statement;
    return predicted_proof;
}

L1Certificate theorem_l1_check(const PartitionProjectors& partition, const LocalSystem& local,
                               double tol) {
    partition.validate();
    local.validate();
    if (partition.dim != local.dim) throw DimensionMismatch("theorem_l1_check: dims differ");
    if (partition.blocks.size() != local.patch_count()) {
        throw DimensionMismatch("theorem_l1_check: patch count differs from block count");
    }

    L1Certificate cert;

    double alpha = std::numeric_limits<double>::infinity();
    double beta = 0.0;
    for (std::size_t j = 0; j < partition.blocks.size(); ++j) {
        const auto& block = partition.blocks[j];
        if (block.empty()) continue;  // trivial subspace: no constraint
        if (local.patches[j].empty()) {
            std::ostringstream os;
            os << "block " << j << " has no generators";
            throw LocalNotUniformFrame(os.str());
        }
        VectorSystem in_block;
        in_block.dim = block.size();
        for (const Vec& g : local.patches[j]) {
            Vec w(block.size());
            for (std::size_t c = 0; c < block.size(); ++c) w[c] = g[block[c]];
            in_block.vectors.push_back(std::move(w));
        }
        const FrameBounds fb = frame_bounds(in_block, tol);
        if (fb.lower <= tol) {
            std::ostringstream os;
            os << "block " << j << " local lower bound " << fb.lower << " is not above tol";
            throw LocalNotUniformFrame(os.str());
        }
        alpha = std::min(alpha, fb.lower);
        beta = std::max(beta, fb.upper);
    }
    if (alpha == std::numeric_limits<double>::infinity()) {
        throw LocalNotUniformFrame("no nontrivial blocks");
    }
    cert.local_uniform = {alpha, beta, Provenance::Measured};

    cert.envelopes = envelope(partition, local);
    for (const EnvelopeSequence& env : cert.envelopes) {
        cert.sum_l1 += env.l1;
        cert.sum_l1_sq += env.l1 * env.l1;
    }

    if (cert.sum_l1 < alpha - tol) {
        cert.predicted_statement = FrameBounds{alpha - cert.sum_l1, beta + cert.sum_l1,
                                               Provenance::TheoremPredicted};
    }
    if (cert.sum_l1_sq < alpha - tol) {
        const double root = std::sqrt(cert.sum_l1_sq);
        cert.predicted_proof =
            FrameBounds{(std::sqrt(alpha) - root) * (std::sqrt(alpha) - root),
                        (std::sqrt(beta) + root) * (std::sqrt(beta) + root),
                        Provenance::TheoremPredicted};
    }

    VectorSystem flat;
    flat.dim = local.dim;
    for (std::size_t j = 0; j < local.patch_count(); ++j) {
        for (std::size_t k = 0; k < local.patches[j].size(); ++k) {
            flat.vectors.push_back(local.patches[j][k]);
            flat.labels.push_back(pair_label(j, k));
        }
    }
    cert.measured = frame_bounds(flat, tol);

    const auto brackets = [&](const FrameBounds& cand) {
        return cert.measured.lower >= cand.lower - tol && cert.measured.upper <= cand.upper + tol;
    };
    if (cert.predicted_statement) cert.statement_brackets = brackets(*cert.predicted_statement);
    if (cert.predicted_proof) cert.proof_brackets = brackets(*cert.predicted_proof);

    cert.hypothesis_report.push_back({"uniform_local_lower_positive", alpha > tol, alpha});
    cert.hypothesis_report.push_back(
        {"statement_condition_sum_l1_below_alpha", cert.predicted_statement.has_value(),
         cert.sum_l1});
    cert.hypothesis_report.push_back(
        {"derivation_condition_sum_l1_sq_below_alpha", cert.predicted_proof.has_value(),
         cert.sum_l1_sq});

    cert.verdict = (cert.predicted_statement || cert.predicted_proof)
                       ? GlueVerdict::Certified
                       : GlueVerdict::ConditionFailed;
    return cert;
}

}  // namespace framecast
