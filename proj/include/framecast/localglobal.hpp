#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "framecast/frames.hpp"
#include "framecast/projectors.hpp"

namespace framecast {

/// Patch-indexed generators: patches[j] holds the generators g_{jk} of
/// patch j. Ragged generator counts are allowed.
struct LocalSystem {
    std::size_t dim = 0;
    std::vector<std::vector<Vec>> patches;

    void validate() const;
    std::size_t patch_count() const { return patches.size(); }
    std::size_t max_generators() const;
};

/// Family of square operators T_j on a shared space.
struct OperatorFamily {
    std::size_t dim = 0;
    std::vector<Matrix> members;

    void validate() const;
};

/// Nonnegative finitely-supported envelope on integer offsets for one
/// generator index; dominates cross-patch restriction norms.
struct EnvelopeSequence {
    std::size_t k = 0;
    std::map<int, double> values;  // offset m != 0 -> c_k(m); zeros omitted
    double l1 = 0.0;

    double at(int m) const;
};

enum class GlueVerdict { Certified, HypothesisFailed, ConditionFailed };

const char* to_string(GlueVerdict v);

struct HypothesisCheck {
    std::string name;
    bool pass = false;
    double magnitude = 0.0;
};

/// Union of the operator-mapped local systems {T_j^T T_j g_{jk}},
/// labelled (j,k).
VectorSystem assemble_global(const OperatorFamily& ops, const LocalSystem& local);

/// Certificate for the operator-family gluing bound (alpha*A, beta*B).
struct PropOfCertificate {
    FrameBounds fusion;         // (A, B): extremes of sum_j T_j^T T_j
    FrameBounds local_uniform;  // (alpha, beta): min/max of per-patch bounds
    std::optional<FrameBounds> predicted;  // (alpha*A, beta*B)
    FrameBounds measured;                  // bounds of the assembled system
    std::vector<HypothesisCheck> hypothesis_report;
    GlueVerdict verdict = GlueVerdict::HypothesisFailed;
};

/// Forward gluing check: local bounds are computed on an orthonormal basis
/// of range(T_j) obtained by rank-revealing eigendecomposition of T_j T_j^T.
/// Throws RankDeficiencyAmbiguous when singular values straddle the rank
/// tolerance (within a factor of 10 either side of tol * sigma_max).
PropOfCertificate verify_prop_of(const OperatorFamily& ops, const LocalSystem& local, double tol);

/// Converse direction: certified bounds for sum_j ||T_j f||^2 deduced from
/// uniform local bounds and measured global bounds.
FrameBounds deduce_fusion_bounds(const FrameBounds& local_uniform,
                                 const FrameBounds& global_measured);

/// Minimal admissible envelopes with the diagonal excluded:
/// c_k(m) = max_j ||P_{j-m} g_{jk}|| for m != 0 and c_k(0) = 0.
/// The diagonal is excluded because the bound derivation only uses
/// envelopes on cross-patch terms; including it would make the smallness
/// condition unachievable for generators of norm >= alpha.
std::vector<EnvelopeSequence> envelope(const PartitionProjectors& partition,
                                       const LocalSystem& local);

/// Certificate for the l1-envelope gluing theorem. Two predicted-bound
/// candidates are reported and checked against measurement:
///   statement form: (alpha - S, beta + S) with S = sum_k ||c_k||_1,
///   derivation form: ((sqrt(alpha) - sqrt(Q))^2, (sqrt(beta) + sqrt(Q))^2)
///     with Q = sum_k ||c_k||_1^2.
struct L1Certificate {
    FrameBounds local_uniform;  // (alpha, beta) over blocks
    std::vector<EnvelopeSequence> envelopes;
    double sum_l1 = 0.0;     // S
    double sum_l1_sq = 0.0;  // Q
    std::optional<FrameBounds> predicted_statement;
    std::optional<FrameBounds> predicted_proof;
    bool statement_brackets = false;
    bool proof_brackets = false;
    FrameBounds measured;  // bounds of the flattened {g_{jk}}
    std::vector<HypothesisCheck> hypothesis_report;
    GlueVerdict verdict = GlueVerdict::ConditionFailed;

    /// The tighter certified candidate (larger predicted lower bound), if any.
    std::optional<FrameBounds> best_predicted() const;
};

/// Full l1-envelope check. Per-block local systems are the in-block
/// restrictions {P_j g_{jk}}_k viewed in the block's coordinates; throws
/// LocalNotUniformFrame when some block's lower bound is <= tol.
L1Certificate theorem_l1_check(const PartitionProjectors& partition, const LocalSystem& local,
                               double tol);

}  // namespace framecast
