#pragma once

#include <optional>
#include <vector>

#include "framecast/frames.hpp"
#include "framecast/localglobal.hpp"
#include "framecast/projectors.hpp"

namespace framecast {

/// Finitely supported sequence on Z: coeffs[0] sits at index `offset`.
/// Stored in trimmed normal form (no leading/trailing zeros); the zero
/// sequence has empty coeffs and offset 0.
class SupportedVector {
public:
    SupportedVector() = default;
    SupportedVector(int offset, Vec coeffs);

    static SupportedVector delta(int position = 0);

    int offset() const { return offset_; }
    const Vec& coeffs() const { return coeffs_; }
    bool zero() const { return coeffs_.empty(); }
    int support_min() const { return offset_; }
    int support_max() const { return offset_ + static_cast<int>(coeffs_.size()) - 1; }
    std::size_t support_length() const { return coeffs_.size(); }

    double at(int t) const;
    SupportedVector shifted(int by) const;

    bool operator==(const SupportedVector& rhs) const {
        return offset_ == rhs.offset_ && coeffs_ == rhs.coeffs_;
    }

private:
    int offset_ = 0;
    Vec coeffs_;
};

SupportedVector convolve(const SupportedVector& a, const SupportedVector& b);

/// k-fold self-convolution; k = 0 is the unit impulse at 0.
SupportedVector conv_power(const SupportedVector& a, unsigned k);

/// Window placement rule for the tiling of Z by copies of I = {0..N}:
/// Disjoint uses stride N+1 (true partition), PaperOverlap stride N
/// (adjacent windows share one endpoint).
enum class WindowConvention { Disjoint, PaperOverlap };

enum class GammaVariant { L2, L1 };

const char* to_string(WindowConvention c);
const char* to_string(GammaVariant v);

struct DSSystemSpec {
    SupportedVector kernel;
    std::size_t window_len = 0;        // N + 1
    std::vector<std::size_t> omega;    // sampling positions, subset of {0..N}
    unsigned iterations = 0;           // K: powers k = 0..K
    WindowConvention convention = WindowConvention::Disjoint;
    std::optional<int> stride_override;

    int stride() const;
    void validate() const;
};

/// The window system {a^k * delta_i restricted to I}, labelled (i,k).
VectorSystem ds_local_system(const DSSystemSpec& spec);

struct GammaPair {
    double l2 = 0.0;  // summed l2 norms of off-window restrictions
    double l1 = 0.0;  // summed absolute values outside the home window
};

/// Exact leakage computation (finite support makes both sums finite).
GammaPair gamma(const DSSystemSpec& spec);

struct IndexWindow {
    int lo = 0;
    int hi = 0;
};

struct DSReport {
    FrameBounds local_bounds;  // (alpha, beta) of the window system
    double gamma_l2 = 0.0;
    double gamma_l1 = 0.0;
    GammaVariant variant = GammaVariant::L2;
    double gamma_selected = 0.0;
    std::optional<FrameBounds> predicted;  // (alpha - gamma, beta + gamma)
    FrameBounds measured;      // interior-restricted bounds on the truncation
    FrameBounds full_bounds;   // bounds of the whole truncated system
    GlueVerdict verdict = GlueVerdict::ConditionFailed;
    std::size_t truncation_blocks = 0;
    std::optional<double> det_phi;  // only when the window system is square
    double sigma_min = 0.0;         // sqrt of the local lower bound
};

/// The global iterate system realized on `truncation_blocks` consecutive
/// windows centered at block 0 (odd count). Iterates whose support crosses
/// the truncation boundary are clipped; `domain_out`, when given, receives
/// the realized index range.
VectorSystem ds_global_system(const DSSystemSpec& spec, std::size_t truncation_blocks,
                              IndexWindow* domain_out = nullptr);

/// Realizes the global iterate system on `truncation_blocks` consecutive
/// windows (odd count, centered at block 0) and certifies the predicted
/// bounds against test directions supported in the middle third of the
/// truncated domain (boundary effects excluded).
DSReport ds_check(const DSSystemSpec& spec, std::size_t truncation_blocks, double tol,
                  GammaVariant variant = GammaVariant::L2);

/// Union of integer-shifted copies of a window system embedded in a finite
/// domain. A copy that does not fit entirely is an error, never clipped.
VectorSystem shifted_assembly(const VectorSystem& window_system, const std::vector<int>& shifts,
                              IndexWindow domain);

/// Iterates {D^n g} for n = 0..L-1 over block-supported generators of a
/// diagonal operator; n is the outer (slowest) index.
VectorSystem diag_ds_system(const Matrix& diag_op, const PartitionProjectors& blocks,
                            const LocalSystem& generators, std::size_t iterations);

}  // namespace framecast
