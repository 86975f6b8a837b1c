#include "framecast/dynsamp.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace framecast {

SupportedVector::SupportedVector(int offset, Vec coeffs) : offset_(offset), coeffs_(std::move(coeffs)) {
    for (double x : coeffs_) {
        if (!std::isfinite(x)) throw InvalidArgument("supported vector: entries must be finite");
    }
    std::size_t first = 0;
    while (first < coeffs_.size() && coeffs_[first] == 0.0) ++first;
    std::size_t last = coeffs_.size();
    while (last > first && coeffs_[last - 1] == 0.0) --last;
    if (first == last) {
        offset_ = 0;
        coeffs_.clear();
    } else {
        offset_ += static_cast<int>(first);
        coeffs_ = Vec(coeffs_.begin() + static_cast<std::ptrdiff_t>(first),
                      coeffs_.begin() + static_cast<std::ptrdiff_t>(last));
    }
}

SupportedVector SupportedVector::delta(int position) {
    return SupportedVector(position, Vec{1.0});
}

double SupportedVector::at(int t) const {
    if (zero() || t < support_min() || t > support_max()) return 0.0;
    return coeffs_[static_cast<std::size_t>(t - offset_)];
}

SupportedVector SupportedVector::shifted(int by) const {
    if (zero()) return *this;
    return SupportedVector(offset_ + by, coeffs_);
}

SupportedVector convolve(const SupportedVector& a, const SupportedVector& b) {
    if (a.zero() || b.zero()) return SupportedVector();
    Vec out(a.support_length() + b.support_length() - 1, 0.0);
    for (std::size_t i = 0; i < a.support_length(); ++i) {
        const double ai = a.coeffs()[i];
        if (ai == 0.0) continue;
        for (std::size_t j = 0; j < b.support_length(); ++j) {
            out[i + j] += ai * b.coeffs()[j];
        }
    }
    return SupportedVector(a.offset() + b.offset(), std::move(out));
}

SupportedVector conv_power(const SupportedVector& a, unsigned k) {
    SupportedVector acc = SupportedVector::delta(0);
    for (unsigned i = 0; i < k; ++i) acc = convolve(acc, a);
    return acc;
}

const char* to_string(WindowConvention c) {
    return c == WindowConvention::Disjoint ? "disjoint" : "paper_overlap";
}

const char* to_string(GammaVariant v) { return v == GammaVariant::L2 ? "l2" : "l1"; }

int DSSystemSpec::stride() const {
    if (stride_override) return *stride_override;
    const int n = static_cast<int>(window_len) - 1;
    return convention == WindowConvention::Disjoint ? n + 1 : n;
}

void DSSystemSpec::validate() const {
    if (window_len == 0) throw InvalidArgument("ds spec: window_len must be positive");
    if (omega.empty()) throw InvalidArgument("ds spec: omega must be nonempty");
    for (std::size_t i : omega) {
        if (i >= window_len) throw InvalidArgument("ds spec: omega indices must lie in the window");
    }
    if (stride() <= 0) throw InvalidArgument("ds spec: stride must be positive");
}

VectorSystem ds_local_system(const DSSystemSpec& spec) {
    spec.validate();
    VectorSystem sys;
    sys.dim = spec.window_len;
    for (std::size_t i : spec.omega) {
        for (unsigned k = 0; k <= spec.iterations; ++k) {
            const SupportedVector v = conv_power(spec.kernel, k).shifted(static_cast<int>(i));
            Vec dense(spec.window_len, 0.0);
            for (std::size_t t = 0; t < spec.window_len; ++t) dense[t] = v.at(static_cast<int>(t));
            sys.vectors.push_back(std::move(dense));
            std::ostringstream os;
            os << "(" << i << "," << k << ")";
            sys.labels.push_back(os.str());
        }
    }
    sys.validate();
    return sys;
}

GammaPair gamma(const DSSystemSpec& spec) {
    spec.validate();
    const int n = static_cast<int>(spec.window_len) - 1;
    const int s = spec.stride();
    GammaPair g;
    for (std::size_t i : spec.omega) {
        for (unsigned k = 0; k <= spec.iterations; ++k) {
            const SupportedVector v = conv_power(spec.kernel, k).shifted(static_cast<int>(i));
            if (v.zero()) continue;
            for (int t = v.support_min(); t <= v.support_max(); ++t) {
                if (t < 0 || t > n) g.l1 += std::abs(v.at(t));
            }
            // windows I_j = {j*s .. j*s + n} intersecting the support
            const int j_lo = static_cast<int>(
                std::floor(static_cast<double>(v.support_min() - n) / s));
            const int j_hi = static_cast<int>(
                std::floor(static_cast<double>(v.support_max()) / s));
            for (int j = j_lo; j <= j_hi; ++j) {
                if (j == 0) continue;
                double ss = 0.0;
                for (int t = j * s; t <= j * s + n; ++t) {
                    const double x = v.at(t);
                    ss += x * x;
                }
                g.l2 += std::sqrt(ss);
            }
        }
    }
    return g;
}

VectorSystem ds_global_system(const DSSystemSpec& spec, std::size_t truncation_blocks,
                              IndexWindow* domain_out) {
    spec.validate();
    if (truncation_blocks == 0 || truncation_blocks % 2 == 0) {
        throw InvalidArgument("ds_global_system: truncation_blocks must be odd and positive");
    }
    const int n = static_cast<int>(spec.window_len) - 1;
    const int s = spec.stride();
    const int half = static_cast<int>(truncation_blocks - 1) / 2;
    const int lo = -half * s;
    const int hi = half * s + n;
    if (domain_out) *domain_out = {lo, hi};

    VectorSystem global;
    global.dim = static_cast<std::size_t>(hi - lo + 1);
    for (int j = -half; j <= half; ++j) {
        for (std::size_t i : spec.omega) {
            const int center = static_cast<int>(i) + j * s;
            for (unsigned k = 0; k <= spec.iterations; ++k) {
                const SupportedVector v = conv_power(spec.kernel, k).shifted(center);
                Vec dense(global.dim, 0.0);
                for (int t = lo; t <= hi; ++t) dense[static_cast<std::size_t>(t - lo)] = v.at(t);
                global.vectors.push_back(std::move(dense));
                std::ostringstream os;
                os << "(" << j << "," << i << "," << k << ")";
                global.labels.push_back(os.str());
            }
        }
    }
    global.validate();
    return global;
}

DSReport ds_check(const DSSystemSpec& spec, std::size_t truncation_blocks, double tol,
                  GammaVariant variant) {
    spec.validate();
    if (truncation_blocks == 0 || truncation_blocks % 2 == 0) {
        throw InvalidArgument("ds_check: truncation_blocks must be odd and positive");
    }

    DSReport report;
    report.truncation_blocks = truncation_blocks;
    report.variant = variant;

    const VectorSystem local = ds_local_system(spec);
    report.local_bounds = frame_bounds(local, tol);
    report.sigma_min = std::sqrt(report.local_bounds.lower);
    if (local.vectors.size() == local.dim) {
        report.det_phi = determinant(analysis_matrix(local));
    }

    const GammaPair g = gamma(spec);
    report.gamma_l2 = g.l2;
    report.gamma_l1 = g.l1;
    report.gamma_selected = variant == GammaVariant::L2 ? g.l2 : g.l1;

    IndexWindow window;
    const VectorSystem global = ds_global_system(spec, truncation_blocks, &window);
    const int domain = window.hi - window.lo + 1;

    // Guard: iterates must not spread further than a third of the domain,
    // otherwise boundary effects reach the interior test region.
    const int reach = spec.kernel.zero()
                          ? 0
                          : static_cast<int>(spec.iterations) *
                                std::max(std::abs(spec.kernel.support_min()),
                                         std::abs(spec.kernel.support_max()));
    if (3 * reach > domain) {
        std::ostringstream os;
        os << "iterate spread " << reach << " exceeds a third of the truncated domain " << domain;
        throw TruncationTooSmall(os.str());
    }

    report.full_bounds = frame_bounds(global, tol);

    // Interior-restricted bounds: compress the frame operator onto the
    // middle third of the truncated index range.
    const int margin = domain / 3;
    std::vector<std::size_t> interior;
    for (int t = window.lo + margin; t <= window.hi - margin; ++t) {
        interior.push_back(static_cast<std::size_t>(t - window.lo));
    }
    if (interior.empty()) throw TruncationTooSmall("ds_check: interior region is empty");
    const Matrix s_cc = frame_operator(global).submatrix(interior);
    const SpectralRange interior_range = sym_eig_extremes(s_cc, tol);
    report.measured = {std::max(0.0, interior_range.lambda_min),
                       std::max(0.0, interior_range.lambda_max), Provenance::Measured};

    const double alpha = report.local_bounds.lower;
    const double beta = report.local_bounds.upper;
    if (report.gamma_selected < alpha - tol) {
        report.predicted = FrameBounds{alpha - report.gamma_selected, beta + report.gamma_selected,
                                       Provenance::TheoremPredicted};
        const bool brackets = report.measured.lower >= report.predicted->lower - tol &&
                              report.measured.upper <= report.predicted->upper + tol;
        report.verdict = brackets ? GlueVerdict::Certified : GlueVerdict::ConditionFailed;
    } else {
        report.verdict = GlueVerdict::ConditionFailed;
    }
    return report;
}

VectorSystem shifted_assembly(const VectorSystem& window_system, const std::vector<int>& shifts,
                              IndexWindow domain) {
    window_system.validate();
    if (domain.hi < domain.lo) throw InvalidArgument("shifted_assembly: empty domain");
    if (shifts.empty()) throw InvalidArgument("shifted_assembly: need at least one shift");
    const int width = static_cast<int>(window_system.dim);

    VectorSystem out;
    out.dim = static_cast<std::size_t>(domain.hi - domain.lo + 1);
    for (std::size_t j = 0; j < shifts.size(); ++j) {
        const int start = shifts[j];
        if (start < domain.lo || start + width - 1 > domain.hi) {
            std::ostringstream os;
            os << "shift " << start << " places the window outside the domain [" << domain.lo
               << "," << domain.hi << "]";
            throw ShiftOutOfDomain(os.str());
        }
        for (std::size_t k = 0; k < window_system.vectors.size(); ++k) {
            Vec dense(out.dim, 0.0);
            for (int t = 0; t < width; ++t) {
                dense[static_cast<std::size_t>(start - domain.lo + t)] =
                    window_system.vectors[k][static_cast<std::size_t>(t)];
            }
            out.vectors.push_back(std::move(dense));
            std::ostringstream os;
            os << "(" << j << ","
               << (window_system.labels.empty() ? std::to_string(k) : window_system.labels[k])
               << ")";
            out.labels.push_back(os.str());
        }
    }
    out.validate();
    return out;
}

VectorSystem diag_ds_system(const Matrix& diag_op, const PartitionProjectors& blocks,
                            const LocalSystem& generators, std::size_t iterations) {
    blocks.validate();
    generators.validate();
    if (!diag_op.square()) throw NotSquare("diag_ds_system: operator must be square");
    if (diag_op.rows() != blocks.dim || generators.dim != blocks.dim) {
        throw DimensionMismatch("diag_ds_system: dims differ");
    }
    if (generators.patch_count() != blocks.blocks.size()) {
        throw DimensionMismatch("diag_ds_system: patch count differs from block count");
    }
    if (iterations == 0) throw InvalidArgument("diag_ds_system: iterations must be positive");
    for (std::size_t i = 0; i < diag_op.rows(); ++i) {
        for (std::size_t j = 0; j < diag_op.cols(); ++j) {
            if (i != j && diag_op(i, j) != 0.0) {
                throw InvalidArgument("diag_ds_system: operator is not diagonal");
            }
        }
    }
    for (std::size_t j = 0; j < blocks.blocks.size(); ++j) {
        std::vector<char> in_block(blocks.dim, 0);
        for (std::size_t i : blocks.blocks[j]) in_block[i] = 1;
        for (std::size_t k = 0; k < generators.patches[j].size(); ++k) {
            const Vec& g = generators.patches[j][k];
            for (std::size_t i = 0; i < g.size(); ++i) {
                if (g[i] != 0.0 && !in_block[i]) {
                    std::ostringstream os;
                    os << "generator (" << j << "," << k << ") leaks outside block " << j;
                    throw SupportViolation(os.str());
                }
            }
        }
    }

    VectorSystem out;
    out.dim = blocks.dim;
    std::vector<std::vector<Vec>> current = generators.patches;
    for (std::size_t n = 0; n < iterations; ++n) {
        for (std::size_t j = 0; j < current.size(); ++j) {
            for (std::size_t k = 0; k < current[j].size(); ++k) {
                out.vectors.push_back(current[j][k]);
                std::ostringstream os;
                os << "(" << j << "," << k << "," << n << ")";
                out.labels.push_back(os.str());
            }
        }
        if (n + 1 < iterations) {
            for (auto& patch : current) {
                for (Vec& g : patch) {
                    for (std::size_t i = 0; i < g.size(); ++i) g[i] *= diag_op(i, i);
                }
            }
        }
    }
    out.validate();
    return out;
}

}  // namespace framecast
