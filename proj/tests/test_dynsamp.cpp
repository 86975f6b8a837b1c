#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "framecast/dynsamp.hpp"
#include "testutil.hpp"

using namespace framecast;
namespace tu = framecast::testutil;

namespace {

DSSystemSpec example_spec(double tau) {
    DSSystemSpec spec;
    spec.kernel = SupportedVector(0, {1.0, tau, tau * tau});
    spec.window_len = 3;
    spec.omega = {0};
    spec.iterations = 2;
    spec.convention = WindowConvention::Disjoint;
    return spec;
}

SupportedVector random_kernel(tu::Rng& rng, std::size_t max_support) {
    std::uniform_int_distribution<std::size_t> len(1, max_support);
    std::uniform_real_distribution<double> entry(-1.0, 1.0);
    Vec coeffs(len(rng));
    for (double& c : coeffs) c = entry(rng);
    if (coeffs[0] == 0.0) coeffs[0] = 0.5;
    return SupportedVector(0, coeffs);
}

// independent windowed-restriction oracle for gamma
GammaPair gamma_brute_force(const DSSystemSpec& spec) {
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
            for (int j = -100; j <= 100; ++j) {
                if (j == 0) continue;
                double ss = 0.0;
                for (int t = j * s; t <= j * s + n; ++t) ss += v.at(t) * v.at(t);
                g.l2 += std::sqrt(ss);
            }
        }
    }
    return g;
}

}  // namespace

TEST_CASE("supported vectors normalize by trimming zeros") {
    const SupportedVector a(0, {0.0, 1.0, 2.0, 0.0});
    CHECK(a.offset() == 1);
    CHECK(a.coeffs() == Vec{1.0, 2.0});
    CHECK(a == SupportedVector(1, {1.0, 2.0}));

    const SupportedVector zero(5, {0.0, 0.0});
    CHECK(zero.zero());
    CHECK(zero == SupportedVector());
    CHECK(zero.at(5) == 0.0);
}

TEST_CASE("conv_power reproduces the closed-form square of (1, t, t^2)") {
    for (double tau : {0.05, 0.1, 0.2, 0.3, 0.5}) {
        const SupportedVector a(0, {1.0, tau, tau * tau});
        const SupportedVector sq = conv_power(a, 2);
        REQUIRE(sq.offset() == 0);
        REQUIRE(sq.support_length() == 5);
        const Vec expected = {1.0, 2.0 * tau, 3.0 * tau * tau, 2.0 * tau * tau * tau,
                              tau * tau * tau * tau};
        for (std::size_t i = 0; i < 5; ++i) {
            CHECK(std::abs(sq.coeffs()[i] - expected[i]) <= 1e-14);
        }
    }
}

TEST_CASE("conv_power identity and shift composition") {
    const SupportedVector a(2, {3.0, -1.0});
    CHECK(conv_power(a, 0) == SupportedVector::delta(0));
    CHECK(conv_power(SupportedVector::delta(3), 5) == SupportedVector::delta(15));
}

TEST_CASE("conv_power satisfies the semigroup property") {
    tu::Rng rng(97);
    for (int trial = 0; trial < 20; ++trial) {
        const SupportedVector a = random_kernel(rng, 4);
        std::uniform_int_distribution<unsigned> upow(0, 6);
        const unsigned j = upow(rng) / 2;
        const unsigned k = upow(rng) / 2;
        const SupportedVector lhs = convolve(conv_power(a, j), conv_power(a, k));
        const SupportedVector rhs = conv_power(a, j + k);
        REQUIRE(lhs.offset() == rhs.offset());
        REQUIRE(lhs.support_length() == rhs.support_length());
        double scale = 1.0;
        for (double c : rhs.coeffs()) scale = std::max(scale, std::abs(c));
        for (std::size_t i = 0; i < lhs.support_length(); ++i) {
            CHECK(std::abs(lhs.coeffs()[i] - rhs.coeffs()[i]) <= 1e-12 * scale);
        }
    }
}

TEST_CASE("ds_local_system reproduces the iterate window rows") {
    const double tau = 0.1;
    const VectorSystem sys = ds_local_system(example_spec(tau));
    REQUIRE(sys.vectors.size() == 3);
    REQUIRE(sys.dim == 3);
    CHECK(sys.vectors[0] == Vec{1.0, 0.0, 0.0});
    CHECK(sys.vectors[1][0] == 1.0);
    CHECK(sys.vectors[1][1] == tau);
    CHECK(sys.vectors[1][2] == doctest::Approx(tau * tau).epsilon(1e-15));
    CHECK(sys.vectors[2][0] == 1.0);
    CHECK(sys.vectors[2][1] == 2.0 * tau);
    CHECK(sys.vectors[2][2] == doctest::Approx(3.0 * tau * tau).epsilon(1e-15));
    CHECK(sys.labels[0] == "(0,0)");
    CHECK(sys.labels[2] == "(0,2)");
}

TEST_CASE("ds_local_system with the unit impulse repeats coordinate vectors") {
    DSSystemSpec spec;
    spec.kernel = SupportedVector::delta(0);
    spec.window_len = 4;
    spec.omega = {1, 3};
    spec.iterations = 2;
    const VectorSystem sys = ds_local_system(spec);
    REQUIRE(sys.vectors.size() == 6);
    for (std::size_t row = 0; row < 3; ++row) {
        CHECK(sys.vectors[row] == Vec{0.0, 1.0, 0.0, 0.0});
        CHECK(sys.vectors[row + 3] == Vec{0.0, 0.0, 0.0, 1.0});
    }
}

TEST_CASE("ds_local_system matches convolution-then-restriction on random kernels") {
    tu::Rng rng(101);
    for (int trial = 0; trial < 10; ++trial) {
        DSSystemSpec spec;
        spec.kernel = random_kernel(rng, 3);
        spec.window_len = 5;
        spec.omega = {0, 2};
        spec.iterations = 3;
        const VectorSystem sys = ds_local_system(spec);
        std::size_t row = 0;
        for (std::size_t i : spec.omega) {
            for (unsigned k = 0; k <= spec.iterations; ++k) {
                const SupportedVector v = conv_power(spec.kernel, k).shifted(static_cast<int>(i));
                for (int t = 0; t < 5; ++t) {
                    CHECK(sys.vectors[row][static_cast<std::size_t>(t)] ==
                          doctest::Approx(v.at(t)).epsilon(1e-14));
                }
                ++row;
            }
        }
    }
}

TEST_CASE("gamma vanishes for the unit impulse") {
    DSSystemSpec spec;
    spec.kernel = SupportedVector::delta(0);
    spec.window_len = 3;
    spec.omega = {0, 1, 2};
    spec.iterations = 4;
    const GammaPair g = gamma(spec);
    CHECK(g.l1 == 0.0);
    CHECK(g.l2 == 0.0);
}

TEST_CASE("gamma closed forms for the iterate window example") {
    for (double tau : {0.1, 0.25}) {
        const GammaPair g = gamma(example_spec(tau));
        const double t3 = tau * tau * tau;
        const double t4 = t3 * tau;
        CHECK(g.l1 == doctest::Approx(2.0 * t3 + t4).epsilon(1e-13));
        CHECK(g.l2 == doctest::Approx(std::sqrt(4.0 * t3 * t3 + t4 * t4)).epsilon(1e-13));
    }
    // tau = 0.1 gives the reference value 0.0021 exactly
    CHECK(std::abs(gamma(example_spec(0.1)).l1 - 0.0021) <= 1e-12);
}

TEST_CASE("gamma under the overlapping convention counts shared endpoints") {
    DSSystemSpec spec = example_spec(0.1);
    spec.convention = WindowConvention::PaperOverlap;
    CHECK(spec.stride() == 2);
    const GammaPair g = gamma(spec);
    const GammaPair oracle = gamma_brute_force(spec);
    CHECK(g.l2 == doctest::Approx(oracle.l2).epsilon(1e-13));
    CHECK(g.l1 == doctest::Approx(oracle.l1).epsilon(1e-13));
    // entries inside the home window now leak into neighbouring windows
    CHECK(g.l2 > 1.0);
    // the l1 variant is window-free and unchanged
    CHECK(g.l1 == doctest::Approx(0.0021).epsilon(1e-12));
}

TEST_CASE("gamma matches the brute-force oracle on random kernels") {
    tu::Rng rng(103);
    for (int trial = 0; trial < 15; ++trial) {
        DSSystemSpec spec;
        spec.kernel = random_kernel(rng, 4);
        spec.window_len = 3 + trial % 3;
        spec.omega = {0, 1};
        spec.iterations = 2;
        spec.convention = trial % 2 ? WindowConvention::Disjoint : WindowConvention::PaperOverlap;
        const GammaPair g = gamma(spec);
        const GammaPair oracle = gamma_brute_force(spec);
        CHECK(g.l1 == doctest::Approx(oracle.l1).epsilon(1e-12));
        CHECK(g.l2 == doctest::Approx(oracle.l2).epsilon(1e-12));
        // entrywise l2 <= l1 needs the disjoint tiling; overlapping windows
        // double-count shared entries
        if (spec.convention == WindowConvention::Disjoint) {
            CHECK(g.l2 <= g.l1 + 1e-12);
        }
    }
}

TEST_CASE("ds_check certifies the unit impulse with full sampling") {
    DSSystemSpec spec;
    spec.kernel = SupportedVector::delta(0);
    spec.window_len = 3;
    spec.omega = {0, 1, 2};
    spec.iterations = 0;
    const DSReport report = ds_check(spec, 9, 1e-10);
    REQUIRE(report.predicted.has_value());
    CHECK(report.predicted->lower == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(report.predicted->upper == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(report.measured.lower == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(report.measured.upper == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(report.verdict == GlueVerdict::Certified);
}

TEST_CASE("ds_check on the iterate window example at tau = 0.1") {
    const DSReport report = ds_check(example_spec(0.1), 9, 1e-10);
    // frozen oracle values from the characteristic polynomial
    CHECK(report.local_bounds.lower == doctest::Approx(1.6299581019645399e-05).epsilon(1e-9));
    CHECK(report.sigma_min == doctest::Approx(4.0372739589536649e-03).epsilon(1e-9));
    REQUIRE(report.det_phi.has_value());
    CHECK(*report.det_phi == doctest::Approx(1e-3).epsilon(1e-12));
    CHECK(report.gamma_l1 == doctest::Approx(0.0021).epsilon(1e-12));
    CHECK(report.gamma_l2 == doctest::Approx(2.0024984394500786e-03).epsilon(1e-12));
    CHECK(report.gamma_l2 <= report.gamma_l1 + 1e-12);
    // gamma exceeds lambda_min, so no certificate under either variant
    CHECK_FALSE(report.predicted.has_value());
    CHECK(report.verdict == GlueVerdict::ConditionFailed);
    CHECK(ds_check(example_spec(0.1), 9, 1e-10, GammaVariant::L1).verdict ==
          GlueVerdict::ConditionFailed);
}

TEST_CASE("ds_check fails the condition for heavy-tailed kernels") {
    DSSystemSpec spec;
    spec.kernel = SupportedVector(0, {1.0, 0.9, 0.9});
    spec.window_len = 3;
    spec.omega = {0};
    spec.iterations = 2;
    const DSReport report = ds_check(spec, 9, 1e-10);
    CHECK(report.gamma_selected >= report.local_bounds.lower);
    CHECK(report.verdict == GlueVerdict::ConditionFailed);
}

TEST_CASE("ds_check guards against too-small truncations") {
    DSSystemSpec spec;
    spec.kernel = SupportedVector(0, {1.0, 0.1, 0.1, 0.1});
    spec.window_len = 2;
    spec.omega = {0};
    spec.iterations = 3;
    CHECK_THROWS_AS(ds_check(spec, 3, 1e-10), TruncationTooSmall);
    CHECK_THROWS_AS(ds_check(spec, 4, 1e-10), InvalidArgument);  // even width
}

TEST_CASE("ds_check interior lower bound respects the certificate on random kernels") {
    tu::Rng rng(107);
    std::uniform_real_distribution<double> small(-0.05, 0.05);
    int checked = 0;
    for (int trial = 0; trial < 15; ++trial) {
        DSSystemSpec spec;
        spec.window_len = 3 + trial % 2;
        spec.kernel = SupportedVector(0, {1.0, small(rng), small(rng)});
        spec.omega.clear();
        for (std::size_t i = 0; i < spec.window_len; ++i) spec.omega.push_back(i);
        spec.iterations = 1 + trial % 2;
        const DSReport report = ds_check(spec, 9, 1e-8);
        if (!report.predicted) continue;
        ++checked;
        // the lower certificate is the sound one; the upper (beta + gamma)
        // can be exceeded, which downgrades the verdict but not this bound
        CHECK(report.measured.lower >= report.predicted->lower - 1e-8);
        if (report.measured.upper <= report.predicted->upper + 1e-8) {
            CHECK(report.verdict == GlueVerdict::Certified);
        } else {
            CHECK(report.verdict == GlueVerdict::ConditionFailed);
        }
    }
    CHECK(checked > 10);
}

TEST_CASE("envelopes of a window-partitioned iterate system equal windowed tail norms") {
    const double tau = 0.3;
    const DSSystemSpec spec = example_spec(tau);
    IndexWindow domain;
    const VectorSystem global = ds_global_system(spec, 5, &domain);
    const int stride = spec.stride();

    // partition the truncated domain into its 5 windows and regroup the
    // realized vectors by home block
    PartitionProjectors part;
    part.dim = global.dim;
    LocalSystem local;
    local.dim = global.dim;
    for (int j = -2; j <= 2; ++j) {
        std::vector<std::size_t> block;
        for (int t = 0; t < stride; ++t) {
            block.push_back(static_cast<std::size_t>(j * stride + t - domain.lo));
        }
        part.blocks.push_back(std::move(block));
        std::vector<Vec> gens;
        for (unsigned k = 0; k <= spec.iterations; ++k) {
            gens.push_back(global.vectors[static_cast<std::size_t>(j + 2) * 3 + k]);
        }
        local.patches.push_back(std::move(gens));
    }

    const auto envs = envelope(part, local);
    REQUIRE(envs.size() == 3);
    for (const EnvelopeSequence& env : envs) {
        const SupportedVector iterate = conv_power(spec.kernel, static_cast<unsigned>(env.k));
        for (int m = -4; m <= 4; ++m) {
            if (m == 0) continue;
            // independent oracle: the l2 norm of the iterate over the window
            // at offset -m (interior copies all share it; boundary copies are
            // clipped, so the maximum over j is the unclipped value)
            double ss = 0.0;
            for (int t = -m * stride; t < (-m + 1) * stride; ++t) ss += iterate.at(t) * iterate.at(t);
            CHECK(env.at(m) == doctest::Approx(std::sqrt(ss)).epsilon(1e-13));
        }
    }
}

TEST_CASE("shifted_assembly basics") {
    VectorSystem window;
    window.dim = 2;
    window.vectors = {{1.0, 2.0}};
    const VectorSystem at_origin = shifted_assembly(window, {0}, {0, 1});
    CHECK(at_origin.vectors[0] == Vec{1.0, 2.0});

    VectorSystem impulse;
    impulse.dim = 1;
    impulse.vectors = {{1.0}};
    const VectorSystem basis = shifted_assembly(impulse, {0, 1, 2}, {0, 2});
    REQUIRE(basis.vectors.size() == 3);
    for (std::size_t j = 0; j < 3; ++j) {
        for (std::size_t t = 0; t < 3; ++t) {
            CHECK(basis.vectors[j][t] == (j == t ? 1.0 : 0.0));
        }
    }

    CHECK_THROWS_AS(shifted_assembly(window, {3}, {0, 3}), ShiftOutOfDomain);
    CHECK_THROWS_AS(shifted_assembly(window, {-1}, {0, 3}), ShiftOutOfDomain);
}

TEST_CASE("shifted_assembly agrees with the truncated global iterate system") {
    const double tau = 0.2;
    const DSSystemSpec spec = example_spec(tau);

    // full-support window system: iterates of the kernel on {0..4}
    VectorSystem window;
    window.dim = 5;
    for (unsigned k = 0; k <= 2; ++k) {
        const SupportedVector v = conv_power(spec.kernel, k);
        Vec dense(5, 0.0);
        for (int t = 0; t < 5; ++t) dense[static_cast<std::size_t>(t)] = v.at(t);
        window.vectors.push_back(std::move(dense));
        window.labels.push_back("k" + std::to_string(k));
    }

    IndexWindow domain;
    const VectorSystem global = ds_global_system(spec, 9, &domain);
    CHECK(domain.lo == -12);
    CHECK(domain.hi == 14);

    // blocks -4..3 fit with their full support; block 4 would be clipped
    std::vector<int> shifts;
    for (int j = -4; j <= 3; ++j) shifts.push_back(3 * j);
    const VectorSystem assembled = shifted_assembly(window, shifts, domain);

    std::size_t assembled_row = 0;
    for (int j = -4; j <= 3; ++j) {
        for (unsigned k = 0; k <= 2; ++k) {
            const std::size_t global_row = static_cast<std::size_t>(j + 4) * 3 + k;
            REQUIRE(global.labels[global_row] ==
                    "(" + std::to_string(j) + ",0," + std::to_string(k) + ")");
            for (std::size_t t = 0; t < global.dim; ++t) {
                CHECK(assembled.vectors[assembled_row][t] ==
                      doctest::Approx(global.vectors[global_row][t]).epsilon(1e-15));
            }
            ++assembled_row;
        }
    }
}

TEST_CASE("shifted_assembly with non-overlapping stride keeps window bounds") {
    tu::Rng rng(109);
    VectorSystem window;
    window.dim = 3;
    for (int k = 0; k < 4; ++k) window.vectors.push_back(tu::random_vector(rng, 3));
    const FrameBounds wb = frame_bounds(window, 1e-10);

    std::vector<int> shifts = {0, 3, 6, 9};
    const VectorSystem assembled = shifted_assembly(window, shifts, {0, 11});
    const FrameBounds ab = frame_bounds(assembled, 1e-10);
    CHECK(ab.lower == doctest::Approx(wb.lower).epsilon(1e-10));
    CHECK(ab.upper == doctest::Approx(wb.upper).epsilon(1e-10));
}

TEST_CASE("diag_ds_system basics") {
    PartitionProjectors blocks;
    blocks.dim = 2;
    blocks.blocks = {{0}, {1}};
    LocalSystem gens;
    gens.dim = 2;
    gens.patches = {{{1.0, 0.0}}, {{0.0, 1.0}}};

    const VectorSystem repeated = diag_ds_system(Matrix::identity(2), blocks, gens, 3);
    REQUIRE(repeated.vectors.size() == 6);
    for (std::size_t r = 0; r < 6; r += 2) {
        CHECK(repeated.vectors[r] == Vec{1.0, 0.0});
        CHECK(repeated.vectors[r + 1] == Vec{0.0, 1.0});
    }

    const VectorSystem powers = diag_ds_system(Matrix::diagonal({2.0, 3.0}), blocks, gens, 2);
    REQUIRE(powers.vectors.size() == 4);
    CHECK(powers.vectors[0] == Vec{1.0, 0.0});
    CHECK(powers.vectors[1] == Vec{0.0, 1.0});
    CHECK(powers.vectors[2] == Vec{2.0, 0.0});
    CHECK(powers.vectors[3] == Vec{0.0, 3.0});
    CHECK(powers.labels[2] == "(0,0,1)");
}

TEST_CASE("diag_ds_system rejects leaking generators and non-diagonal operators") {
    PartitionProjectors blocks;
    blocks.dim = 2;
    blocks.blocks = {{0}, {1}};
    LocalSystem leaking;
    leaking.dim = 2;
    leaking.patches = {{{1.0, 0.5}}, {{0.0, 1.0}}};
    CHECK_THROWS_AS(diag_ds_system(Matrix::identity(2), blocks, leaking, 2), SupportViolation);

    LocalSystem gens;
    gens.dim = 2;
    gens.patches = {{{1.0, 0.0}}, {{0.0, 1.0}}};
    CHECK_THROWS_AS(
        diag_ds_system(Matrix::from_rows({{1.0, 0.1}, {0.1, 1.0}}), blocks, gens, 2),
        InvalidArgument);
}

TEST_CASE("periodic diagonal gives identical bounds across congruent blocks") {
    const std::size_t period = 2;
    const std::size_t dim = 6;
    Vec diag(dim);
    for (std::size_t i = 0; i < dim; ++i) diag[i] = i % period == 0 ? 2.0 : 3.0;

    PartitionProjectors blocks;
    blocks.dim = dim;
    blocks.blocks = {{0, 1}, {2, 3}, {4, 5}};
    LocalSystem gens;
    gens.dim = dim;
    for (std::size_t j = 0; j < 3; ++j) {
        std::vector<Vec> patch;
        Vec g(dim, 0.0);
        g[2 * j] = 1.0;
        g[2 * j + 1] = 0.5;
        patch.push_back(g);
        gens.patches.push_back(std::move(patch));
    }

    const std::size_t iterations = 2;
    const VectorSystem sys = diag_ds_system(Matrix::diagonal(diag), blocks, gens, iterations);

    // per-block systems (local eigensolves) must agree across blocks
    Vec lowers, uppers;
    for (std::size_t j = 0; j < 3; ++j) {
        VectorSystem per_block;
        per_block.dim = 2;
        for (std::size_t r = 0; r < sys.vectors.size(); ++r) {
            Vec w = {sys.vectors[r][2 * j], sys.vectors[r][2 * j + 1]};
            if (norm2(w) > 0.0) per_block.vectors.push_back(std::move(w));
        }
        const FrameBounds fb = frame_bounds(per_block, 1e-10);
        lowers.push_back(fb.lower);
        uppers.push_back(fb.upper);
    }
    for (std::size_t j = 1; j < 3; ++j) {
        CHECK(lowers[j] == doctest::Approx(lowers[0]).epsilon(1e-12));
        CHECK(uppers[j] == doctest::Approx(uppers[0]).epsilon(1e-12));
    }

    // block-supported direct sum: global bounds equal the block extremes
    const FrameBounds global = frame_bounds(sys, 1e-10);
    CHECK(global.lower == doctest::Approx(*std::min_element(lowers.begin(), lowers.end()))
                              .epsilon(1e-10));
    CHECK(global.upper == doctest::Approx(*std::max_element(uppers.begin(), uppers.end()))
                              .epsilon(1e-10));
}

TEST_CASE("diag_ds_system direct-sum bounds on random block-supported generators") {
    tu::Rng rng(113);
    PartitionProjectors blocks;
    blocks.dim = 9;
    blocks.blocks = {{0, 1, 2}, {3, 4, 5}, {6, 7, 8}};
    Vec diag(9);
    std::uniform_real_distribution<double> d(0.5, 1.5);
    for (double& x : diag) x = d(rng);

    LocalSystem gens;
    gens.dim = 9;
    for (std::size_t j = 0; j < 3; ++j) {
        std::vector<Vec> patch;
        for (int k = 0; k < 3; ++k) {
            Vec g(9, 0.0);
            for (std::size_t i : blocks.blocks[j]) g[i] = tu::random_vector(rng, 1)[0];
            patch.push_back(std::move(g));
        }
        gens.patches.push_back(std::move(patch));
    }
    const VectorSystem sys = diag_ds_system(Matrix::diagonal(diag), blocks, gens, 3);

    double lo = 1e300, hi = 0.0;
    for (std::size_t j = 0; j < 3; ++j) {
        VectorSystem per_block;
        per_block.dim = 3;
        for (const Vec& v : sys.vectors) {
            Vec w;
            for (std::size_t i : blocks.blocks[j]) w.push_back(v[i]);
            if (norm2(w) > 0.0) per_block.vectors.push_back(std::move(w));
        }
        const FrameBounds fb = frame_bounds(per_block, 1e-10);
        lo = std::min(lo, fb.lower);
        hi = std::max(hi, fb.upper);
    }
    const FrameBounds global = frame_bounds(sys, 1e-10);
    CHECK(global.lower == doctest::Approx(lo).epsilon(1e-10));
    CHECK(global.upper == doctest::Approx(hi).epsilon(1e-10));
}
