#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "framecast/frames.hpp"
#include "testutil.hpp"

using namespace framecast;
namespace tu = framecast::testutil;

namespace {

VectorSystem standard_basis(std::size_t dim) {
    VectorSystem sys;
    sys.dim = dim;
    for (std::size_t i = 0; i < dim; ++i) {
        Vec e(dim, 0.0);
        e[i] = 1.0;
        sys.vectors.push_back(std::move(e));
    }
    return sys;
}

VectorSystem random_system(tu::Rng& rng, std::size_t dim, std::size_t count) {
    VectorSystem sys;
    sys.dim = dim;
    for (std::size_t i = 0; i < count; ++i) sys.vectors.push_back(tu::random_vector(rng, dim));
    return sys;
}

VectorSystem example_window_system(double tau) {
    VectorSystem sys;
    sys.dim = 3;
    sys.vectors = {{1.0, 0.0, 0.0}, {1.0, tau, tau * tau}, {1.0, 2.0 * tau, 3.0 * tau * tau}};
    return sys;
}

}  // namespace

TEST_CASE("analysis_matrix lays out vectors as rows") {
    const Matrix id = analysis_matrix(standard_basis(2));
    CHECK(id.max_abs_diff(Matrix::identity(2)) == 0.0);

    const double tau = 0.1;
    const Matrix phi = analysis_matrix(example_window_system(tau));
    CHECK(phi.rows() == 3);
    CHECK(phi.cols() == 3);
    CHECK(phi(1, 1) == tau);
    CHECK(phi(2, 1) == 2.0 * tau);
    CHECK(phi(2, 2) == 3.0 * tau * tau);

    tu::Rng rng(5);
    const VectorSystem sys = random_system(rng, 3, 5);
    const Matrix m = analysis_matrix(sys);
    for (std::size_t i = 0; i < 5; ++i)
        for (std::size_t j = 0; j < 3; ++j) CHECK(m(i, j) == sys.vectors[i][j]);
}

TEST_CASE("frame_bounds of orthonormal bases is (1,1)") {
    for (std::size_t dim : {1u, 2u, 5u, 16u}) {
        const FrameBounds b = frame_bounds(standard_basis(dim), 1e-10);
        CHECK(b.lower == doctest::Approx(1.0).epsilon(1e-13));
        CHECK(b.upper == doctest::Approx(1.0).epsilon(1e-13));
        CHECK(b.provenance == Provenance::Measured);
    }
}

TEST_CASE("frame_bounds of {e1, e1, e2} is (1,2)") {
    VectorSystem sys;
    sys.dim = 2;
    sys.vectors = {{1.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}};
    const FrameBounds b = frame_bounds(sys, 1e-10);
    CHECK(b.lower == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(b.upper == doctest::Approx(2.0).epsilon(1e-13));
}

TEST_CASE("iterate window system at tau=0.1: lower bound matches the cubic oracle") {
    const FrameBounds b = frame_bounds(example_window_system(0.1), 1e-10);
    const auto coeffs = tu::char_poly_3x3(tu::example_gram(0.1));
    const auto roots = tu::cubic_roots_real(coeffs[0], coeffs[1], coeffs[2]);
    CHECK(b.lower == doctest::Approx(roots[0]).epsilon(1e-9));
    CHECK(b.upper == doctest::Approx(roots[2]).epsilon(1e-12));

    // The often-quoted reference value 0.0040 for this system's "lower
    // frame bound" matches sigma_min = sqrt(lambda_min), not lambda_min.
    const double sigma_min = std::sqrt(b.lower);
    CHECK(std::abs(sigma_min - 0.0040) < 5e-5);
    CHECK(std::abs(b.lower - 0.0040) > 1e-3 * 0.0040);
}

TEST_CASE("is_frame verdicts") {
    VectorSystem deficient;
    deficient.dim = 2;
    deficient.vectors = {{1.0, 0.0}};
    CHECK_FALSE(is_frame(deficient, 1e-10).frame);
    CHECK(is_frame(deficient, 1e-10).bounds.lower == doctest::Approx(0.0).epsilon(1e-14));

    tu::Rng rng(7);
    VectorSystem basis;
    basis.dim = 3;
    do {
        basis.vectors = {tu::random_vector(rng, 3), tu::random_vector(rng, 3),
                         tu::random_vector(rng, 3)};
    } while (std::abs(determinant(analysis_matrix(basis))) < 1e-3);
    CHECK(is_frame(basis, 1e-10).frame);

    // tau = 0 collapses the iterate window system to three copies of e1
    CHECK_FALSE(is_frame(example_window_system(0.0), 1e-10).frame);
}

TEST_CASE("canonical_dual on simple systems") {
    const VectorSystem onb = standard_basis(3);
    const VectorSystem dual = canonical_dual(onb, 1e-10);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            CHECK(dual.vectors[i][j] == doctest::Approx(onb.vectors[i][j]).epsilon(1e-13));

    VectorSystem redundant;
    redundant.dim = 2;
    redundant.vectors = {{1.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}};
    const VectorSystem rd = canonical_dual(redundant, 1e-10);
    CHECK(rd.vectors[0][0] == doctest::Approx(0.5).epsilon(1e-13));
    CHECK(rd.vectors[1][0] == doctest::Approx(0.5).epsilon(1e-13));
    CHECK(rd.vectors[2][1] == doctest::Approx(1.0).epsilon(1e-13));

    VectorSystem deficient;
    deficient.dim = 2;
    deficient.vectors = {{1.0, 0.0}};
    CHECK_THROWS_AS(canonical_dual(deficient, 1e-10), NotAFrame);
}

TEST_CASE("reconstruct basics") {
    const VectorSystem onb = standard_basis(2);
    const Vec f = reconstruct(onb, {3.0, -1.0});
    CHECK(f[0] == 3.0);
    CHECK(f[1] == -1.0);

    const Vec z = reconstruct(onb, {0.0, 0.0});
    CHECK(norm2(z) == 0.0);

    CHECK_THROWS_AS(reconstruct(onb, {1.0}), DimensionMismatch);
}

TEST_CASE("duality round-trip on random frames") {
    tu::Rng rng(13);
    for (int trial = 0; trial < 20; ++trial) {
        const VectorSystem sys = random_system(rng, 4, 6);
        if (!is_frame(sys, 1e-10).frame) continue;
        const VectorSystem dual = canonical_dual(sys, 1e-10);
        const Vec f = tu::random_vector(rng, 4);
        Vec coeffs(sys.vectors.size());
        for (std::size_t i = 0; i < sys.vectors.size(); ++i) coeffs[i] = dot(f, sys.vectors[i]);
        const Vec rec = reconstruct(dual, coeffs);
        Vec diff = rec;
        for (std::size_t i = 0; i < diff.size(); ++i) diff[i] -= f[i];
        CHECK(norm2(diff) <= 1e-8 * norm2(f));
    }
}

TEST_CASE("sampled coefficient sums stay inside the optimal bounds") {
    tu::Rng rng(19);
    const VectorSystem sys = random_system(rng, 5, 9);
    const FrameBounds b = frame_bounds(sys, 1e-10);
    double seen_min = 1e300;
    double seen_max = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        const double s = tu::sum_sq_coefficients(sys, tu::random_unit_vector(rng, 5));
        seen_min = std::min(seen_min, s);
        seen_max = std::max(seen_max, s);
        CHECK(s >= b.lower - 1e-10);
        CHECK(s <= b.upper + 1e-10);
    }
    // sampling should come reasonably close to the extremes (sanity only)
    CHECK(seen_min <= b.lower + 0.5 * (b.upper - b.lower));
    CHECK(seen_max >= b.upper - 0.5 * (b.upper - b.lower));
}

TEST_CASE("frame_bounds is permutation invariant") {
    tu::Rng rng(29);
    VectorSystem sys = random_system(rng, 4, 7);
    const FrameBounds before = frame_bounds(sys, 1e-10);
    std::shuffle(sys.vectors.begin(), sys.vectors.end(), rng);
    const FrameBounds after = frame_bounds(sys, 1e-10);
    CHECK(after.lower == doctest::Approx(before.lower).epsilon(1e-12));
    CHECK(after.upper == doctest::Approx(before.upper).epsilon(1e-12));
}

TEST_CASE("scaling all vectors by c scales both bounds by c^2") {
    tu::Rng rng(37);
    const VectorSystem sys = random_system(rng, 4, 6);
    const FrameBounds base = frame_bounds(sys, 1e-10);
    const double c = 1.7;
    VectorSystem scaled = sys;
    for (Vec& v : scaled.vectors)
        for (double& x : v) x *= c;
    const FrameBounds b = frame_bounds(scaled, 1e-10);
    CHECK(b.lower == doctest::Approx(c * c * base.lower).epsilon(1e-10));
    CHECK(b.upper == doctest::Approx(c * c * base.upper).epsilon(1e-10));
}

TEST_CASE("zero vectors are allowed and contribute nothing") {
    VectorSystem sys = standard_basis(2);
    sys.vectors.push_back({0.0, 0.0});
    const FrameBounds b = frame_bounds(sys, 1e-10);
    CHECK(b.lower == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(b.upper == doctest::Approx(1.0).epsilon(1e-13));
}
