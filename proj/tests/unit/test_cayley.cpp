#include <catch2/catch_amalgamated.hpp>

#include "pqc/cayley.hpp"
#include "pqc/rng.hpp"

using namespace pqc;

namespace {

ParaQuaternion random_pq(Rng& rng) {
    return {rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
}

// rejection sampler onto the positive sheet of the pseudo-sphere
SpherePoint random_sphere_point(Rng& rng, int n) {
    for (;;) {
        SpherePoint pt;
        pt.q.resize(static_cast<size_t>(n));
        for (int a = 0; a < n; ++a) pt.q[static_cast<size_t>(a)] = random_pq(rng);
        pt.p = random_pq(rng);
        double s = norm2(pt.p);
        for (const auto& qa : pt.q) s += norm2(qa);
        if (std::abs(s) < 0.1 || s < 0.0) continue;
        const double r = 1.0 / std::sqrt(s);
        for (auto& qa : pt.q) qa = r * qa;
        pt.p = r * pt.p;
        if (singular_locus_margin(pt) < 1e-3) continue;
        return pt;
    }
}

TangentVector random_tangent(Rng& rng, const SpherePoint& pt) {
    TangentVector raw;
    raw.dq.resize(pt.q.size());
    for (auto& d : raw.dq) d = random_pq(rng);
    raw.dp = random_pq(rng);
    return project_tangent(pt, raw);
}

} // namespace

TEST_CASE("base point maps to the group origin") {
    SpherePoint base;
    base.q.assign(1, ParaQuaternion{});
    base.p = {-1, 0, 0, 0};
    const SigmaPoint img = cayley_forward(base);
    CHECK(max_abs_coeff(img.p) == 0.0);
    CHECK(max_abs_coeff(img.q[0]) == 0.0);
    CHECK(img.embedding_residual() == 0.0);
}

TEST_CASE("points with negative norm2(p-1) are admissible; the locus is excluded") {
    SpherePoint pt;
    pt.q.assign(1, ParaQuaternion{});
    // p = 1 + eps r1 has norm2(p-1) = -eps^2 != 0 (not on the sphere, but the
    // transform itself only needs the locus condition)
    pt.p = ParaQuaternion{1, 0, 1e-3, 0};
    CHECK_NOTHROW(cayley_forward(pt));

    SpherePoint bad = pt;
    bad.p = ParaQuaternion::one();
    CHECK_THROWS_AS(cayley_forward(bad), OnSingularLocus);
}

TEST_CASE("forward and inverse compose to the identity") {
    Rng rng(81);
    for (int n : {1, 2}) {
        for (int trial = 0; trial < 25; ++trial) {
            const SpherePoint pt = random_sphere_point(rng, n);
            const SigmaPoint img = cayley_forward(pt);
            CHECK(img.embedding_residual() <= 1e-10);
            const SpherePoint back = cayley_inverse(img);
            double res = max_abs_coeff(back.p - pt.p);
            for (int a = 0; a < n; ++a)
                res = std::max(res, max_abs_coeff(back.q[static_cast<size_t>(a)] -
                                                  pt.q[static_cast<size_t>(a)]));
            CHECK(res <= 1e-10);
        }
    }
}

TEST_CASE("sphere contact form is purely imaginary and linear") {
    Rng rng(82);
    const SpherePoint pt = random_sphere_point(rng, 2);
    const TangentVector v = random_tangent(rng, pt);
    const TangentVector w = random_tangent(rng, pt);
    const ParaQuaternion ev = eta_sphere_at(pt, v);
    CHECK(std::abs(re(ev)) <= 1e-14);

    TangentVector sum;
    sum.dq.resize(v.dq.size());
    for (size_t a = 0; a < v.dq.size(); ++a) sum.dq[a] = v.dq[a] + 2.5 * w.dq[a];
    sum.dp = v.dp + 2.5 * w.dp;
    const ParaQuaternion lin = eta_sphere_at(pt, sum);
    CHECK(max_abs_coeff(lin - (ev + 2.5 * eta_sphere_at(pt, w))) <= 1e-12);
}

TEST_CASE("eta at the base point from the multiplication table") {
    SpherePoint base;
    base.q.assign(1, ParaQuaternion{});
    base.p = {-1, 0, 0, 0};
    TangentVector v;
    v.dq.assign(1, ParaQuaternion{});
    const double s = 0.7;
    v.dp = s * ParaQuaternion::r3();
    CHECK(tangency_residual(base, v) == 0.0);
    const ParaQuaternion eta = eta_sphere_at(base, v);
    CHECK(max_abs_coeff(eta + 2.0 * s * ParaQuaternion::r3()) <= 1e-15);
}

TEST_CASE("non-tangent vectors are rejected") {
    SpherePoint base;
    base.q.assign(1, ParaQuaternion{});
    base.p = {-1, 0, 0, 0};
    TangentVector v;
    v.dq.assign(1, ParaQuaternion{});
    v.dp = ParaQuaternion::one(); // radial direction
    CHECK_THROWS_AS(eta_sphere_at(base, v), NotTangent);
}

TEST_CASE("conformal equivalence identity at the base point") {
    SpherePoint base;
    base.q.assign(1, ParaQuaternion{});
    base.p = {-1, 0, 0, 0};
    Rng rng(83);
    for (int trial = 0; trial < 10; ++trial) {
        const TangentVector v = random_tangent(rng, base);
        const CayleyIdentityResult r = verify_cayley_identity(base, v);
        CHECK(r.residual <= 1e-10 * std::max(1.0, r.scale));
    }
}

TEST_CASE("conformal equivalence identity at random admissible points") {
    Rng rng(84);
    for (int n : {1, 2}) {
        for (int trial = 0; trial < 20; ++trial) {
            const SpherePoint pt = random_sphere_point(rng, n);
            const TangentVector v = random_tangent(rng, pt);
            const CayleyIdentityResult r = verify_cayley_identity(pt, v);
            CAPTURE(n, trial, r.residual, r.scale);
            CHECK(r.residual <= 1e-8 * std::max(1.0, r.scale));

            // both sides scale linearly in v
            TangentVector v2;
            v2.dq.resize(v.dq.size());
            for (size_t a = 0; a < v.dq.size(); ++a) v2.dq[a] = 3.0 * v.dq[a];
            v2.dp = 3.0 * v.dp;
            const SigmaTangent d1 = cayley_differential(pt, v);
            const SigmaTangent d2 = cayley_differential(pt, v2);
            CHECK(max_abs_coeff(d2.dp - 3.0 * d1.dp) <=
                  1e-12 * (1.0 + 3.0 * max_abs_coeff(d1.dp)));
        }
    }
}
