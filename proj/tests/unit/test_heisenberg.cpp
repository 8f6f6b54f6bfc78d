#include <catch2/catch_amalgamated.hpp>

#include "pqc/heisenberg.hpp"
#include "pqc/rng.hpp"

using namespace pqc;

namespace {
ModelPoint random_point(Rng& rng, int n) {
    ModelPoint p(n);
    for (auto& c : p.coords) c = rng.uniform(-1, 1);
    return p;
}
} // namespace

TEST_CASE("group law: identity and associativity") {
    Rng rng(51);
    for (int n : {1, 2}) {
        const ModelPoint e(n);
        for (int trial = 0; trial < 20; ++trial) {
            const ModelPoint p = random_point(rng, n);
            const ModelPoint q = random_point(rng, n);
            const ModelPoint r = random_point(rng, n);

            const ModelPoint ep = group_mul(e, p);
            for (size_t i = 0; i < p.coords.size(); ++i) CHECK(ep.coords[i] == p.coords[i]);

            const ModelPoint lhs = group_mul(group_mul(p, q), r);
            const ModelPoint rhs = group_mul(p, group_mul(q, r));
            for (size_t i = 0; i < p.coords.size(); ++i)
                CHECK(std::abs(lhs.coords[i] - rhs.coords[i]) <= 1e-13);

            const ModelPoint inv = group_inverse(p);
            const ModelPoint back = group_mul(inv, p);
            for (size_t i = 0; i < p.coords.size(); ++i)
                CHECK(std::abs(back.coords[i]) <= 1e-13);
        }
    }
}

TEST_CASE("group law: imaginary correction from the multiplication table") {
    // q0 = r1, q = r2, both central slots zero: omega' = 2 Im(r1 conj(r2)) = -2 r3
    ModelPoint p0(1), p(1);
    p0.set_q(0, ParaQuaternion::r1());
    p.set_q(0, ParaQuaternion::r2());
    const ModelPoint prod = group_mul(p0, p);
    const ParaQuaternion w = prod.omega_part();
    CHECK(max_abs_coeff(w + 2.0 * ParaQuaternion::r3()) == 0.0);
}

TEST_CASE("frame fields at the origin and the Reeb fields") {
    const int n = 2, nv = num_coords(n);
    const std::vector<double> origin(static_cast<size_t>(nv), 0.0);
    // t-direction field reduces to the plain coordinate derivative at 0
    for (int a = 0; a < n; ++a) {
        const auto v = frame_field_at(n, FieldId::horizontal(4 * a), origin);
        for (int mu = 0; mu < nv; ++mu) CHECK(v[static_cast<size_t>(mu)] == (mu == 4 * a ? 1.0 : 0.0));
    }
    // xi_1 = 2 d/dy at every point
    Rng rng(52);
    const auto pt = rng.uniform_vector(static_cast<size_t>(nv), -1, 1);
    const auto xi1 = frame_field_at(n, FieldId::xi(0), pt);
    for (int mu = 0; mu < nv; ++mu)
        CHECK(xi1[static_cast<size_t>(mu)] == (mu == 4 * n + 1 ? 2.0 : 0.0));
}

TEST_CASE("contact forms pair with the Reeb fields and kill the frame") {
    const int n = 2, nv = num_coords(n);
    Rng rng(53);
    for (int trial = 0; trial < 5; ++trial) {
        const auto pt = rng.uniform_vector(static_cast<size_t>(nv), -1, 1);
        for (int s = 0; s < 3; ++s) {
            const auto th = contact_form_at(n, s, pt);
            for (int t = 0; t < 3; ++t) {
                const auto xi = frame_field_at(n, FieldId::xi(t), pt);
                double pair = 0.0;
                for (int mu = 0; mu < nv; ++mu) pair += th[static_cast<size_t>(mu)] * xi[static_cast<size_t>(mu)];
                CHECK(std::abs(pair - (s == t ? 1.0 : 0.0)) <= 1e-13);
            }
            for (int b = 0; b < 4 * n; ++b) {
                const auto e = frame_field_at(n, FieldId::horizontal(b), pt);
                double pair = 0.0;
                for (int mu = 0; mu < nv; ++mu) pair += th[static_cast<size_t>(mu)] * e[static_cast<size_t>(mu)];
                CHECK(std::abs(pair) <= 1e-13);
            }
        }
    }
    // at the origin the third form is dx/2
    const std::vector<double> origin(static_cast<size_t>(nv), 0.0);
    const auto th3 = contact_form_at(n, 2, origin);
    for (int mu = 0; mu < nv; ++mu)
        CHECK(th3[static_cast<size_t>(mu)] == (mu == 4 * n ? 0.5 : 0.0));
}

TEST_CASE("model self-verification is exact for n = 1 and n = 2") {
    for (int n : {1, 2}) {
        CAPTURE(n);
        for (const auto& check : model_verify(n)) {
            CAPTURE(check.name);
            CHECK(check.residual <= 1e-12);
        }
    }
}

TEST_CASE("corrupting one frame coefficient sign is detected") {
    const int n = 1, nv = num_coords(n);
    auto hor0 = frame_field_coeffs(n, FieldId::horizontal(0));
    auto hor3 = frame_field_coeffs(n, FieldId::horizontal(3));
    // flip the sign of the vertical-x coefficient of the I3-direction field
    hor3[static_cast<size_t>(4 * n)] = -1.0 * hor3[static_cast<size_t>(4 * n)];
    const auto xi3 = frame_field_coeffs(n, FieldId::xi(2));
    const auto c = commutator(n, hor3, hor0);
    double residual = 0.0;
    for (int mu = 0; mu < nv; ++mu) {
        const Poly diff = c[static_cast<size_t>(mu)] - 2.0 * xi3[static_cast<size_t>(mu)];
        residual = std::max(residual, diff.max_abs_coeff());
    }
    CHECK(residual > 1e-2);
}
