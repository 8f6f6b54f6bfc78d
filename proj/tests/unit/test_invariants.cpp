#include <catch2/catch_amalgamated.hpp>

#include "pqc/conformal.hpp"
#include "pqc/deformed_suite.hpp"
#include "pqc/invariants.hpp"
#include "pqc/rng.hpp"
#include "pqc/verifyspec.hpp"

using namespace pqc;

namespace {

Tensor2 random_tensor2(Rng& rng, int d) {
    Tensor2 t(d);
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) t(a, b) = rng.uniform(-1, 1);
    return t;
}

Tensor4 random_pair_antisym_tensor4(Rng& rng, int d) {
    Tensor4 t(d);
    for (double& x : t.data()) x = rng.uniform(-1, 1);
    Tensor4 r(d);
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b)
            for (int c = 0; c < d; ++c)
                for (int e = 0; e < d; ++e)
                    r(a, b, c, e) = 0.25 * (t(a, b, c, e) - t(b, a, c, e) - t(a, b, e, c) +
                                            t(b, a, e, c));
    return r;
}

// random valid torsion pair: tau symmetric trace-free [-1], mu symmetric
// trace-free [3] (zero when n = 1)
std::pair<Tensor2, Tensor2> random_torsion_pair(Rng& rng, const PqcFrameData& f) {
    const Tensor2 sym = symmetric_part(random_tensor2(rng, f.dim));
    Tensor2 tau = casimir_project(sym, f).part1m;
    tau = symmetric_part(tau);
    const Tensor2 sym2 = symmetric_part(random_tensor2(rng, f.dim));
    Tensor2 mu = trace_free(casimir_project(sym2, f).part3, f);
    mu = symmetric_part(mu);
    if (f.n == 1) mu = Tensor2(f.dim);
    return {tau, mu};
}

Poly generic_h(int n) {
    const int nv = num_coords(n);
    Poly hp = Poly::constant(nv, 2.0);
    auto add = [&](double c, std::initializer_list<std::pair<int, int>> mono) {
        Poly::Exps e(static_cast<size_t>(nv), 0);
        for (auto [i, k] : mono) e[static_cast<size_t>(i)] += k;
        hp.add_term(e, c);
    };
    add(0.25, {{4 * n + 0, 1}});
    add(0.2, {{0, 1}, {4 * n + 1, 1}});
    add(-0.125, {{2, 3}});
    add(1.0 / 7, {{0, 1}, {1, 1}, {4 * n + 2, 1}});
    add(-1.0 / 9, {{3, 2}});
    return hp;
}

} // namespace

TEST_CASE("ricci traces of zero and of the metric product") {
    for (int n : {1, 2}) {
        const PqcFrameData f = build_adapted_frame(n);
        const CurvaturePack zero = ricci_traces(Tensor4(f.dim), f);
        CHECK(max_abs(zero.Ric) == 0.0);
        CHECK(zero.Scal == 0.0);
        for (int s = 0; s < 3; ++s) {
            CHECK(max_abs(zero.rho[s]) == 0.0);
            CHECK(max_abs(zero.varrho[s]) == 0.0);
            CHECK(max_abs(zero.zeta[s]) == 0.0);
        }

        // R = g^g gives Ric = c(n) g; oracle is the explicit signed loop
        const Tensor4 gg = kulkarni_nomizu(f.g, f.g);
        const CurvaturePack p = ricci_traces(gg, f);
        const double signs[4] = {1, -1, -1, 1};
        Tensor2 oracle(f.dim);
        for (int X = 0; X < f.dim; ++X)
            for (int Y = 0; Y < f.dim; ++Y) {
                double acc = 0.0;
                for (int a = 0; a < f.dim; ++a) acc += signs[a % 4] * gg(a, X, Y, a);
                oracle(X, Y) = acc;
            }
        CHECK(max_abs(p.Ric - oracle) <= 1e-13);
        CHECK(max_abs(p.Ric - (2.0 - 8.0 * n) * f.g) <= 1e-13);
    }
}

TEST_CASE("torsion split: zero input and round trip through the forms") {
    for (int n : {1, 2}) {
        const PqcFrameData f = build_adapted_frame(n);
        {
            std::array<Tensor2, 3> zero{Tensor2(f.dim), Tensor2(f.dim), Tensor2(f.dim)};
            const TorsionSplit sp = torsion_split(zero, f);
            CHECK(max_abs(sp.tau) == 0.0);
            CHECK(max_abs(sp.mu) == 0.0);
        }
        Rng rng(71 + n);
        for (int trial = 0; trial < 10; ++trial) {
            const auto [tau, mu] = random_torsion_pair(rng, f);
            std::array<Tensor2, 3> forms;
            for (int i = 0; i < 3; ++i) forms[i] = torsion_form_from_split(tau, mu, f, i);
            const TorsionSplit sp = torsion_split(forms, f);
            const double scale = std::max({max_abs(tau), max_abs(mu), 1.0});
            CHECK(max_abs(sp.tau - tau) <= 1e-12 * scale);
            CHECK(max_abs(sp.mu - mu) <= 1e-12 * scale);
            CHECK(sp.mu_spread <= 1e-12 * scale);
        }
    }
}

TEST_CASE("torsion split rejects inconsistent candidates") {
    const PqcFrameData f = build_adapted_frame(1);
    Rng rng(72);
    std::array<Tensor2, 3> forms;
    for (int i = 0; i < 3; ++i) forms[i] = random_tensor2(rng, f.dim);
    CHECK_THROWS_AS(torsion_split(forms, f), InconsistentTorsion);
}

TEST_CASE("L tensor of the flat structure vanishes; L0 is trace-free") {
    for (int n : {1, 2}) {
        const PqcFrameData f = build_adapted_frame(n);
        const CurvaturePack flat = ricci_traces(Tensor4(f.dim), f);
        TorsionSplit sp;
        sp.tau = Tensor2(f.dim);
        sp.mu = Tensor2(f.dim);
        const LTensors lt = l_tensor(flat, sp);
        CHECK(max_abs(lt.L) == 0.0);
        CHECK(lt.route_gap == 0.0);

        Rng rng(73 + n);
        const auto [tau, mu] = random_torsion_pair(rng, f);
        TorsionSplit rsp;
        rsp.tau = tau;
        rsp.mu = mu;
        const LTensors lt2 = l_tensor(flat, rsp);
        CHECK(std::abs(signed_trace(lt2.L0, f)) <= 1e-12);
    }
}

TEST_CASE("PWR assemblies agree on synthetic input consistent with L") {
    for (int n : {1, 2}) {
        const PqcFrameData f = build_adapted_frame(n);
        Rng rng(74 + n);
        CurvaturePack pack;
        pack.n = n;
        pack.frame = f;
        pack.R = random_pair_antisym_tensor4(rng, f.dim);

        const Tensor2 L = symmetric_part(random_tensor2(rng, f.dim));
        const double trL = signed_trace(L, f);
        // torsion data consistent with L
        Tensor2 tau = 2.0 * casimir_project(L, f).part1m;
        Tensor2 mu = casimir_project(L, f).part3 - (trL / (4.0 * n)) * f.g;
        const double scal = 8.0 * n * (n + 2.0) * trL / n; // = 8(n+2) trL
        const Tensor2 L0 = L - (trL / (4.0 * n)) * f.g;

        const Tensor4 a = pwr_tensor(pack, L, trL);
        const Tensor4 b = pwr_tensor_alt(pack, L0, tau, mu, scal);
        const double scale = std::max({max_abs(a), max_abs(b), 1e-30});
        CHECK(max_abs(a - b) <= 1e-12 * scale);
    }
}

TEST_CASE("wpqc projector completeness and flatness verdict on synthetic input") {
    const PqcFrameData f = build_adapted_frame(1);
    Rng rng(75);
    const Tensor4 R = random_pair_antisym_tensor4(rng, f.dim);
    const FirstPairParts p = first_pair_project(R, f);
    CHECK(max_abs(p.part3 + p.part1m - R) <= 1e-13);

    // a random curvature-shaped tensor is essentially never flat
    const FlatnessVerdict v = flatness_verdict(p.part3, R, 1e-7);
    CHECK_FALSE(v.flat);

    // the flat model is
    const Tensor4 zero(f.dim);
    const FlatnessVerdict vz = flatness_verdict(zero, zero, 1e-7);
    CHECK(vz.flat);
}

TEST_CASE("deformed-structure sweep stays within the documented tolerances") {
    for (int n : {1, 2}) {
        const PqcFrameData f = build_adapted_frame(n);
        const ScalarField h(n, generic_h(n));
        const DeformedJetPolys jp = deformed_jet_polys(h, f);
        Rng rng(76 + n);
        std::vector<double> pt;
        do {
            pt = rng.uniform_vector(static_cast<size_t>(num_coords(n)), -1, 1);
        } while (h.value(pt) <= 0.0);

        const auto checks = deformed_point_checks(h, pt, f, jp, 1);
        const auto tols = default_tolerances();
        for (const auto& c : checks) {
            CAPTURE(n, c.name, c.residual, c.scale);
            auto it = tols.find(c.name);
            const double tol = (it != tols.end()) ? it->second : 1e-8;
            CHECK(c.relative() <= tol);
        }
    }
}

TEST_CASE("corrupted curvature is flagged by the identity checks") {
    const int n = 1;
    const PqcFrameData f = build_adapted_frame(n);
    const ScalarField h(n, generic_h(n));
    Rng rng(78);
    std::vector<double> pt;
    do {
        pt = rng.uniform_vector(static_cast<size_t>(num_coords(n)), -1, 1);
    } while (h.value(pt) <= 0.0);
    const DeformationData def = make_deformation(h, pt, f);
    Tensor4 Rbar = curvature_bar_closed_form(def, 1);
    // flip one antisymmetric component pair by a visible amount
    Rbar(0, 1, 2, 3) += 1e-2;
    Rbar(0, 1, 3, 2) -= 1e-2;
    const CurvaturePack pack = ricci_traces(Rbar, def.deformed);
    TorsionSplit sp;
    sp.tau = def.tau_bar;
    sp.mu = def.mu_bar;
    const bool tripped = check_ricci_formula(pack, sp).relative() > 1e-7 ||
                         check_zamiana(pack, sp).relative() > 1e-6 ||
                         check_comp1(pack, sp).relative() > 1e-6 ||
                         check_rjr(pack).relative() > 1e-6;
    CHECK(tripped);
}

TEST_CASE("geometric sample: tau/mu from the engine satisfy the trace formulas") {
    const int n = 2;
    const PqcFrameData f = build_adapted_frame(n);
    const ScalarField h(n, generic_h(n));
    Rng rng(77);
    std::vector<double> pt;
    do {
        pt = rng.uniform_vector(static_cast<size_t>(num_coords(n)), -1, 1);
    } while (h.value(pt) <= 0.0);
    const DeformationData def = make_deformation(h, pt, f);
    const Tensor4 Rbar = curvature_bar_closed_form(def, 1);
    const CurvaturePack pack = ricci_traces(Rbar, def.deformed);
    TorsionSplit sp;
    sp.tau = def.tau_bar;
    sp.mu = def.mu_bar;

    CHECK(check_ricci_formula(pack, sp).relative() <= 1e-7);
    CHECK(check_ricciformf(pack, sp).relative() <= 1e-7);
    CHECK(check_riccitau(pack, sp).relative() <= 1e-7);
    CHECK(check_riccizeta(pack, sp).relative() <= 1e-7);
    const IdentityCheck zam = check_zamiana(pack, sp);
    CHECK(zam.relative() <= 1e-6);
    CHECK(zam.scale > 1e-3); // both sides genuinely nonzero for generic h
    CHECK(check_rjr(pack).relative() <= 1e-6);
    const IdentityCheck c1 = check_comp1(pack, sp);
    CHECK(c1.relative() <= 1e-6);
    CHECK(c1.scale > 1e-3);
}
