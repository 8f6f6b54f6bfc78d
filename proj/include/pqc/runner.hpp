#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <map>
#include <string>
#include <thread>
#include <vector>

#include "pqc/cayley.hpp"
#include "pqc/deformed_suite.hpp"
#include "pqc/heisenberg.hpp"
#include "pqc/invariants.hpp"
#include "pqc/report.hpp"
#include "pqc/rng.hpp"
#include "pqc/verifyspec.hpp"

namespace pqc {

inline int thread_budget() {
    if (const char* env = std::getenv("PQC_THREADS")) {
        const int v = std::atoi(env);
        if (v >= 1) return v;
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc ? static_cast<int>(hc) : 1;
}

// Index-parallel loop; work items write only their own slot, merge order is
// fixed by index so parallelism never changes report bytes.
template <typename Fn>
inline void parallel_for(int count, Fn&& fn) {
    const int nthreads = std::min(thread_budget(), std::max(count, 1));
    if (nthreads <= 1 || count <= 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    std::atomic<int> next{0};
    for (int t = 0; t < nthreads; ++t) {
        pool.emplace_back([&]() {
            for (;;) {
                const int i = next.fetch_add(1);
                if (i >= count) return;
                fn(i);
            }
        });
    }
    for (auto& th : pool) th.join();
}

namespace detail {

struct Aggregator {
    // per identity: representative with the worst relative residual
    std::map<std::string, IdentityCheck> worst;
    std::map<std::string, int> points;

    void add(const IdentityCheck& c) {
        points[c.name] += 1;
        auto it = worst.find(c.name);
        if (it == worst.end() || c.relative() > it->second.relative()) worst[c.name] = c;
    }
    void add_all(const std::vector<IdentityCheck>& cs) {
        for (const auto& c : cs) add(c);
    }

    void emit(const std::string& suite, const std::map<std::string, double>& tols,
              Report& report) const {
        for (const auto& [name, c] : worst) {
            ReportEntry e;
            e.suite = suite;
            e.identity = name;
            e.equation = equation_tag(name);
            e.points = points.at(name);
            e.max_residual = c.residual;
            e.scale = c.scale;
            auto it = tols.find(name);
            e.tolerance = (it != tols.end()) ? it->second : 1e-8;
            e.pass = c.relative() <= e.tolerance;
            report.entries.push_back(e);
            if (!e.pass) report.overall_pass = false;
        }
    }
};

inline ParaQuaternion random_pq(Rng& rng, double box) {
    return {rng.uniform(-box, box), rng.uniform(-box, box), rng.uniform(-box, box),
            rng.uniform(-box, box)};
}

} // namespace detail

inline std::vector<IdentityCheck> run_algebra_suite(std::uint64_t seed) {
    std::vector<IdentityCheck> out;
    Rng rng(seed ^ 0xA16EB7AULL);

    // nine imaginary-unit products
    {
        const ParaQuaternion r1 = ParaQuaternion::r1(), r2 = ParaQuaternion::r2(),
                             r3 = ParaQuaternion::r3();
        const ParaQuaternion units[3] = {r1, r2, r3};
        const ParaQuaternion want[3][3] = {
            {ParaQuaternion::one(), r3, r2},
            {-r3, ParaQuaternion::one(), -r1},
            {-r2, r1, -ParaQuaternion::one()},
        };
        double worst = 0.0;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                worst = std::max(worst, max_abs_coeff(mul(units[i], units[j]) - want[i][j]));
        out.push_back({"pq_unit_products", worst, 1.0});
    }
    // multiplicativity of norm2 over 1e4 seeded pairs
    {
        double worst = 0.0;
        for (int i = 0; i < 10000; ++i) {
            const ParaQuaternion p = detail::random_pq(rng, 1.0), q = detail::random_pq(rng, 1.0);
            const double lhs = norm2(mul(p, q));
            const double rhs = norm2(p) * norm2(q);
            const double scale = std::max({std::abs(lhs), std::abs(rhs), 1.0});
            worst = std::max(worst, std::abs(lhs - rhs) / scale);
        }
        out.push_back({"pq_norm_mult", worst, 1.0});
    }
    // associativity and conjugation anti-automorphism on random triples/pairs
    {
        double worst_a = 0.0, worst_c = 0.0;
        for (int i = 0; i < 2000; ++i) {
            const ParaQuaternion p = detail::random_pq(rng, 1.0), q = detail::random_pq(rng, 1.0),
                                 r = detail::random_pq(rng, 1.0);
            worst_a = std::max(worst_a, max_abs_coeff(mul(mul(p, q), r) - mul(p, mul(q, r))));
            worst_c = std::max(worst_c, max_abs_coeff(conj(mul(p, q)) - mul(conj(q), conj(p))));
        }
        out.push_back({"pq_assoc", worst_a, 1.0});
        out.push_back({"pq_conj_antihom", worst_c, 1.0});
    }
    // inverses away from the zero-norm cone
    {
        double worst = 0.0;
        int done = 0;
        while (done < 1000) {
            const ParaQuaternion p = detail::random_pq(rng, 1.0);
            if (std::abs(norm2(p)) < 0.05) continue;
            ++done;
            worst = std::max(worst, max_abs_coeff(mul(inv(p), p) - ParaQuaternion::one()));
        }
        out.push_back({"pq_inverse", worst, 1.0});
    }
    return out;
}

inline std::vector<IdentityCheck> run_heisenberg_suite(int n) {
    std::vector<IdentityCheck> out;
    for (const auto& c : model_verify(n)) out.push_back({c.name, c.residual, 1.0});

    // conformal curvature of the flat structure vanishes
    {
        const PqcFrameData frame = build_adapted_frame(n);
        const Tensor4 R(frame.dim);
        const CurvaturePack pack = ricci_traces(R, frame);
        TorsionSplit split;
        split.tau = Tensor2(frame.dim);
        split.mu = Tensor2(frame.dim);
        const LTensors lt = l_tensor(pack, split);
        const Tensor4 PWR = pwr_tensor(pack, lt.L, lt.tr_L);
        const Tensor4 W = wpqc_tensor(PWR, frame);
        out.push_back({"flat_wpqc", std::max(max_abs(W), max_abs(PWR)), 1.0});
    }
    // h = 1/2 is the identity deformation: etabar = eta, curvature stays zero
    {
        const PqcFrameData frame = build_adapted_frame(n);
        const Poly half = Poly::constant(num_coords(n), 0.5);
        const ScalarField h(n, half);
        std::vector<double> pt(static_cast<size_t>(num_coords(n)), 0.25);
        const Tensor4 direct = curvature_bar_direct(h, pt, frame);
        const DeformationData def = make_deformation(h, pt, frame);
        const Tensor4 closed = curvature_bar_closed_form(def, 1);
        out.push_back({"identity_deformation", std::max(max_abs(direct), max_abs(closed)), 1.0});
    }
    return out;
}

struct ConformalSuiteResult {
    std::vector<IdentityCheck> checks;
    CurvatureCalibration calibration;
    std::vector<std::vector<double>> points;
};

inline ConformalSuiteResult run_conformal_suite(int n, const ScalarField& h, int sample_count,
                                                std::uint64_t seed, double box) {
    ConformalSuiteResult result;
    const PqcFrameData base = build_adapted_frame(n);
    const int nv = num_coords(n);

    // pre-draw all admissible points sequentially for determinism
    Rng rng(seed ^ 0xC0F0B41ULL);
    for (int i = 0; i < sample_count; ++i) {
        int rejections = 0;
        for (;;) {
            std::vector<double> pt = rng.uniform_vector(static_cast<size_t>(nv), -box, box);
            if (h.value(pt) > 0.0) {
                result.points.push_back(std::move(pt));
                break;
            }
            if (++rejections >= 100)
                throw DomainExhausted("100 consecutive samples violated h > 0");
        }
    }

    result.calibration = calibrate_curvature_normalization(h, result.points.front(), base);
    const int k = result.calibration.half_h_power;
    const DeformedJetPolys jp = deformed_jet_polys(h, base);

    std::vector<std::vector<IdentityCheck>> per_point(result.points.size());
    parallel_for(static_cast<int>(result.points.size()), [&](int i) {
        per_point[static_cast<size_t>(i)] =
            deformed_point_checks(h, result.points[static_cast<size_t>(i)], base, jp, k);
    });
    for (const auto& cs : per_point)
        for (const auto& c : cs) result.checks.push_back(c);
    return result;
}

inline std::vector<IdentityCheck> run_cayley_suite(int n, std::uint64_t seed, int points) {
    std::vector<IdentityCheck> out;
    Rng rng(seed ^ 0xCA71E4ULL);

    auto random_tangent = [&](const SpherePoint& pt) {
        TangentVector raw;
        raw.dq.resize(static_cast<size_t>(n));
        for (int a = 0; a < n; ++a) raw.dq[static_cast<size_t>(a)] = detail::random_pq(rng, 1.0);
        raw.dp = detail::random_pq(rng, 1.0);
        return project_tangent(pt, raw);
    };

    // closed-form base point (q, p) = (0, -1) -> (0, 0)
    {
        SpherePoint base;
        base.q.assign(static_cast<size_t>(n), ParaQuaternion{});
        base.p = {-1.0, 0.0, 0.0, 0.0};
        const SigmaPoint img = cayley_forward(base);
        double res = max_abs_coeff(img.p);
        for (const auto& qa : img.q) res = std::max(res, max_abs_coeff(qa));
        for (int trial = 0; trial < 5; ++trial) {
            const TangentVector v = random_tangent(base);
            const CayleyIdentityResult r = verify_cayley_identity(base, v);
            res = std::max(res, r.residual / std::max(1.0, r.scale));
        }
        out.push_back({"cayley_base_point", res, 1.0});
    }

    // sampler: draw (q, p), rescale onto the positive sheet, reject |s| < 0.1
    // and the excluded locus
    int accepted = 0;
    double worst_identity = 0.0, worst_scale = 1.0;
    double worst_rt = 0.0, worst_emb = 0.0, worst_eta = 0.0, worst_con = 0.0;
    while (accepted < points) {
        SpherePoint pt;
        pt.q.resize(static_cast<size_t>(n));
        for (int a = 0; a < n; ++a) pt.q[static_cast<size_t>(a)] = detail::random_pq(rng, 1.0);
        pt.p = detail::random_pq(rng, 1.0);
        double s = norm2(pt.p);
        for (const auto& qa : pt.q) s += norm2(qa);
        if (std::abs(s) < 0.1 || s < 0.0) continue;
        const double r = 1.0 / std::sqrt(s);
        for (auto& qa : pt.q) qa = r * qa;
        pt.p = r * pt.p;
        if (singular_locus_margin(pt) < 1e-3) continue;
        ++accepted;

        worst_con = std::max(worst_con, pt.constraint_residual());
        const TangentVector v = random_tangent(pt);
        const CayleyIdentityResult res = verify_cayley_identity(pt, v);
        if (res.residual / std::max(1.0, res.scale) >
            worst_identity / std::max(1.0, worst_scale)) {
            worst_identity = res.residual;
            worst_scale = res.scale;
        }
        const ParaQuaternion eta = eta_sphere_at(pt, v);
        worst_eta = std::max(worst_eta, std::abs(re(eta)));

        const SigmaPoint img = cayley_forward(pt);
        worst_emb = std::max(worst_emb, img.embedding_residual());
        const SpherePoint back = cayley_inverse(img);
        double rtres = max_abs_coeff(back.p - pt.p);
        for (int a = 0; a < n; ++a)
            rtres = std::max(rtres, max_abs_coeff(back.q[static_cast<size_t>(a)] -
                                                  pt.q[static_cast<size_t>(a)]));
        worst_rt = std::max(worst_rt, rtres);
    }
    out.push_back({"cayley_identity", worst_identity, worst_scale});
    out.push_back({"cayley_roundtrip", worst_rt, 1.0});
    out.push_back({"cayley_embedding", worst_emb, 1.0});
    out.push_back({"cayley_eta_imaginary", worst_eta, 1.0});
    out.push_back({"cayley_sphere_constraint", worst_con, 1.0});
    return out;
}

inline Report run_suite(const VerificationSpec& spec) {
    Report report;
    report.n = spec.n;
    report.seed = spec.seed;
    report.sample_count = spec.sample_count;
    report.point_box = spec.point_box;
    report.suites = spec.suites;
    report.tolerances = spec.tolerances;
    report.warnings = spec.warnings;

    auto has = [&](const char* s) {
        return std::find(spec.suites.begin(), spec.suites.end(), s) != spec.suites.end();
    };

    if (has("algebra")) {
        detail::Aggregator agg;
        agg.add_all(run_algebra_suite(spec.seed));
        agg.emit("algebra", spec.tolerances, report);
    }
    if (has("heisenberg")) {
        detail::Aggregator agg;
        agg.add_all(run_heisenberg_suite(spec.n));
        agg.emit("heisenberg", spec.tolerances, report);
    }
    if (has("conformal")) {
        const Poly hp = h_poly_from_terms(spec.n, spec.h_terms);
        const ScalarField h(spec.n, hp);
        detail::Aggregator agg;
        const ConformalSuiteResult res =
            run_conformal_suite(spec.n, h, spec.sample_count, spec.seed, spec.point_box);
        agg.add_all(res.checks);
        agg.emit("conformal", spec.tolerances, report);
        report.notes.push_back(
            "curvature normalization: Rbar = RHS/(2h)^" +
            std::to_string(res.calibration.half_h_power) + " (oracle mismatch " +
            decimal17(res.calibration.mismatch_k1) + " vs " +
            decimal17(res.calibration.mismatch_k2) + ")");
    }
    if (has("cayley")) {
        detail::Aggregator agg;
        agg.add_all(run_cayley_suite(spec.n, spec.seed, 20));
        agg.emit("cayley", spec.tolerances, report);
    }
    return report;
}

} // namespace pqc
