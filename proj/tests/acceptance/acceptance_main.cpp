// Acceptance gate: every criterion is evaluated at its stated tolerance and
// reported as one pass/fail line; the process exits nonzero if any fails.

#include <chrono>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "pqc/deformed_suite.hpp"
#include "pqc/heisenberg.hpp"
#include "pqc/report.hpp"
#include "pqc/rng.hpp"
#include "pqc/runner.hpp"

using namespace pqc;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Poly worked_h(int n) {
    const int nv = num_coords(n);
    Poly hp = Poly::constant(nv, 1.0);
    Poly::Exps e(static_cast<size_t>(nv), 0);
    e[0] = 2;
    hp.add_term(e, 1.0);
    return hp;
}

Poly cubic_h(int n) {
    const int nv = num_coords(n);
    Poly hp = Poly::constant(nv, 2.0);
    auto add = [&](double c, std::initializer_list<std::pair<int, int>> mono) {
        Poly::Exps e(static_cast<size_t>(nv), 0);
        for (auto [i, k] : mono) e[static_cast<size_t>(i)] += k;
        hp.add_term(e, c);
    };
    add(0.25, {{4 * n + 0, 1}});                 // vertical x
    add(0.2, {{0, 1}, {4 * n + 1, 1}});          // t1 * vertical y
    add(-0.125, {{2, 3}});                       // (y1)^3
    add(1.0 / 7, {{0, 1}, {1, 1}, {4 * n + 2, 1}}); // t1 x1 * vertical z
    add(-1.0 / 9, {{3, 2}});                     // (z1)^2
    if (n >= 2) add(0.1, {{4, 1}, {1, 1}});      // t2 x1
    return hp;
}

Outcome criterion1_algebra() {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    double worst = 0.0;
    for (const auto& c : run_algebra_suite(42)) worst = std::max(worst, c.relative());
    const double secs = seconds_since(t0);
    o.pass = worst < 1e-12 && secs < 1.0;
    char buf[160];
    std::snprintf(buf, sizeof(buf), "max rel residual %.2e over 1e4 pairs + unit table, %.2f s",
                  worst, secs);
    o.detail = buf;
    return o;
}

Outcome criterion2_heisenberg() {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    double worst = 0.0;
    for (int n : {1, 2})
        for (const auto& c : model_verify(n)) worst = std::max(worst, c.residual);
    const double secs = seconds_since(t0);
    o.pass = worst < 1e-12 && secs < 1.0;
    char buf[160];
    std::snprintf(buf, sizeof(buf), "commutators/Reeb/compatibility/structure max %.2e, %.2f s",
                  worst, secs);
    o.detail = buf;
    return o;
}

Outcome criterion3_casimir() {
    Outcome o;
    double worst = 0.0;
    for (int n : {1, 2}) {
        const PqcFrameData f = build_adapted_frame(n);
        Rng rng(42 + n);
        for (int trial = 0; trial < 100; ++trial) {
            Tensor2 t(f.dim);
            for (int a = 0; a < f.dim; ++a)
                for (int b = 0; b < f.dim; ++b) t(a, b) = rng.uniform(-1, 1);
            const CasimirParts p = casimir_project(t, f);
            worst = std::max(worst, max_abs(p.part3 + p.part1m - t));
            worst = std::max(worst, max_abs(casimir_project(p.part3, f).part3 - p.part3));
            worst = std::max(worst, max_abs(casimir_project(p.part1m, f).part1m - p.part1m));
            worst = std::max(worst, max_abs(casimir_apply(p.part3, f) - 3.0 * p.part3));
            worst = std::max(worst, max_abs(casimir_apply(p.part1m, f) + p.part1m));

            const auto parts = four_part_split(t, f);
            Tensor2 sum = parts[0];
            for (int q = 1; q < 4; ++q) sum += parts[q];
            worst = std::max(worst, max_abs(sum - t));
            // projectors of the forbidden sign patterns annihilate everything
            static constexpr int forbidden[4][3] = {
                {-1, -1, -1}, {-1, +1, +1}, {+1, -1, +1}, {+1, +1, -1}};
            for (const auto& sg : forbidden) {
                Tensor2 acc = t; // (1/8)[(1+s1 s2 s3) t + sum_i (s_i + s_j s_k) C_i t]
                for (int i = 0; i < 3; ++i) {
                    auto [j, k] = cyclic(i);
                    const Tensor2 ci = (-eps_sign(i)) * both_apply(t, f.I[i], f.I[i]);
                    acc += static_cast<double>(sg[i] + sg[j] * sg[k]) * ci;
                }
                acc += static_cast<double>(sg[0] * sg[1] * sg[2]) * t;
                worst = std::max(worst, 0.125 * max_abs(acc));
            }
        }
    }
    o.pass = worst < 1e-12;
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "projector idempotence/completeness/eigenvalues on 100 tensors, max %.2e", worst);
    o.detail = buf;
    return o;
}

struct SweepResult {
    std::map<std::string, IdentityCheck> worst; // per identity across all configs
    double slowest_config = 0.0;
};

SweepResult run_conformal_sweep() {
    SweepResult res;
    int config = 0;
    for (int n : {1, 2}) {
        const PqcFrameData base = build_adapted_frame(n);
        for (int which : {0, 1}) {
            const auto t0 = std::chrono::steady_clock::now();
            const ScalarField h(n, which == 0 ? worked_h(n) : cubic_h(n));
            const DeformedJetPolys jp = deformed_jet_polys(h, base);
            Rng rng(42 + 1000 * config++);
            int accepted = 0;
            while (accepted < 5) {
                const auto pt = rng.uniform_vector(static_cast<size_t>(num_coords(n)), -1, 1);
                if (h.value(pt) <= 0.0) continue;
                ++accepted;
                for (const auto& c : deformed_point_checks(h, pt, base, jp, 1)) {
                    auto it = res.worst.find(c.name);
                    if (it == res.worst.end() || c.relative() > it->second.relative())
                        res.worst[c.name] = c;
                }
            }
            res.slowest_config = std::max(res.slowest_config, seconds_since(t0));
        }
    }
    return res;
}

Outcome criterion4_curvature_cross(const SweepResult& sweep) {
    Outcome o;
    const IdentityCheck& c = sweep.worst.at("qcw4_cross");
    o.pass = c.relative() < 1e-6 && sweep.slowest_config < 30.0;
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "closed form vs direct oracle, max rel %.2e (20 samples), slowest config %.2f s",
                  c.relative(), sweep.slowest_config);
    o.detail = buf;
    return o;
}

Outcome criterion5_identities(const SweepResult& sweep) {
    Outcome o;
    const std::map<std::string, double> tols = {
        {"ricci", 1e-7},         {"ricciformf", 1e-7}, {"riccitau", 1e-7},
        {"riccizeta", 1e-7},     {"zamiana", 1e-6},    {"rjr", 1e-6},
        {"comp1", 1e-6},         {"div", 1e-6},        {"pyam", 1e-8},
        {"qcw6_trace", 1e-10},   {"qcw6_pair_traces", 1e-10},
        {"qcwric_ric", 1e-10},   {"qcwric_scal", 1e-10},
        {"mu_vanishes_n1", 1e-10},
    };
    double worst_margin = 0.0;
    std::string worst_name = "-";
    for (const auto& [name, tol] : tols) {
        const IdentityCheck& c = sweep.worst.at(name);
        const double margin = c.relative() / tol;
        if (margin > worst_margin) {
            worst_margin = margin;
            worst_name = name;
        }
        if (c.relative() >= tol) o.pass = false;
    }
    char buf[160];
    std::snprintf(buf, sizeof(buf), "14 identity families; tightest margin %s at %.1e of budget",
                  worst_name.c_str(), worst_margin);
    o.detail = buf;
    return o;
}

Outcome criterion6_flatness(const SweepResult& sweep) {
    Outcome o;
    const char* names[] = {"wpqc_projector", "wpqc_explicit", "trfree_ric",     "trfree_rho",
                           "trfree_varrho",  "trfree_zeta",   "main0_pwr_minus1"};
    double worst = 0.0;
    for (const char* name : names) {
        const IdentityCheck& c = sweep.worst.at(name);
        worst = std::max(worst, c.relative());
        if (c.relative() >= 1e-7) o.pass = false;
    }
    if (sweep.worst.at("flatness_verdict").residual != 0.0) o.pass = false;
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "W vanishes via projector and explicit routes, PWR trace-free, max rel %.2e",
                  worst);
    o.detail = buf;
    return o;
}

Outcome criterion7_worked_number() {
    Outcome o;
    const int n = 1;
    const PqcFrameData base = build_adapted_frame(n);
    const ScalarField h(n, worked_h(n));
    const std::vector<double> origin(static_cast<size_t>(num_coords(n)), 0.0);
    const DeformationData def = make_deformation(h, origin, base);
    const Tensor4 Rbar = curvature_bar_closed_form(def, 1);
    const CurvaturePack pack = ricci_traces(Rbar, def.deformed);
    const double from_law = def.scal_bar;
    const double from_trace = pack.Scal;
    o.pass = std::abs(from_law - 48.0) < 1e-12 && std::abs(from_trace - 48.0) < 1e-8 * 48.0 &&
             std::abs(from_law - from_trace) < 1e-8 * 48.0;
    char buf[160];
    std::snprintf(buf, sizeof(buf), "Scal = %.12g (transformation law) vs %.12g (curvature trace)",
                  from_law, from_trace);
    o.detail = buf;
    return o;
}

Outcome criterion8_cayley() {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    double worst_rel = 0.0, worst_rt = 0.0;
    for (int n : {1, 2}) {
        for (const auto& c : run_cayley_suite(n, 42, 20)) {
            if (c.name == "cayley_identity" || c.name == "cayley_base_point")
                worst_rel = std::max(worst_rel, c.relative());
            if (c.name == "cayley_roundtrip") worst_rt = std::max(worst_rt, c.residual);
        }
    }
    const double secs = seconds_since(t0);
    o.pass = worst_rel < 1e-8 && worst_rt < 1e-10 && secs < 5.0;
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "identity max rel %.2e, round trip max %.2e over 20 points per n, %.2f s",
                  worst_rel, worst_rt, secs);
    o.detail = buf;
    return o;
}

Outcome criterion9_determinism() {
    Outcome o;
    VerificationSpec spec;
    spec.n = 1;
    spec.suites = known_suites();
    spec.sample_count = 3;
    spec.tolerances = default_tolerances();
    HTerm c0, c2;
    c0.coeff = 1.0;
    c2.coeff = 1.0;
    c2.exps["t1"] = 2;
    spec.h_terms = {c0, c2};
    const std::string a = report_to_json_string(run_suite(spec));
    const std::string b = report_to_json_string(run_suite(spec));
    o.pass = (a == b) && !a.empty();
    char buf[160];
    std::snprintf(buf, sizeof(buf), "two seeded runs, %zu report bytes, byte-identical: %s",
                  a.size(), a == b ? "yes" : "no");
    o.detail = buf;
    return o;
}

} // namespace

int main() {
    std::vector<std::pair<std::string, Outcome>> results;
    results.emplace_back("split-quaternion algebra", criterion1_algebra());
    results.emplace_back("Heisenberg model structure (n=1,2)", criterion2_heisenberg());
    results.emplace_back("Casimir and invariant-split algebra", criterion3_casimir());

    const SweepResult sweep = run_conformal_sweep();
    results.emplace_back("conformal curvature closed form vs oracle", criterion4_curvature_cross(sweep));
    results.emplace_back("deformed-structure identity suite", criterion5_identities(sweep));
    results.emplace_back("flatness of the conformal family", criterion6_flatness(sweep));
    results.emplace_back("worked number Scal = 48", criterion7_worked_number());
    results.emplace_back("Cayley transform conformal equivalence", criterion8_cayley());
    results.emplace_back("report determinism", criterion9_determinism());

    int failures = 0;
    for (size_t i = 0; i < results.size(); ++i) {
        const auto& [label, o] = results[i];
        std::printf("[%s] criterion %zu: %s (%s)\n", o.pass ? "PASS" : "FAIL", i + 1,
                    label.c_str(), o.detail.c_str());
        if (!o.pass) ++failures;
    }
    std::printf("%d/%zu acceptance criteria passed\n", static_cast<int>(results.size()) - failures,
                results.size());
    return failures == 0 ? 0 : 1;
}
