#pragma once

#include <string>
#include <vector>

#include "pqc/conformal.hpp"
#include "pqc/invariants.hpp"
#include "pqc/jets.hpp"
#include "pqc/tensor_core.hpp"

namespace pqc {

// Full identity sweep for one deformed sample: curvature cross-check, torsion
// structure, trace identities, conformal-curvature flatness.  Returns one
// residual record per identity; the caller aggregates across points.
inline std::vector<IdentityCheck> deformed_point_checks(const ScalarField& h,
                                                        const std::vector<double>& pt,
                                                        const PqcFrameData& base,
                                                        const DeformedJetPolys& jp,
                                                        int half_h_power) {
    std::vector<IdentityCheck> out;
    const DeformationData def = make_deformation(h, pt, base);
    const int n = base.n;
    const double two_h = 2.0 * def.hval;

    // closed form vs direct finite-difference oracle
    const Tensor4 Rbar = curvature_bar_closed_form(def, half_h_power);
    {
        const Tensor4 direct = curvature_bar_direct(h, pt, base);
        const double scale = std::max({max_abs(Rbar), max_abs(direct), 1e-30});
        out.push_back({"qcw4_cross", max_abs(Rbar - direct), scale});
    }
    {
        double anti = 0.0;
        for (int a = 0; a < base.dim; ++a)
            for (int b = 0; b < base.dim; ++b)
                for (int c = 0; c < base.dim; ++c)
                    for (int e = c; e < base.dim; ++e)
                        anti = std::max(anti, std::abs(Rbar(a, b, c, e) + Rbar(a, b, e, c)));
        out.push_back({"qcw4_last_pair_antisym", anti, std::max(max_abs(Rbar), 1e-30)});
    }

    // torsion tensors from the explicit transformation formulas
    const Tensor2& tau = def.tau_bar;
    const Tensor2& mu = def.mu_bar;
    const double tau_scale = std::max(max_abs(tau), 1e-30);
    const double mu_scale = std::max(max_abs(mu), 1e-30);
    out.push_back({"tau_symmetry", max_abs(antisymmetric_part(tau)), tau_scale});
    out.push_back({"tau_tracefree", std::abs(signed_trace(tau, def.deformed)), tau_scale});
    out.push_back(
        {"tau_eigenspace", max_abs(casimir_project(tau, def.deformed).part3), tau_scale});
    out.push_back({"mu_symmetry", max_abs(antisymmetric_part(mu)), mu_scale});
    out.push_back({"mu_tracefree", std::abs(signed_trace(mu, def.deformed)), mu_scale});
    out.push_back({"mu_eigenspace", max_abs(casimir_project(mu, def.deformed).part1m), mu_scale});
    {
        double worst = 0.0;
        for (int s = 0; s < 3; ++s)
            worst = std::max(worst, max_abs(both_apply(mu, base.I[s], base.I[s]) + eps_sign(s) * mu));
        out.push_back({"mu_propmu", worst, mu_scale});
    }
    if (n == 1) out.push_back({"mu_vanishes_n1", max_abs(mu), std::max(max_abs(tau), 1.0)});

    // round trip through the torsion endomorphism forms
    {
        const TorsionSplit rt = torsion_split(def.tors_form, def.deformed);
        const double scale = std::max({tau_scale, mu_scale, 1.0});
        double res = std::max(max_abs(rt.tau - tau), max_abs(rt.mu - mu));
        out.push_back({"torsion_roundtrip", res, scale});
        out.push_back({"torsion_mu_spread", rt.mu_spread, scale});
    }

    // M-tensor structure
    const Tensor2 Msym = symmetric_part(def.M);
    {
        Tensor2 anti_want(base.dim);
        for (int s = 0; s < 3; ++s)
            anti_want += (def.gd.dhxi[static_cast<size_t>(s)] * eps_sign(s) / two_h) * base.omega[s];
        const Tensor2 anti = def.M - Msym;
        out.push_back({"mm1", max_abs(anti - anti_want),
                       std::max({max_abs(anti), max_abs(anti_want), 1e-30})});
    }
    {
        const double sc = std::max({std::abs(def.tr_M), std::abs(def.tr_M_closed), 1e-30});
        out.push_back({"qcw6_trace", std::abs(def.tr_M - def.tr_M_closed), sc});
        double worst = 0.0, scp = 1e-30;
        for (int s = 0; s < 3; ++s) {
            worst = std::max(worst, std::abs(def.M_s[static_cast<size_t>(s)] -
                                             def.M_s_closed[static_cast<size_t>(s)]));
            scp = std::max({scp, std::abs(def.M_s[static_cast<size_t>(s)]), 1.0});
        }
        out.push_back({"qcw6_pair_traces", worst, scp});
    }

    // traces of the deformed curvature
    const CurvaturePack pack = ricci_traces(Rbar, def.deformed);
    for (const auto& [name, res] : pack.self_residuals)
        out.push_back({"pack_" + name, res, std::max(max_abs(Rbar), 1.0)});

    TorsionSplit split;
    split.tau = tau;
    split.mu = mu;

    // Ricci transformation: Ric_bar = 4(n+1) M_sym + 6 M_[3] + (2n+3)/(2n) trM g
    {
        const Tensor2 M3 = casimir_project(def.M, base).part3;
        const Tensor2 rhs = (4.0 * (n + 1.0)) * Msym + 6.0 * M3 +
                            ((2.0 * n + 3.0) / (2.0 * n) * def.tr_M) * base.g;
        out.push_back({"qcwric_ric", max_abs(pack.Ric - rhs),
                       std::max({max_abs(pack.Ric), max_abs(rhs), 1e-30})});
        const double lhs_scal = pack.Scal / two_h;
        const double rhs_scal = 8.0 * (n + 2.0) * def.tr_M;
        out.push_back({"qcwric_scal", std::abs(lhs_scal - rhs_scal),
                       std::max({std::abs(lhs_scal), std::abs(rhs_scal), 1e-30})});
    }
    // Yamabe transformation law vs traced scalar curvature
    out.push_back({"pyam", std::abs(def.scal_bar - pack.Scal),
                   std::max({std::abs(def.scal_bar), std::abs(pack.Scal), 1e-30})});

    // L-tensor, both routes
    const LTensors lt = l_tensor(pack, split);
    out.push_back({"lll_routes", lt.route_gap, std::max(max_abs(lt.L), 1e-30)});
    out.push_back({"l0_tracefree", std::abs(signed_trace(lt.L0, def.deformed)),
                   std::max(max_abs(lt.L0), 1e-30)});
    // M_sym agrees with the deformed Schouten-type tensor (flat base: L = 0)
    out.push_back({"mm_msym_lbar", max_abs(Msym - lt.L),
                   std::max({max_abs(Msym), max_abs(lt.L), 1e-30})});

    // torsion trace formulas
    out.push_back(check_ricci_formula(pack, split));
    out.push_back(check_ricciformf(pack, split));
    out.push_back(check_riccitau(pack, split));
    out.push_back(check_riccizeta(pack, split));
    out.push_back(check_zamiana(pack, split));
    out.push_back(check_rjr(pack));
    out.push_back(check_comp1(pack, split));
    for (const auto& c : check_ricis(pack, lt)) out.push_back(c);

    // divergence identity (third-order jets, exact)
    {
        const DivergenceData dv = divergence_data(h, def, jp);
        DivData dd;
        dd.div_tau = dv.div_tau;
        dd.div_mu = dv.div_mu;
        dd.dscal = dv.dscal;
        out.push_back(check_div(dd, n));
    }

    // conformal curvature: PWR, trace-freeness, [-1] part, both W routes
    const Tensor4 PWR = pwr_tensor(pack, lt.L, lt.tr_L);
    for (const auto& c : check_pwr_tracefree(PWR, def.deformed)) out.push_back(c);
    const FirstPairParts parts = first_pair_project(PWR, def.deformed);
    const double pwr_scale = std::max(
        {max_abs(pack.R), max_abs(kulkarni_nomizu(def.deformed.g, lt.L)), 1e-30});
    out.push_back({"main0_pwr_minus1", max_abs(parts.part1m), std::max(pwr_scale, 1.0)});

    const Tensor4 Wexp = wpqc_explicit(pack, split);
    const double wscale = wpqc_summand_scale(pack, split);
    out.push_back({"wpqc_projector", max_abs(parts.part3), wscale});
    out.push_back({"wpqc_explicit", max_abs(Wexp), wscale});
    out.push_back({"wpqc_routes", max_abs(parts.part3 - Wexp), wscale});
    out.push_back({"pwr_completeness", max_abs(parts.part3 + parts.part1m - PWR),
                   std::max(max_abs(PWR), 1.0)});

    const FlatnessVerdict verdict = flatness_verdict(parts.part3, pack.R, 1e-7);
    out.push_back({"flatness_verdict", verdict.flat ? 0.0 : 1.0, 1.0});

    return out;
}

} // namespace pqc
