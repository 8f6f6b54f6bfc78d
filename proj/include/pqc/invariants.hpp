#pragma once

#include <array>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "pqc/errors.hpp"
#include "pqc/tensor.hpp"
#include "pqc/tensor_core.hpp"

namespace pqc {

// Horizontal curvature with all Ricci-type traces, signed contractions via
// the frame metric inverse:
//   Ric(X,Y) = R(e_a, X, Y, e_a)
//   4n rho_s(A,B)    = R(A, B, e_a, I_s e_a)
//   4n varrho_s(A,B) = R(e_a, I_s e_a, A, B)
//   4n zeta_s(A,B)   = R(e_a, A, B, I_s e_a)
struct CurvaturePack {
    int n = 0;
    PqcFrameData frame;
    Tensor4 R;
    Tensor2 Ric;
    double Scal = 0.0;
    std::array<Tensor2, 3> rho;
    std::array<Tensor2, 3> varrho;
    std::array<Tensor2, 3> zeta;
    std::map<std::string, double> self_residuals;
};

inline CurvaturePack ricci_traces(const Tensor4& R, const PqcFrameData& frame) {
    const int d = frame.dim;
    CurvaturePack p;
    p.n = frame.n;
    p.frame = frame;
    p.R = R;
    p.Ric = Tensor2(d);
    for (int s = 0; s < 3; ++s) {
        p.rho[s] = Tensor2(d);
        p.varrho[s] = Tensor2(d);
        p.zeta[s] = Tensor2(d);
    }

    double anti_res = 0.0;
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b)
            for (int c = 0; c < d; ++c)
                for (int e = 0; e < d; ++e)
                    anti_res = std::max(anti_res, std::abs(R(a, b, c, e) + R(a, b, e, c)));
    p.self_residuals["last_pair_antisymmetry"] = anti_res;

    for (int X = 0; X < d; ++X)
        for (int Y = 0; Y < d; ++Y) {
            double acc = 0.0;
            for (int a = 0; a < d; ++a)
                for (int b = 0; b < d; ++b) acc += frame.ginv(a, b) * R(a, X, Y, b);
            p.Ric(X, Y) = acc;
        }
    p.Scal = signed_trace(p.Ric, frame);

    const double inv4n = 1.0 / (4.0 * frame.n);
    for (int s = 0; s < 3; ++s) {
        // I_s e_b expanded through columns of I_s
        for (int A = 0; A < d; ++A)
            for (int B = 0; B < d; ++B) {
                double r = 0.0, vr = 0.0, zt = 0.0;
                for (int a = 0; a < d; ++a)
                    for (int b = 0; b < d; ++b) {
                        const double w = frame.ginv(a, b);
                        if (w == 0.0) continue;
                        for (int c = 0; c < d; ++c) {
                            const double ic = frame.I[s](c, b);
                            if (ic == 0.0) continue;
                            r += w * ic * R(A, B, a, c);
                            vr += w * ic * R(a, c, A, B);
                            zt += w * ic * R(a, A, B, c);
                        }
                    }
                p.rho[s](A, B) = inv4n * r;
                p.varrho[s](A, B) = inv4n * vr;
                p.zeta[s](A, B) = inv4n * zt;
            }
    }

    // symmetry self-checks from the structure theory
    p.self_residuals["ric_symmetry"] = max_abs(antisymmetric_part(p.Ric));
    double zs = 0.0, r11 = 0.0, v11 = 0.0, rsym = 0.0, vsym = 0.0;
    for (int s = 0; s < 3; ++s) {
        const Tensor2 zI = right_apply(p.zeta[s], frame.I[s]);
        zs = std::max(zs, max_abs(antisymmetric_part(zI)));
        const Tensor2 rI = right_apply(p.rho[s], frame.I[s]);
        const Tensor2 vI = right_apply(p.varrho[s], frame.I[s]);
        rsym = std::max(rsym, max_abs(antisymmetric_part(rI)));
        vsym = std::max(vsym, max_abs(antisymmetric_part(vI)));
        // (1,1) with respect to I_s: A(I_s X, I_s Y) = -eps_s A(X, Y)
        r11 = std::max(r11, max_abs(both_apply(p.rho[s], frame.I[s], frame.I[s]) +
                                    eps_sign(s) * p.rho[s]));
        v11 = std::max(v11, max_abs(both_apply(p.varrho[s], frame.I[s], frame.I[s]) +
                                    eps_sign(s) * p.varrho[s]));
    }
    p.self_residuals["zeta_pair_symmetry"] = zs;
    p.self_residuals["rho_pair_symmetry"] = rsym;
    p.self_residuals["varrho_pair_symmetry"] = vsym;
    p.self_residuals["rho_11_property"] = r11;
    p.self_residuals["varrho_11_property"] = v11;
    return p;
}

// tau / mu recovered from the three torsion-endomorphism bilinear forms
// T(xi_s, ., .):
//   tau = - sum_s eps_s T0(xi_s, I_s ., .)   (symmetric part T0)
//   mu  =   eps_s Ta(xi_s, I_s ., .)         (s-independent; averaged)
struct TorsionSplit {
    Tensor2 tau;
    Tensor2 mu;
    double mu_spread = 0.0;      // max deviation among the three s-candidates
    double tau_asymmetry = 0.0;  // asymmetry removed from the tau formula
};

inline TorsionSplit torsion_split(const std::array<Tensor2, 3>& forms, const PqcFrameData& f,
                                  double tol = 1e-6) {
    const int d = f.dim;
    TorsionSplit out;
    Tensor2 tau_raw(d);
    for (int s = 0; s < 3; ++s) {
        const Tensor2 t0 = symmetric_part(forms[s]);
        tau_raw -= eps_sign(s) * left_apply(t0, f.I[s]);
    }
    out.tau_asymmetry = max_abs(antisymmetric_part(tau_raw));
    out.tau = symmetric_part(tau_raw);

    std::array<Tensor2, 3> cand;
    for (int s = 0; s < 3; ++s) {
        const Tensor2 ta = antisymmetric_part(forms[s]);
        cand[s] = eps_sign(s) * left_apply(ta, f.I[s]);
    }
    Tensor2 mu = (1.0 / 3.0) * (cand[0] + cand[1] + cand[2]);
    double spread = 0.0;
    for (int s = 0; s < 3; ++s) spread = std::max(spread, max_abs(cand[s] - mu));
    out.mu = mu;
    out.mu_spread = spread;
    const double scale = std::max(1.0, max_abs(mu));
    if (spread > tol * scale)
        throw InconsistentTorsion("torsion split: mu candidates disagree beyond tolerance");
    return out;
}

// Torsion-endomorphism form rebuilt from (tau, mu):
// T(xi_i, X, Y) = -1/4 [ tau(I_i X, Y) + tau(X, I_i Y) ] + mu(I_i X, Y).
inline Tensor2 torsion_form_from_split(const Tensor2& tau, const Tensor2& mu,
                                       const PqcFrameData& f, int i) {
    return -0.25 * (left_apply(tau, f.I[i]) + right_apply(tau, f.I[i])) + left_apply(mu, f.I[i]);
}

struct LTensors {
    Tensor2 L;
    Tensor2 L0;
    double tr_L = 0.0;
    double route_gap = 0.0; // torsion route vs Ricci-decomposition route
};

// L = 1/2 tau + mu + Scal/(32 n (n+2)) g, cross-checked against
// L = Ric_[-1]/(4(n+1)) + Ric_[3][0]/(2(2n+5)) + Scal/(32n(n+2)) g.
inline LTensors l_tensor(const CurvaturePack& pack, const TorsionSplit& split) {
    const PqcFrameData& f = pack.frame;
    const double n = f.n;
    LTensors out;
    const double scal_coef = pack.Scal / (32.0 * n * (n + 2.0));
    out.L = 0.5 * split.tau + split.mu + scal_coef * f.g;
    out.L0 = 0.5 * split.tau + split.mu;
    out.tr_L = signed_trace(out.L, f);

    const CasimirParts ric_parts = casimir_project(pack.Ric, f);
    const Tensor2 ric3_0 = ric_parts.part3 - (pack.Scal / (4.0 * n)) * f.g;
    const Tensor2 alt = (1.0 / (4.0 * (n + 1.0))) * ric_parts.part1m +
                        (1.0 / (2.0 * (2.0 * n + 5.0))) * ric3_0 + scal_coef * f.g;
    out.route_gap = max_abs(out.L - alt);
    return out;
}

// PWR = R + g^L - sum_s eps_s omega_s^(I_s L)
//   + 1/2 sum_cyc eps_i omega_i(X,Y)[L(Z,I_iV) - L(I_iZ,V) - eps_i L(I_jZ,I_kV) + eps_i L(I_kZ,I_jV)]
//   + sum_s eps_s omega_s(Z,V)[L(X,I_sY) - L(I_sX,Y)]
//   - (tr L / 2n) sum_s eps_s omega_s(X,Y) omega_s(Z,V),
// with ^ the Kulkarni-Nomizu product and (I_s L)(X,Y) = -L(X, I_s Y).
inline Tensor4 pwr_tensor(const CurvaturePack& pack, const Tensor2& L, double tr_L) {
    const PqcFrameData& f = pack.frame;
    const int d = f.dim;

    Tensor4 out = pack.R + kulkarni_nomizu(f.g, L);
    for (int s = 0; s < 3; ++s) {
        const Tensor2 IsL = -1.0 * right_apply(L, f.I[s]);
        out -= eps_sign(s) * kulkarni_nomizu(f.omega[s], IsL);
    }
    std::array<Tensor2, 3> br;
    for (int i = 0; i < 3; ++i) {
        auto [j, k] = cyclic(i);
        br[i] = right_apply(L, f.I[i]) - left_apply(L, f.I[i]) -
                eps_sign(i) * both_apply(L, f.I[j], f.I[k]) +
                eps_sign(i) * both_apply(L, f.I[k], f.I[j]);
    }
    std::array<Tensor2, 3> ns;
    for (int s = 0; s < 3; ++s) {
        const Tensor2 t = right_apply(L, f.I[s]);
        ns[s] = t - transpose(t);
    }
    for (int x = 0; x < d; ++x)
        for (int y = 0; y < d; ++y)
            for (int z = 0; z < d; ++z)
                for (int v = 0; v < d; ++v) {
                    double acc = 0.0;
                    for (int i = 0; i < 3; ++i)
                        acc += 0.5 * eps_sign(i) * f.omega[i](x, y) * br[i](z, v);
                    for (int s = 0; s < 3; ++s) {
                        acc += eps_sign(s) * f.omega[s](z, v) * ns[s](x, y);
                        acc -= tr_L / (2.0 * f.n) * eps_sign(s) * f.omega[s](x, y) * f.omega[s](z, v);
                    }
                    out(x, y, z, v) += acc;
                }
    return out;
}

// Equivalent assembly through L0, tau, mu and Scal (used as a second-formula
// oracle on synthetic inputs).
inline Tensor4 pwr_tensor_alt(const CurvaturePack& pack, const Tensor2& L0, const Tensor2& tau,
                              const Tensor2& mu, double scal) {
    const PqcFrameData& f = pack.frame;
    const int d = f.dim;
    const double n = f.n;

    Tensor4 out = pack.R + kulkarni_nomizu(f.g, L0);
    for (int s = 0; s < 3; ++s) {
        const Tensor2 IsL0 = -1.0 * right_apply(L0, f.I[s]);
        out -= eps_sign(s) * kulkarni_nomizu(f.omega[s], IsL0);
    }
    std::array<Tensor2, 3> tau_br, tau_mu_br;
    for (int s = 0; s < 3; ++s) {
        const Tensor2 tr = right_apply(tau, f.I[s]);
        const Tensor2 tl = left_apply(tau, f.I[s]);
        tau_br[s] = tr - tl;
        tau_mu_br[s] = tr - tl + 4.0 * right_apply(mu, f.I[s]);
    }
    const double sc = scal / (32.0 * n * (n + 2.0));
    const Tensor4 gg = kulkarni_nomizu(f.g, f.g);
    std::array<Tensor4, 3> ww;
    for (int s = 0; s < 3; ++s) ww[s] = kulkarni_nomizu(f.omega[s], f.omega[s]);
    for (int x = 0; x < d; ++x)
        for (int y = 0; y < d; ++y)
            for (int z = 0; z < d; ++z)
                for (int v = 0; v < d; ++v) {
                    double acc = 0.0;
                    for (int s = 0; s < 3; ++s) {
                        acc += 0.5 * eps_sign(s) *
                               (f.omega[s](x, y) * tau_br[s](z, v) +
                                f.omega[s](z, v) * tau_mu_br[s](x, y));
                        acc -= sc * eps_sign(s) *
                               (ww[s](x, y, z, v) + 4.0 * f.omega[s](x, y) * f.omega[s](z, v));
                    }
                    acc += sc * gg(x, y, z, v);
                    out(x, y, z, v) += acc;
                }
    return out;
}

inline Tensor4 wpqc_tensor(const Tensor4& PWR, const PqcFrameData& f) {
    return first_pair_project(PWR, f).part3;
}

// Direct evaluation of the [3]-part from curvature, torsion and Scal:
// 1/4 [ R - sum_s eps_s R(I_s., I_s., ., .) ]
//   + 1/2 sum_s eps_s omega_s(Z,V) [ tau(X, I_s Y) - tau(I_s X, Y) ]
//   + Scal/(32n(n+2)) [ g^g - sum_s eps_s omega_s^omega_s ]
//   + g^mu - sum_s eps_s omega_s^(I_s mu).
inline Tensor4 wpqc_explicit(const CurvaturePack& pack, const TorsionSplit& split) {
    const PqcFrameData& f = pack.frame;
    const int d = f.dim;
    const double n = f.n;

    Tensor4 out = 0.25 * (pack.R - first_pair_casimir_sum(pack.R, f));
    std::array<Tensor2, 3> tbr;
    for (int s = 0; s < 3; ++s)
        tbr[s] = right_apply(split.tau, f.I[s]) - left_apply(split.tau, f.I[s]);
    const double sc = pack.Scal / (32.0 * n * (n + 2.0));
    out += sc * kulkarni_nomizu(f.g, f.g);
    for (int s = 0; s < 3; ++s)
        out -= sc * eps_sign(s) * kulkarni_nomizu(f.omega[s], f.omega[s]);
    out += kulkarni_nomizu(f.g, split.mu);
    for (int s = 0; s < 3; ++s) {
        const Tensor2 Ismu = -1.0 * right_apply(split.mu, f.I[s]);
        out -= eps_sign(s) * kulkarni_nomizu(f.omega[s], Ismu);
    }
    for (int x = 0; x < d; ++x)
        for (int y = 0; y < d; ++y)
            for (int z = 0; z < d; ++z)
                for (int v = 0; v < d; ++v) {
                    double acc = 0.0;
                    for (int s = 0; s < 3; ++s)
                        acc += 0.5 * eps_sign(s) * f.omega[s](z, v) * tbr[s](x, y);
                    out(x, y, z, v) += acc;
                }
    return out;
}

// Largest summand magnitude of the explicit wpqc assembly; the natural scale
// for the cancellation in the flatness test.
inline double wpqc_summand_scale(const CurvaturePack& pack, const TorsionSplit& split) {
    const PqcFrameData& f = pack.frame;
    const double n = f.n;
    double scale = 0.25 * max_abs(pack.R);
    scale = std::max(scale, 0.25 * max_abs(first_pair_casimir_sum(pack.R, f)));
    double tb = 0.0;
    for (int s = 0; s < 3; ++s)
        tb = std::max(tb, max_abs(right_apply(split.tau, f.I[s]) - left_apply(split.tau, f.I[s])));
    scale = std::max(scale, 0.5 * tb * max_abs(f.omega[0]));
    const double sc = std::abs(pack.Scal) / (32.0 * n * (n + 2.0));
    scale = std::max(scale, sc * max_abs(kulkarni_nomizu(f.g, f.g)));
    scale = std::max(scale, max_abs(kulkarni_nomizu(f.g, split.mu)));
    return std::max(scale, 1e-30);
}

struct IdentityCheck {
    std::string name;
    double residual = 0.0;
    double scale = 1.0;

    double relative() const { return residual / std::max(scale, 1.0); }
};

// flatness verdict: max |W| < tol * scale with scale = max(1, |R|_inf)
struct FlatnessVerdict {
    bool flat = false;
    double max_norm = 0.0;
    double scale = 1.0;
};

inline FlatnessVerdict flatness_verdict(const Tensor4& W, const Tensor4& R, double tol) {
    FlatnessVerdict v;
    v.max_norm = max_abs(W);
    v.scale = std::max(1.0, max_abs(R));
    v.flat = v.max_norm < tol * v.scale;
    return v;
}

// ---- identity evaluators -------------------------------------------------

// Ric = Scal/(4n) g + (2n+2) tau + (4n+10) mu
inline IdentityCheck check_ricci_formula(const CurvaturePack& p, const TorsionSplit& sp) {
    const PqcFrameData& f = p.frame;
    const double n = f.n;
    const Tensor2 rhs = (p.Scal / (4.0 * n)) * f.g + (2.0 * n + 2.0) * sp.tau +
                        (4.0 * n + 10.0) * sp.mu;
    const double scale = std::max({max_abs(p.Ric), max_abs(rhs), 1e-30});
    return {"ricci", max_abs(p.Ric - rhs), scale};
}

// rho_s(X, I_s Y) = eps_s Scal/(8n(n+2)) g + 1/2 [eps_s tau - tau(I_s., I_s.)] + 2 eps_s mu
inline IdentityCheck check_ricciformf(const CurvaturePack& p, const TorsionSplit& sp) {
    const PqcFrameData& f = p.frame;
    const double n = f.n;
    double res = 0.0, scale = 1e-30;
    for (int s = 0; s < 3; ++s) {
        const Tensor2 lhs = right_apply(p.rho[s], f.I[s]);
        const Tensor2 rhs = (eps_sign(s) * p.Scal / (8.0 * n * (n + 2.0))) * f.g +
                            0.5 * (eps_sign(s) * sp.tau - both_apply(sp.tau, f.I[s], f.I[s])) +
                            (2.0 * eps_sign(s)) * sp.mu;
        res = std::max(res, max_abs(lhs - rhs));
        scale = std::max({scale, max_abs(lhs), max_abs(rhs)});
    }
    return {"ricciformf", res, scale};
}

// varrho_s(X, I_s Y) = eps_s Scal/(8n(n+2)) g + (n+2)/(2n) [eps_s tau - tau(I_s., I_s.)]
inline IdentityCheck check_riccitau(const CurvaturePack& p, const TorsionSplit& sp) {
    const PqcFrameData& f = p.frame;
    const double n = f.n;
    double res = 0.0, scale = 1e-30;
    for (int s = 0; s < 3; ++s) {
        const Tensor2 lhs = right_apply(p.varrho[s], f.I[s]);
        const Tensor2 rhs = (eps_sign(s) * p.Scal / (8.0 * n * (n + 2.0))) * f.g +
                            ((n + 2.0) / (2.0 * n)) *
                                (eps_sign(s) * sp.tau - both_apply(sp.tau, f.I[s], f.I[s]));
        res = std::max(res, max_abs(lhs - rhs));
        scale = std::max({scale, max_abs(lhs), max_abs(rhs)});
    }
    return {"riccitau", res, scale};
}

// eps_s zeta_s(X, I_s Y) = -Scal/(16n(n+2)) g - (2n+1)/(4n) tau
//                          + eps_s/(4n) tau(I_s., I_s.) - (2n+1)/(2n) mu
inline IdentityCheck check_riccizeta(const CurvaturePack& p, const TorsionSplit& sp) {
    const PqcFrameData& f = p.frame;
    const double n = f.n;
    double res = 0.0, scale = 1e-30;
    for (int s = 0; s < 3; ++s) {
        const Tensor2 lhs = eps_sign(s) * right_apply(p.zeta[s], f.I[s]);
        const Tensor2 rhs = (-p.Scal / (16.0 * n * (n + 2.0))) * f.g -
                            ((2.0 * n + 1.0) / (4.0 * n)) * sp.tau +
                            (eps_sign(s) / (4.0 * n)) * both_apply(sp.tau, f.I[s], f.I[s]) -
                            ((2.0 * n + 1.0) / (2.0 * n)) * sp.mu;
        res = std::max(res, max_abs(lhs - rhs));
        scale = std::max({scale, max_abs(lhs), max_abs(rhs)});
    }
    return {"riccizeta", res, scale};
}

// pair-swap identity for the curvature
inline IdentityCheck check_zamiana(const CurvaturePack& p, const TorsionSplit& sp) {
    const PqcFrameData& f = p.frame;
    const int d = f.dim;
    std::array<Tensor2, 3> muI, tauL, tauR;
    for (int s = 0; s < 3; ++s) {
        muI[s] = left_apply(sp.mu, f.I[s]);
        tauL[s] = left_apply(sp.tau, f.I[s]);
        tauR[s] = right_apply(sp.tau, f.I[s]);
    }
    double res = 0.0, scale = 1e-30;
    for (int x = 0; x < d; ++x)
        for (int y = 0; y < d; ++y)
            for (int z = 0; z < d; ++z)
                for (int v = 0; v < d; ++v) {
                    const double lhs = p.R(x, y, z, v) - p.R(z, v, x, y);
                    double rhs = 0.0;
                    for (int s = 0; s < 3; ++s) {
                        const double es = eps_sign(s);
                        rhs += -2.0 * es * (f.omega[s](x, y) * muI[s](z, v) -
                                            f.omega[s](z, v) * muI[s](x, y));
                        rhs += 0.5 * es *
                               (f.omega[s](y, z) * (tauL[s](x, v) + tauR[s](x, v)) +
                                f.omega[s](x, v) * (tauL[s](z, y) + tauR[s](z, y)));
                        rhs -= 0.5 * es *
                               (f.omega[s](x, z) * (tauL[s](y, v) + tauR[s](y, v)) +
                                f.omega[s](y, v) * (tauL[s](z, x) + tauR[s](z, x)));
                    }
                    res = std::max(res, std::abs(lhs - rhs));
                    scale = std::max({scale, std::abs(lhs), std::abs(rhs)});
                }
    return {"zamiana", res, scale};
}

// eps_i R(A,B,I_iX,I_iY) + R(A,B,X,Y) = -2 eps_j rho_j(A,B) omega_j(X,Y)
//                                       -2 eps_k rho_k(A,B) omega_k(X,Y)
inline IdentityCheck check_rjr(const CurvaturePack& p) {
    const PqcFrameData& f = p.frame;
    const int d = f.dim;
    double res = 0.0, scale = 1e-30;
    for (int i = 0; i < 3; ++i) {
        auto [j, k] = cyclic(i);
        // R(A,B,I_iX,I_iY) via column expansion
        Tensor4 RII(d);
        for (int X = 0; X < d; ++X)
            for (int xp = 0; xp < d; ++xp) {
                const double cx = f.I[i](xp, X);
                if (cx == 0.0) continue;
                for (int Y = 0; Y < d; ++Y)
                    for (int yp = 0; yp < d; ++yp) {
                        const double c = cx * f.I[i](yp, Y);
                        if (c == 0.0) continue;
                        for (int A = 0; A < d; ++A)
                            for (int B = 0; B < d; ++B) RII(A, B, X, Y) += c * p.R(A, B, xp, yp);
                    }
            }
        for (int A = 0; A < d; ++A)
            for (int B = 0; B < d; ++B)
                for (int X = 0; X < d; ++X)
                    for (int Y = 0; Y < d; ++Y) {
                        const double lhs = eps_sign(i) * RII(A, B, X, Y) + p.R(A, B, X, Y);
                        const double rhs = -2.0 * eps_sign(j) * p.rho[j](A, B) * f.omega[j](X, Y) -
                                           2.0 * eps_sign(k) * p.rho[k](A, B) * f.omega[k](X, Y);
                        res = std::max(res, std::abs(lhs - rhs));
                        scale = std::max({scale, std::abs(lhs), std::abs(rhs)});
                    }
    }
    return {"rjr", res, scale};
}

// [3]-component identity for the first pair of arguments
inline IdentityCheck check_comp1(const CurvaturePack& p, const TorsionSplit& sp) {
    const PqcFrameData& f = p.frame;
    const int d = f.dim;
    const double n = f.n;
    const Tensor4 lhs4 = 3.0 * p.R + first_pair_casimir_sum(p.R, f);

    std::array<Tensor2, 3> tauR, tauL;
    for (int s = 0; s < 3; ++s) {
        tauR[s] = right_apply(sp.tau, f.I[s]);
        tauL[s] = left_apply(sp.tau, f.I[s]);
    }
    std::array<Tensor2, 3> muI;
    for (int s = 0; s < 3; ++s) muI[s] = left_apply(sp.mu, f.I[s]);

    double res = 0.0, scale = 1e-30;
    for (int x = 0; x < d; ++x)
        for (int y = 0; y < d; ++y)
            for (int z = 0; z < d; ++z)
                for (int v = 0; v < d; ++v) {
                    double rhs = 2.0 * (f.g(y, z) * sp.tau(x, v) + f.g(x, v) * sp.tau(z, y)) -
                                 2.0 * (f.g(z, x) * sp.tau(y, v) + f.g(v, y) * sp.tau(z, x));
                    for (int s = 0; s < 3; ++s) {
                        const double es = eps_sign(s);
                        rhs += 2.0 * es * (f.omega[s](y, z) * tauR[s](x, v) +
                                           f.omega[s](x, v) * tauR[s](y, z));
                        rhs -= 2.0 * es * (f.omega[s](x, z) * tauR[s](y, v) +
                                           f.omega[s](y, v) * tauR[s](x, z));
                        rhs -= 2.0 * es * (f.omega[s](x, y) * (tauR[s](z, v) - tauL[s](z, v)) -
                                           4.0 * f.omega[s](z, v) * muI[s](x, y));
                        rhs += p.Scal / (2.0 * n * (n + 2.0)) * es * f.omega[s](x, y) * f.omega[s](z, v);
                    }
                    res = std::max(res, std::abs(lhs4(x, y, z, v) - rhs));
                    scale = std::max({scale, std::abs(lhs4(x, y, z, v)), std::abs(rhs)});
                }
    return {"comp1", res, scale};
}

// trace formulas for Ric, rho, varrho, zeta recovered from L alone
inline std::vector<IdentityCheck> check_ricis(const CurvaturePack& p, const LTensors& lt) {
    const PqcFrameData& f = p.frame;
    const double n = f.n;
    const Tensor2& L = lt.L;
    const double trL = lt.tr_L;
    std::vector<IdentityCheck> out;

    {
        Tensor2 rhs = ((2.0 * n + 3.0) / (2.0 * n) * trL) * f.g + ((8.0 * n + 11.0) / 2.0) * L;
        for (int s = 0; s < 3; ++s) rhs -= 1.5 * eps_sign(s) * both_apply(L, f.I[s], f.I[s]);
        out.push_back({"ricis_ric", max_abs(p.Ric - rhs),
                       std::max({max_abs(p.Ric), max_abs(rhs), 1e-30})});
    }
    double res_rho = 0.0, sc_rho = 1e-30;
    double res_vrr = 0.0, sc_vrr = 1e-30;
    double res_zet = 0.0, sc_zet = 1e-30;
    for (int i = 0; i < 3; ++i) {
        auto [j, k] = cyclic(i);
        const Tensor2 LXIy = right_apply(L, f.I[i]);
        const Tensor2 LIxY = left_apply(L, f.I[i]);
        const Tensor2 Lkj = both_apply(L, f.I[k], f.I[j]);
        const Tensor2 Ljk = both_apply(L, f.I[j], f.I[k]);

        const Tensor2 rho_rhs = LXIy - LIxY - (trL / (2.0 * n)) * f.omega[i];
        res_rho = std::max(res_rho, max_abs(p.rho[i] - rho_rhs));
        sc_rho = std::max({sc_rho, max_abs(p.rho[i]), max_abs(rho_rhs)});

        const Tensor2 vrr_rhs = (-trL / n) * f.omega[i] -
                                ((n + 2.0) / (2.0 * n)) *
                                    (LIxY - LXIy - eps_sign(i) * Lkj + eps_sign(i) * Ljk);
        res_vrr = std::max(res_vrr, max_abs(p.varrho[i] - vrr_rhs));
        sc_vrr = std::max({sc_vrr, max_abs(p.varrho[i]), max_abs(vrr_rhs)});

        const Tensor2 zet_rhs = ((2.0 * n - 1.0) / (8.0 * n * n) * trL) * f.omega[i] +
                                (3.0 / (8.0 * n)) * LIxY - ((8.0 * n + 3.0) / (8.0 * n)) * LXIy -
                                (eps_sign(i) / (8.0 * n)) * (Lkj - Ljk);
        res_zet = std::max(res_zet, max_abs(p.zeta[i] - zet_rhs));
        sc_zet = std::max({sc_zet, max_abs(p.zeta[i]), max_abs(zet_rhs)});
    }
    out.push_back({"ricis_rho", res_rho, sc_rho});
    out.push_back({"ricis_varrho", res_vrr, sc_vrr});
    out.push_back({"ricis_zeta", res_zet, sc_zet});
    return out;
}

// complete trace-freeness of PWR
inline std::vector<IdentityCheck> check_pwr_tracefree(const Tensor4& PWR, const PqcFrameData& f) {
    const CurvaturePack q = ricci_traces(PWR, f);
    const double scale = std::max(1.0, max_abs(PWR));
    std::vector<IdentityCheck> out;
    out.push_back({"trfree_ric", max_abs(q.Ric), scale});
    double r = 0.0, vr = 0.0, zt = 0.0;
    for (int s = 0; s < 3; ++s) {
        r = std::max(r, max_abs(q.rho[s]));
        vr = std::max(vr, max_abs(q.varrho[s]));
        zt = std::max(zt, max_abs(q.zeta[s]));
    }
    out.push_back({"trfree_rho", r, scale});
    out.push_back({"trfree_varrho", vr, scale});
    out.push_back({"trfree_zeta", zt, scale});
    return out;
}

// Exact divergence data of the deformed structure, supplied by the conformal
// engine (third-order jets): signed divergences of tau and mu and the frame
// differential of the scalar curvature.
struct DivData {
    std::vector<double> div_tau;
    std::vector<double> div_mu;
    std::vector<double> dscal;
};

// (n-1) div tau(X) + 2(n+2) div mu(X) - (n-1)(2n+1)/(8n(n+2)) dScal(X) = 0
inline IdentityCheck check_div(const DivData& dd, int n) {
    const double c = (n - 1.0) * (2.0 * n + 1.0) / (8.0 * n * (n + 2.0));
    double res = 0.0, scale = 1e-30;
    for (size_t i = 0; i < dd.div_tau.size(); ++i) {
        const double t1 = (n - 1.0) * dd.div_tau[i];
        const double t2 = 2.0 * (n + 2.0) * dd.div_mu[i];
        const double t3 = -c * dd.dscal[i];
        res = std::max(res, std::abs(t1 + t2 + t3));
        scale = std::max({scale, std::abs(t1), std::abs(t2), std::abs(t3)});
    }
    return {"div", res, scale};
}

} // namespace pqc
