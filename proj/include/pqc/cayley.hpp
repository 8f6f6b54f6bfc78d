#pragma once

#include <cmath>
#include <vector>

#include "pqc/errors.hpp"
#include "pqc/paraquat.hpp"

namespace pqc {

// Point of the pseudo-sphere pS^{4n+3}: sum_a norm2(q_a) + norm2(p) = 1.
struct SpherePoint {
    std::vector<ParaQuaternion> q;
    ParaQuaternion p;

    double constraint_residual() const {
        double s = norm2(p) - 1.0;
        for (const auto& qa : q) s += norm2(qa);
        return std::abs(s);
    }
};

// Perturbation satisfying the linearized constraint Re(sum conj(q_a) dq_a
// + conj(p) dp) = 0.
struct TangentVector {
    std::vector<ParaQuaternion> dq;
    ParaQuaternion dp;
};

inline double tangency_residual(const SpherePoint& pt, const TangentVector& v) {
    ParaQuaternion acc = mul(conj(pt.p), v.dp);
    for (size_t a = 0; a < pt.q.size(); ++a) acc = acc + mul(conj(pt.q[a]), v.dq[a]);
    return std::abs(re(acc));
}

// Projects an arbitrary perturbation onto the tangent space of the
// constraint surface (used by the samplers).
inline TangentVector project_tangent(const SpherePoint& pt, const TangentVector& raw) {
    // gradient direction of the constraint is (q, p) itself under the signed
    // pairing; remove the component along it
    double num = re(mul(conj(pt.p), raw.dp));
    double den = norm2(pt.p);
    for (size_t a = 0; a < pt.q.size(); ++a) {
        num += re(mul(conj(pt.q[a]), raw.dq[a]));
        den += norm2(pt.q[a]);
    }
    if (std::abs(den) < 1e-12) throw NotTangent("degenerate point for tangent projection");
    const double lam = num / den;
    TangentVector v = raw;
    v.dp = v.dp - lam * pt.p;
    for (size_t a = 0; a < v.dq.size(); ++a) v.dq[a] = v.dq[a] - lam * pt.q[a];
    return v;
}

// Image of the transform on the Sigma model of the group: a pair (q', p')
// with Re(p') = -sum_a norm2(q'_a).
struct SigmaPoint {
    std::vector<ParaQuaternion> q;
    ParaQuaternion p;

    double embedding_residual() const {
        double s = re(p);
        for (const auto& qa : q) s += norm2(qa);
        return std::abs(s);
    }
};

inline double singular_locus_margin(const SpherePoint& pt) {
    return std::abs(norm2(pt.p - ParaQuaternion::one()));
}

// (q, p) -> (q' = (p-1)^{-1} q, p' = (p-1)^{-1}(p+1)); requires
// |norm2(p-1)| above threshold (outside the excluded locus).
inline SigmaPoint cayley_forward(const SpherePoint& pt) {
    const ParaQuaternion pm1 = pt.p - ParaQuaternion::one();
    if (std::abs(norm2(pm1)) <= zero_norm_threshold(pm1))
        throw OnSingularLocus("cayley_forward: norm2(p-1) vanishes");
    const ParaQuaternion ipm1 = inv(pm1);
    SigmaPoint out;
    out.q.resize(pt.q.size());
    for (size_t a = 0; a < pt.q.size(); ++a) out.q[a] = mul(ipm1, pt.q[a]);
    out.p = mul(ipm1, pt.p + ParaQuaternion::one());
    return out;
}

// q = 2(p'-1)^{-1} q', p = (p'-1)^{-1}(p'+1).
inline SpherePoint cayley_inverse(const SigmaPoint& im) {
    const ParaQuaternion pm1 = im.p - ParaQuaternion::one();
    if (std::abs(norm2(pm1)) <= zero_norm_threshold(pm1))
        throw OnSingularLocus("cayley_inverse: norm2(p'-1) vanishes");
    const ParaQuaternion ipm1 = inv(pm1);
    SpherePoint out;
    out.q.resize(im.q.size());
    for (size_t a = 0; a < im.q.size(); ++a) out.q[a] = 2.0 * mul(ipm1, im.q[a]);
    out.p = mul(ipm1, im.p + ParaQuaternion::one());
    return out;
}

// Contact form of the pseudo-sphere on a tangent vector:
// eta(v) = sum_a [dq_a conj(q_a) - q_a conj(dq_a)] + dp conj(p) - p conj(dp),
// purely imaginary.
inline ParaQuaternion eta_sphere_at(const SpherePoint& pt, const TangentVector& v,
                                    double tangent_tol = 1e-9) {
    double vscale = max_abs_coeff(v.dp);
    for (const auto& d : v.dq) vscale = std::max(vscale, max_abs_coeff(d));
    if (tangency_residual(pt, v) > tangent_tol * std::max(1.0, vscale))
        throw NotTangent("eta_sphere_at: vector violates the linearized constraint");
    ParaQuaternion acc = mul(v.dp, conj(pt.p)) - mul(pt.p, conj(v.dp));
    for (size_t a = 0; a < pt.q.size(); ++a)
        acc = acc + mul(v.dq[a], conj(pt.q[a])) - mul(pt.q[a], conj(v.dq[a]));
    return acc;
}

// Differential of the transform, exact from the rational closed forms:
//   dp' = -2 (p-1)^{-1} dp (p-1)^{-1}
//   dq' = (p-1)^{-1} [ dq - dp (p-1)^{-1} q ].
struct SigmaTangent {
    std::vector<ParaQuaternion> dq;
    ParaQuaternion dp;
};

inline SigmaTangent cayley_differential(const SpherePoint& pt, const TangentVector& v) {
    const ParaQuaternion pm1 = pt.p - ParaQuaternion::one();
    if (std::abs(norm2(pm1)) <= zero_norm_threshold(pm1))
        throw OnSingularLocus("cayley_differential: norm2(p-1) vanishes");
    const ParaQuaternion ipm1 = inv(pm1);
    SigmaTangent out;
    out.dp = -2.0 * mul(ipm1, mul(v.dp, ipm1));
    out.dq.resize(v.dq.size());
    for (size_t a = 0; a < v.dq.size(); ++a)
        out.dq[a] = mul(ipm1, v.dq[a] - mul(v.dp, mul(ipm1, pt.q[a])));
    return out;
}

// Group contact form on the Sigma model, the manifestly imaginary version:
// Theta = 1/4 (dp' - conj(dp')) + 1/2 sum_a (dq'_a conj(q'_a) - q'_a conj(dq'_a)).
inline ParaQuaternion theta_sigma_at(const SigmaPoint& pt, const SigmaTangent& v) {
    ParaQuaternion acc = 0.25 * (v.dp - conj(v.dp));
    for (size_t a = 0; a < pt.q.size(); ++a)
        acc = acc + 0.5 * (mul(v.dq[a], conj(pt.q[a])) - mul(pt.q[a], conj(v.dq[a])));
    return acc;
}

struct CayleyIdentityResult {
    double residual = 0.0; // max abs coefficient of LHS - RHS
    double scale = 0.0;    // max abs coefficient among LHS, RHS
};

// Square-root-free conformal-equivalence identity
//   2 norm2(p-1)^2 Theta(dC(v)) = (conj(p) - 1) eta(v) (p - 1),
// rational in the point and valid for either sign of norm2(p-1).
inline CayleyIdentityResult verify_cayley_identity(const SpherePoint& pt, const TangentVector& v) {
    const ParaQuaternion pm1 = pt.p - ParaQuaternion::one();
    const double N = norm2(pm1);
    if (std::abs(N) <= zero_norm_threshold(pm1))
        throw OnSingularLocus("verify_cayley_identity: norm2(p-1) vanishes");
    const SigmaPoint image = cayley_forward(pt);
    const SigmaTangent dv = cayley_differential(pt, v);
    const ParaQuaternion lhs = (2.0 * N * N) * theta_sigma_at(image, dv);
    const ParaQuaternion eta = eta_sphere_at(pt, v);
    const ParaQuaternion rhs = mul(conj(pt.p) - ParaQuaternion::one(), mul(eta, pm1));
    CayleyIdentityResult r;
    r.residual = max_abs_coeff(lhs - rhs);
    r.scale = std::max(max_abs_coeff(lhs), max_abs_coeff(rhs));
    return r;
}

} // namespace pqc
