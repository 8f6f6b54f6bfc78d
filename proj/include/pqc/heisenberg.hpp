#pragma once

#include <array>
#include <string>
#include <vector>

#include "pqc/jets.hpp"
#include "pqc/paraquat.hpp"
#include "pqc/tensor_core.hpp"

namespace pqc {

// Point of the group: n split-quaternion slots plus the imaginary part,
// stored as the flat coordinate vector (t^a, x^a, y^a, z^a)_a, (x, y, z).
struct ModelPoint {
    int n = 1;
    std::vector<double> coords;

    explicit ModelPoint(int n_) : n(n_), coords(static_cast<size_t>(num_coords(n_)), 0.0) {}

    ParaQuaternion q(int a) const {
        return {coords[4 * a], coords[4 * a + 1], coords[4 * a + 2], coords[4 * a + 3]};
    }
    void set_q(int a, const ParaQuaternion& p) {
        coords[4 * a] = p.t;
        coords[4 * a + 1] = p.x;
        coords[4 * a + 2] = p.y;
        coords[4 * a + 3] = p.z;
    }
    // Imaginary slot, components bound to (r3, r1, r2) like every chart point.
    ParaQuaternion omega_part() const {
        return {0.0, coords[4 * n], coords[4 * n + 1], coords[4 * n + 2]};
    }
    void set_omega(const ParaQuaternion& w) {
        coords[4 * n] = w.x;
        coords[4 * n + 1] = w.y;
        coords[4 * n + 2] = w.z;
    }
};

// (q_o, w_o) o (q, w) = (q_o + q, w_o + w + 2 Im(sum_a q_o^a conj(q^a))).
inline ModelPoint group_mul(const ModelPoint& p0, const ModelPoint& p) {
    if (p0.n != p.n) throw ValidationError("group_mul: dimension mismatch");
    ModelPoint r(p0.n);
    ParaQuaternion corr;
    for (int a = 0; a < p0.n; ++a) {
        r.set_q(a, p0.q(a) + p.q(a));
        corr = corr + mul(p0.q(a), conj(p.q(a)));
    }
    r.set_omega(p0.omega_part() + p.omega_part() + 2.0 * im(corr));
    return r;
}

inline ModelPoint group_inverse(const ModelPoint& p) {
    ModelPoint r(p.n);
    for (int a = 0; a < p.n; ++a) r.set_q(a, -p.q(a));
    r.set_omega(-1.0 * p.omega_part());
    return r;
}

// Contact forms as polynomial covector components over the coordinate basis.
//   Theta_3 = 1/2 dx - x^a dt^a + t^a dx^a - z^a dy^a + y^a dz^a
//   Theta_1 = 1/2 dy - y^a dt^a - z^a dx^a + t^a dy^a + x^a dz^a
//   Theta_2 = 1/2 dz - z^a dt^a + y^a dx^a - x^a dy^a + t^a dz^a
// Index s is 0-based: s=0 -> Theta_1, s=1 -> Theta_2, s=2 -> Theta_3.
inline std::vector<Poly> contact_form_coeffs(int n, int s) {
    const int nv = num_coords(n);
    const int vx = 4 * n, vy = 4 * n + 1, vz = 4 * n + 2;
    std::vector<Poly> th(static_cast<size_t>(nv), Poly(nv));
    auto C = [&](int i, double c) { return Poly::coordinate(nv, i, c); };
    for (int a = 0; a < n; ++a) {
        const int ta = 4 * a, xa = 4 * a + 1, ya = 4 * a + 2, za = 4 * a + 3;
        switch (s) {
            case 2: // Theta_3
                th[static_cast<size_t>(ta)] += C(xa, -1.0);
                th[static_cast<size_t>(xa)] += C(ta, 1.0);
                th[static_cast<size_t>(ya)] += C(za, -1.0);
                th[static_cast<size_t>(za)] += C(ya, 1.0);
                break;
            case 0: // Theta_1
                th[static_cast<size_t>(ta)] += C(ya, -1.0);
                th[static_cast<size_t>(xa)] += C(za, -1.0);
                th[static_cast<size_t>(ya)] += C(ta, 1.0);
                th[static_cast<size_t>(za)] += C(xa, 1.0);
                break;
            case 1: // Theta_2
                th[static_cast<size_t>(ta)] += C(za, -1.0);
                th[static_cast<size_t>(xa)] += C(ya, 1.0);
                th[static_cast<size_t>(ya)] += C(xa, -1.0);
                th[static_cast<size_t>(za)] += C(ta, 1.0);
                break;
            default: break;
        }
    }
    const int vert = (s == 0) ? vy : (s == 1) ? vz : vx;
    th[static_cast<size_t>(vert)] += Poly::constant(nv, 0.5);
    return th;
}

inline std::vector<double> contact_form_at(int n, int s, const std::vector<double>& pt) {
    const auto coeffs = contact_form_coeffs(n, s);
    std::vector<double> v(coeffs.size(), 0.0);
    for (size_t mu = 0; mu < coeffs.size(); ++mu) v[mu] = coeffs[mu].eval(pt);
    return v;
}

// Exterior derivative of a polynomial 1-form, returned as the coefficient
// polynomials c_{mu,nu} = d_mu eta_nu - d_nu eta_mu (mu < nu) of dx^mu ^ dx^nu.
inline std::vector<std::vector<Poly>> exterior_derivative(int n, const std::vector<Poly>& eta) {
    const int nv = num_coords(n);
    std::vector<std::vector<Poly>> d(static_cast<size_t>(nv),
                                     std::vector<Poly>(static_cast<size_t>(nv), Poly(nv)));
    for (int mu = 0; mu < nv; ++mu)
        for (int nu = 0; nu < nv; ++nu)
            d[static_cast<size_t>(mu)][static_cast<size_t>(nu)] =
                eta[static_cast<size_t>(nu)].partial(mu) - eta[static_cast<size_t>(mu)].partial(nu);
    return d;
}

// Evaluate a 2-form given by full antisymmetric coefficients on two
// polynomial-coefficient vector fields; result is a polynomial.
inline Poly two_form_on_fields(int n, const std::vector<std::vector<Poly>>& d,
                               const std::vector<Poly>& U, const std::vector<Poly>& V) {
    const int nv = num_coords(n);
    Poly r(nv);
    // d[mu][nu] holds the full antisymmetrized coefficient, so the pairing
    // is the plain double contraction sum_{mu,nu} d_{mu nu} U^mu V^nu.
    for (int mu = 0; mu < nv; ++mu)
        for (int nu = 0; nu < nv; ++nu) {
            if (U[static_cast<size_t>(mu)].is_zero() || V[static_cast<size_t>(nu)].is_zero()) continue;
            if (d[static_cast<size_t>(mu)][static_cast<size_t>(nu)].is_zero()) continue;
            r += d[static_cast<size_t>(mu)][static_cast<size_t>(nu)] *
                 (U[static_cast<size_t>(mu)] * V[static_cast<size_t>(nu)]);
        }
    return r;
}

// Commutator of two polynomial-coefficient fields, exact.
inline std::vector<Poly> commutator(int n, const std::vector<Poly>& U, const std::vector<Poly>& V) {
    const int nv = num_coords(n);
    std::vector<Poly> w(static_cast<size_t>(nv), Poly(nv));
    for (int mu = 0; mu < nv; ++mu) {
        Poly acc(nv);
        for (int nu = 0; nu < nv; ++nu) {
            if (!U[static_cast<size_t>(nu)].is_zero())
                acc += U[static_cast<size_t>(nu)] * V[static_cast<size_t>(mu)].partial(nu);
            if (!V[static_cast<size_t>(nu)].is_zero())
                acc = acc - V[static_cast<size_t>(nu)] * U[static_cast<size_t>(mu)].partial(nu);
        }
        w[static_cast<size_t>(mu)] = acc;
    }
    return w;
}

// The flat model: constant frame data, zero connection coefficients, torsion
// T(e_a, e_b) = -2 sum_s eps_s omega_s(e_a, e_b) xi_s.
struct FlatStructure {
    int n = 1;
    PqcFrameData frame;
    std::array<Tensor2, 3> torsion_xi_coeff; // coefficient of xi_s in T(e_a, e_b)

    explicit FlatStructure(int n_) : n(n_), frame(build_adapted_frame(n_)) {
        for (int s = 0; s < 3; ++s) torsion_xi_coeff[s] = (-2.0 * eps_sign(s)) * frame.omega[s];
    }
};

struct ModelCheck {
    std::string name;
    double residual = 0.0;
};

// Self-verification of the flat model at polynomial (coefficient) level:
// every residual is an exact coefficient comparison, so healthy runs report
// zeros up to double rounding.
inline std::vector<ModelCheck> model_verify(int n) {
    const int nv = num_coords(n);
    const int d = 4 * n;
    const PqcFrameData frame = build_adapted_frame(n);
    std::vector<ModelCheck> out;

    auto max_field_coeff = [&](const std::vector<Poly>& f) {
        double m = 0.0;
        for (const auto& p : f) m = std::max(m, p.max_abs_coeff());
        return m;
    };

    std::vector<std::vector<Poly>> hor(static_cast<size_t>(d));
    for (int b = 0; b < d; ++b) hor[static_cast<size_t>(b)] = frame_field_coeffs(n, FieldId::horizontal(b));
    std::array<std::vector<Poly>, 3> xi;
    for (int s = 0; s < 3; ++s) xi[static_cast<size_t>(s)] = frame_field_coeffs(n, FieldId::xi(s));

    // [I_s e_a, e_a] = 2 xi_s  (equivalently [J_s T_a, T_a] = -2 eps_s xi_s
    // under the J-naming X_a = J_3 T_a, Y_a = -J_1 T_a, Z_a = -J_2 T_a).
    {
        double worst = 0.0;
        for (int a = 0; a < n; ++a)
            for (int s = 0; s < 3; ++s) {
                auto c = commutator(n, hor[static_cast<size_t>(4 * a + 1 + s)], hor[static_cast<size_t>(4 * a)]);
                for (int mu = 0; mu < nv; ++mu) {
                    Poly diff = c[static_cast<size_t>(mu)] - 2.0 * xi[static_cast<size_t>(s)][static_cast<size_t>(mu)];
                    worst = std::max(worst, diff.max_abs_coeff());
                }
            }
        out.push_back({"commutator_vertical", worst});
    }
    // [I_i e_a, I_j e_a] = 2 eps_k xi_k  (cyclic)
    {
        double worst = 0.0;
        for (int a = 0; a < n; ++a)
            for (int i = 0; i < 3; ++i) {
                auto [j, k] = cyclic(i);
                auto c = commutator(n, hor[static_cast<size_t>(4 * a + 1 + i)], hor[static_cast<size_t>(4 * a + 1 + j)]);
                for (int mu = 0; mu < nv; ++mu) {
                    Poly diff = c[static_cast<size_t>(mu)] -
                                (2.0 * eps_sign(k)) * xi[static_cast<size_t>(k)][static_cast<size_t>(mu)];
                    worst = std::max(worst, diff.max_abs_coeff());
                }
            }
        out.push_back({"commutator_cyclic", worst});
    }
    // distinct quadruples commute; xi_s are central
    {
        double worst = 0.0;
        for (int bA = 0; bA < d; ++bA)
            for (int bB = 0; bB < d; ++bB) {
                if (bA / 4 == bB / 4) continue;
                auto c = commutator(n, hor[static_cast<size_t>(bA)], hor[static_cast<size_t>(bB)]);
                worst = std::max(worst, max_field_coeff(c));
            }
        for (int s = 0; s < 3; ++s)
            for (int b = 0; b < d; ++b) {
                auto c = commutator(n, xi[static_cast<size_t>(s)], hor[static_cast<size_t>(b)]);
                worst = std::max(worst, max_field_coeff(c));
            }
        out.push_back({"commutator_mixed", worst});
    }

    std::array<std::vector<Poly>, 3> theta;
    for (int s = 0; s < 3; ++s) theta[static_cast<size_t>(s)] = contact_form_coeffs(n, s);

    // H = ker of all three forms; Theta_s(xi_t) = delta_st
    {
        double worst = 0.0;
        for (int s = 0; s < 3; ++s)
            for (int b = 0; b < d; ++b) {
                Poly acc(nv);
                for (int mu = 0; mu < nv; ++mu)
                    acc += theta[static_cast<size_t>(s)][static_cast<size_t>(mu)] *
                           hor[static_cast<size_t>(b)][static_cast<size_t>(mu)];
                worst = std::max(worst, acc.max_abs_coeff());
            }
        out.push_back({"horizontality", worst});

        worst = 0.0;
        for (int s = 0; s < 3; ++s)
            for (int t = 0; t < 3; ++t) {
                Poly acc(nv);
                for (int mu = 0; mu < nv; ++mu)
                    acc += theta[static_cast<size_t>(s)][static_cast<size_t>(mu)] *
                           xi[static_cast<size_t>(t)][static_cast<size_t>(mu)];
                Poly want = Poly::constant(nv, s == t ? 1.0 : 0.0);
                worst = std::max(worst, (acc - want).max_abs_coeff());
            }
        out.push_back({"reeb_pairing", worst});
    }

    std::array<std::vector<std::vector<Poly>>, 3> dtheta;
    for (int s = 0; s < 3; ++s)
        dtheta[static_cast<size_t>(s)] = exterior_derivative(n, theta[static_cast<size_t>(s)]);

    // structure equations: dTheta_3 = 2(dt^a^dx^a + dy^a^dz^a), etc.
    {
        double worst = 0.0;
        for (int s = 0; s < 3; ++s) {
            std::vector<std::vector<Poly>> want(static_cast<size_t>(nv),
                                                std::vector<Poly>(static_cast<size_t>(nv), Poly(nv)));
            for (int a = 0; a < n; ++a) {
                const int ta = 4 * a, xa = 4 * a + 1, ya = 4 * a + 2, za = 4 * a + 3;
                auto set_pair = [&](int mu, int nu, double c) {
                    want[static_cast<size_t>(mu)][static_cast<size_t>(nu)] += Poly::constant(nv, c);
                    want[static_cast<size_t>(nu)][static_cast<size_t>(mu)] += Poly::constant(nv, -c);
                };
                if (s == 2) { // dTheta_3
                    set_pair(ta, xa, 2.0);
                    set_pair(ya, za, 2.0);
                } else if (s == 0) { // dTheta_1
                    set_pair(ta, ya, 2.0);
                    set_pair(xa, za, 2.0);
                } else { // dTheta_2
                    set_pair(ta, za, 2.0);
                    set_pair(xa, ya, -2.0);
                }
            }
            for (int mu = 0; mu < nv; ++mu)
                for (int nu = 0; nu < nv; ++nu) {
                    Poly diff = dtheta[static_cast<size_t>(s)][static_cast<size_t>(mu)][static_cast<size_t>(nu)] -
                                want[static_cast<size_t>(mu)][static_cast<size_t>(nu)];
                    worst = std::max(worst, diff.max_abs_coeff());
                }
        }
        out.push_back({"structure_equations", worst});
    }

    // compatibility: dTheta_s(e_a, e_b) = -2 eps_s omega_s(e_a, e_b)
    {
        double worst = 0.0;
        for (int s = 0; s < 3; ++s)
            for (int a = 0; a < d; ++a)
                for (int b = 0; b < d; ++b) {
                    Poly val = two_form_on_fields(n, dtheta[static_cast<size_t>(s)],
                                                  hor[static_cast<size_t>(a)], hor[static_cast<size_t>(b)]);
                    Poly want = Poly::constant(nv, -2.0 * eps_sign(s) * frame.omega[s](a, b));
                    worst = std::max(worst, (val - want).max_abs_coeff());
                }
        out.push_back({"compatibility", worst});
    }

    // Reeb contraction conditions: dTheta_s(xi_t, e_b) = 0
    {
        double worst = 0.0;
        for (int s = 0; s < 3; ++s)
            for (int t = 0; t < 3; ++t)
                for (int b = 0; b < d; ++b) {
                    Poly val = two_form_on_fields(n, dtheta[static_cast<size_t>(s)],
                                                  xi[static_cast<size_t>(t)], hor[static_cast<size_t>(b)]);
                    worst = std::max(worst, val.max_abs_coeff());
                }
        out.push_back({"reeb_contraction", worst});
    }

    // horizontal torsion: [e_a, e_b]_V = 2 sum_s eps_s omega_s(e_a, e_b) xi_s
    {
        double worst = 0.0;
        for (int a = 0; a < d; ++a)
            for (int b = 0; b < d; ++b) {
                auto c = commutator(n, hor[static_cast<size_t>(a)], hor[static_cast<size_t>(b)]);
                std::vector<Poly> want(static_cast<size_t>(nv), Poly(nv));
                for (int s = 0; s < 3; ++s) {
                    const double coeff = 2.0 * eps_sign(s) * frame.omega[s](a, b);
                    for (int mu = 0; mu < nv; ++mu)
                        want[static_cast<size_t>(mu)] +=
                            coeff * xi[static_cast<size_t>(s)][static_cast<size_t>(mu)];
                }
                for (int mu = 0; mu < nv; ++mu) {
                    Poly diff = c[static_cast<size_t>(mu)] - want[static_cast<size_t>(mu)];
                    worst = std::max(worst, diff.max_abs_coeff());
                }
            }
        out.push_back({"horizontal_torsion", worst});
    }

    // frame structure relations of the constant matrices
    out.push_back({"frame_relations", frame_structure_residual(frame)});

    // torsion endomorphism of the flat connection: T(xi_s, e_b) = -[xi_s, e_b]
    {
        double worst = 0.0;
        for (int s = 0; s < 3; ++s)
            for (int b = 0; b < d; ++b) {
                auto c = commutator(n, xi[static_cast<size_t>(s)], hor[static_cast<size_t>(b)]);
                worst = std::max(worst, max_field_coeff(c));
            }
        out.push_back({"flat_torsion", worst});
    }

    // curvature of the zero-coefficient connection, assembled from the
    // coefficient table gamma(mu, b) = nabla_mu e_b (all zero polynomials):
    // R(e_a, e_b) e_c = nabla_a nabla_b e_c - nabla_b nabla_a e_c
    //                   - 2 sum_s eps_s omega_s(e_a, e_b) nabla_{xi_s} e_c.
    {
        // directions: 0..4n-1 frame fields, 4n..4n+2 the xi_s
        std::vector<std::vector<std::vector<Poly>>> gamma(
            static_cast<size_t>(d + 3),
            std::vector<std::vector<Poly>>(static_cast<size_t>(d),
                                           std::vector<Poly>(static_cast<size_t>(d), Poly(nv))));
        double worst = 0.0;
        for (int a = 0; a < d; ++a)
            for (int b = 0; b < d; ++b)
                for (int c = 0; c < d; ++c)
                    for (int comp = 0; comp < d; ++comp) {
                        Poly acc(nv);
                        // e_a(gamma_b) and gamma_a gamma_b contractions
                        acc += derive_along(gamma[static_cast<size_t>(b)][static_cast<size_t>(c)][static_cast<size_t>(comp)],
                                            n, FieldId::horizontal(a));
                        acc = acc - derive_along(gamma[static_cast<size_t>(a)][static_cast<size_t>(c)][static_cast<size_t>(comp)],
                                                 n, FieldId::horizontal(b));
                        for (int m = 0; m < d; ++m) {
                            acc += gamma[static_cast<size_t>(b)][static_cast<size_t>(c)][static_cast<size_t>(m)] *
                                   gamma[static_cast<size_t>(a)][static_cast<size_t>(m)][static_cast<size_t>(comp)];
                            acc = acc - gamma[static_cast<size_t>(a)][static_cast<size_t>(c)][static_cast<size_t>(m)] *
                                        gamma[static_cast<size_t>(b)][static_cast<size_t>(m)][static_cast<size_t>(comp)];
                        }
                        for (int s = 0; s < 3; ++s)
                            acc = acc - (2.0 * eps_sign(s) * frame.omega[s](a, b)) *
                                        gamma[static_cast<size_t>(d + s)][static_cast<size_t>(c)][static_cast<size_t>(comp)];
                        worst = std::max(worst, acc.max_abs_coeff());
                    }
        out.push_back({"flat_curvature", worst});
    }

    return out;
}

} // namespace pqc
