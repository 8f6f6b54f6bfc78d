#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "pqc/errors.hpp"
#include "pqc/tensor.hpp"
#include "pqc/tensor_core.hpp"

namespace pqc {

// Coordinate chart of the group: per quadruple a the coordinates
// (t^a, x^a, y^a, z^a) at indices 4a..4a+3, then the three vertical
// coordinates (x, y, z) at indices 4n, 4n+1, 4n+2.
inline int num_coords(int n) { return 4 * n + 3; }

inline std::string coord_name(int n, int idx) {
    static const char* base = "txyz";
    if (idx < 4 * n) {
        return std::string(1, base[idx % 4]) + std::to_string(idx / 4 + 1);
    }
    return std::string(1, base[1 + (idx - 4 * n)]);
}

// Resolves "t1", "z3", "x", "y", "z" ... to a coordinate index.
inline int coord_index(int n, const std::string& name) {
    for (int i = 0; i < num_coords(n); ++i)
        if (coord_name(n, i) == name) return i;
    throw ValidationError("unknown coordinate '" + name + "' for n=" + std::to_string(n));
}

// Multivariate polynomial with exact differentiation; closed under the
// frame-field operators below.
class Poly {
public:
    using Exps = std::vector<int>;

    Poly() = default;
    explicit Poly(int nvars) : nvars_(nvars) {}

    static Poly constant(int nvars, double c) {
        Poly p(nvars);
        if (c != 0.0) p.terms_[Exps(static_cast<size_t>(nvars), 0)] = c;
        return p;
    }
    static Poly coordinate(int nvars, int idx, double c = 1.0) {
        Poly p(nvars);
        Exps e(static_cast<size_t>(nvars), 0);
        e[static_cast<size_t>(idx)] = 1;
        if (c != 0.0) p.terms_[e] = c;
        return p;
    }

    int nvars() const { return nvars_; }
    bool is_zero() const { return terms_.empty(); }
    const std::map<Exps, double>& terms() const { return terms_; }

    void add_term(const Exps& e, double c) {
        if (c == 0.0) return;
        auto it = terms_.find(e);
        if (it == terms_.end()) {
            terms_[e] = c;
        } else {
            it->second += c;
            if (it->second == 0.0) terms_.erase(it);
        }
    }

    friend Poly operator+(const Poly& a, const Poly& b) {
        Poly r = a;
        for (const auto& [e, c] : b.terms_) r.add_term(e, c);
        return r;
    }
    friend Poly operator-(const Poly& a, const Poly& b) {
        Poly r = a;
        for (const auto& [e, c] : b.terms_) r.add_term(e, -c);
        return r;
    }
    friend Poly operator*(double s, const Poly& a) {
        Poly r(a.nvars_);
        if (s == 0.0) return r;
        for (const auto& [e, c] : a.terms_) r.terms_[e] = s * c;
        return r;
    }
    friend Poly operator*(const Poly& a, const Poly& b) {
        Poly r(a.nvars_);
        for (const auto& [ea, ca] : a.terms_)
            for (const auto& [eb, cb] : b.terms_) {
                Exps e = ea;
                for (size_t i = 0; i < e.size(); ++i) e[i] += eb[i];
                r.add_term(e, ca * cb);
            }
        return r;
    }
    Poly& operator+=(const Poly& b) {
        for (const auto& [e, c] : b.terms_) add_term(e, c);
        return *this;
    }

    Poly partial(int idx) const {
        Poly r(nvars_);
        const size_t i = static_cast<size_t>(idx);
        for (const auto& [e, c] : terms_) {
            if (e[i] == 0) continue;
            Exps d = e;
            d[i] -= 1;
            r.add_term(d, c * e[i]);
        }
        return r;
    }

    double eval(const std::vector<double>& pt) const {
        double acc = 0.0;
        for (const auto& [e, c] : terms_) {
            double m = c;
            for (size_t i = 0; i < e.size(); ++i) {
                for (int k = 0; k < e[i]; ++k) m *= pt[i];
            }
            acc += m;
        }
        return acc;
    }

    double max_abs_coeff() const {
        double m = 0.0;
        for (const auto& [e, c] : terms_) m = std::max(m, std::abs(c));
        return m;
    }

    bool operator==(const Poly& o) const { return nvars_ == o.nvars_ && terms_ == o.terms_; }

private:
    int nvars_ = 0;
    std::map<Exps, double> terms_;
};

// First-order operators of the chart: the 4n left-invariant horizontal frame
// fields in the adapted order (e_a, I1 e_a, I2 e_a, I3 e_a) per quadruple,
// plus the vertical fields xi_1 = 2 d/dy, xi_2 = 2 d/dz, xi_3 = 2 d/dx.
//
// With T_a the t-direction field and vx, vy, vz the vertical coordinates:
//   e_a      = T_a = d/dt^a + 2 x^a d/vx + 2 y^a d/vy + 2 z^a d/vz
//   I1 e_a   = Y_a = d/dy^a + 2 z^a d/vx - 2 t^a d/vy + 2 x^a d/vz
//   I2 e_a   = Z_a = d/dz^a - 2 y^a d/vx - 2 x^a d/vy - 2 t^a d/vz
//   I3 e_a   = X_a = d/dx^a - 2 t^a d/vx + 2 z^a d/vy - 2 y^a d/vz
struct FieldId {
    bool vertical = false;
    int index = 0; // horizontal: adapted index in [0,4n); vertical: s in {0,1,2}

    static FieldId horizontal(int b) { return {false, b}; }
    static FieldId xi(int s) { return {true, s}; }
};

// Coefficient c_mu of the operator in the coordinate basis, as polynomials.
inline std::vector<Poly> frame_field_coeffs(int n, const FieldId& id) {
    const int nv = num_coords(n);
    std::vector<Poly> c(static_cast<size_t>(nv), Poly(nv));
    const int vx = 4 * n, vy = 4 * n + 1, vz = 4 * n + 2;
    if (id.vertical) {
        if (id.index < 0 || id.index > 2) throw UnknownField("xi index out of range");
        const int target = (id.index == 0) ? vy : (id.index == 1) ? vz : vx;
        c[static_cast<size_t>(target)] = Poly::constant(nv, 2.0);
        return c;
    }
    if (id.index < 0 || id.index >= 4 * n) throw UnknownField("frame index out of range");
    const int a = id.index / 4;
    const int m = id.index % 4;
    const int ta = 4 * a, xa = 4 * a + 1, ya = 4 * a + 2, za = 4 * a + 3;
    auto coord = [&](int i, double s) { return Poly::coordinate(nv, i, s); };
    switch (m) {
        case 0: // T_a
            c[static_cast<size_t>(ta)] = Poly::constant(nv, 1.0);
            c[static_cast<size_t>(vx)] = coord(xa, 2.0);
            c[static_cast<size_t>(vy)] = coord(ya, 2.0);
            c[static_cast<size_t>(vz)] = coord(za, 2.0);
            break;
        case 1: // Y_a = I1 e_a
            c[static_cast<size_t>(ya)] = Poly::constant(nv, 1.0);
            c[static_cast<size_t>(vx)] = coord(za, 2.0);
            c[static_cast<size_t>(vy)] = coord(ta, -2.0);
            c[static_cast<size_t>(vz)] = coord(xa, 2.0);
            break;
        case 2: // Z_a = I2 e_a
            c[static_cast<size_t>(za)] = Poly::constant(nv, 1.0);
            c[static_cast<size_t>(vx)] = coord(ya, -2.0);
            c[static_cast<size_t>(vy)] = coord(xa, -2.0);
            c[static_cast<size_t>(vz)] = coord(ta, -2.0);
            break;
        case 3: // X_a = I3 e_a
            c[static_cast<size_t>(xa)] = Poly::constant(nv, 1.0);
            c[static_cast<size_t>(vx)] = coord(ta, -2.0);
            c[static_cast<size_t>(vy)] = coord(za, 2.0);
            c[static_cast<size_t>(vz)] = coord(ya, -2.0);
            break;
        default: break;
    }
    return c;
}

// Exact coordinate-basis components of a frame field at a point.
inline std::vector<double> frame_field_at(int n, const FieldId& id, const std::vector<double>& pt) {
    const auto coeffs = frame_field_coeffs(n, id);
    std::vector<double> v(coeffs.size(), 0.0);
    for (size_t mu = 0; mu < coeffs.size(); ++mu) v[mu] = coeffs[mu].eval(pt);
    return v;
}

// Exact X(f) for the named first-order operator.
inline Poly derive_along(const Poly& f, int n, const FieldId& id) {
    const auto coeffs = frame_field_coeffs(n, id);
    Poly r(f.nvars());
    for (int mu = 0; mu < num_coords(n); ++mu) {
        const Poly& c = coeffs[static_cast<size_t>(mu)];
        if (c.is_zero()) continue;
        r += c * f.partial(mu);
    }
    return r;
}

// Scalar field h together with its frame jets, precomputed once as
// polynomials so that pointwise evaluation stays exact.
class ScalarField {
public:
    ScalarField() = default;
    ScalarField(int n, Poly h) : n_(n), h_(std::move(h)) {
        const int d = 4 * n;
        d1_.resize(static_cast<size_t>(d));
        dxi_.resize(3);
        d2_.resize(static_cast<size_t>(d) * d);
        for (int b = 0; b < d; ++b)
            d1_[static_cast<size_t>(b)] = derive_along(h_, n, FieldId::horizontal(b));
        for (int s = 0; s < 3; ++s) dxi_[static_cast<size_t>(s)] = derive_along(h_, n, FieldId::xi(s));
        for (int a = 0; a < d; ++a)
            for (int b = 0; b < d; ++b)
                d2_[static_cast<size_t>(a) * d + b] =
                    derive_along(d1_[static_cast<size_t>(b)], n, FieldId::horizontal(a));
    }

    int n() const { return n_; }
    const Poly& poly() const { return h_; }
    double value(const std::vector<double>& pt) const { return h_.eval(pt); }
    // dh(e_b)
    const Poly& d1(int b) const { return d1_[static_cast<size_t>(b)]; }
    // dh(xi_s)
    const Poly& dxi(int s) const { return dxi_[static_cast<size_t>(s)]; }
    // Hessian slot convention: d2(a,b) = e_a(e_b h).
    const Poly& d2(int a, int b) const { return d2_[static_cast<size_t>(a) * (4 * n_) + b]; }

private:
    int n_ = 0;
    Poly h_;
    std::vector<Poly> d1_;
    std::vector<Poly> dxi_;
    std::vector<Poly> d2_;
};

// Exact e_a(e_b(e_c h)) at a point.
inline double third_order(const ScalarField& h, const std::vector<double>& pt, int a, int b, int c) {
    const Poly p = derive_along(h.d2(b, c), h.n(), FieldId::horizontal(a));
    return p.eval(pt);
}

// All first/second-order data of h at a point, in the left-invariant adapted
// frame of the flat model (frame parallel, so nabla^2 h(X,Y) = X(Y h)).
struct GradientData {
    int n = 0;
    double h = 0.0;
    std::vector<double> dh;     // dh(e_b), size 4n
    std::array<double, 3> dhxi; // dh(xi_s)
    Tensor2 hess;               // nabla^2 h(e_a, e_b) = e_a(e_b h)
    double grad_norm2 = 0.0;    // |nabla h|^2, signed
    double sublap = 0.0;        // Delta_h h = signed trace of hess
};

inline GradientData gradient_data(const ScalarField& h, const std::vector<double>& pt,
                                  const PqcFrameData& frame) {
    const int d = 4 * h.n();
    GradientData g;
    g.n = h.n();
    g.h = h.value(pt);
    g.dh.resize(static_cast<size_t>(d));
    g.hess = Tensor2(d);
    for (int b = 0; b < d; ++b) g.dh[static_cast<size_t>(b)] = h.d1(b).eval(pt);
    for (int s = 0; s < 3; ++s) g.dhxi[static_cast<size_t>(s)] = h.dxi(s).eval(pt);
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) g.hess(a, b) = h.d2(a, b).eval(pt);
    g.grad_norm2 = 0.0;
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b)
            g.grad_norm2 += frame.ginv(a, b) * g.dh[static_cast<size_t>(a)] * g.dh[static_cast<size_t>(b)];
    g.sublap = signed_trace(g.hess, frame);
    return g;
}

// dh(I_s X) as a covector on frame indices: (dh I_s)(b) = dh(I_s e_b).
inline std::vector<double> dh_compose(const GradientData& gd, const PqcFrameData& f, int s) {
    std::vector<double> out(static_cast<size_t>(f.dim), 0.0);
    for (int b = 0; b < f.dim; ++b) {
        double acc = 0.0;
        for (int c = 0; c < f.dim; ++c) acc += f.I[s](c, b) * gd.dh[static_cast<size_t>(c)];
        out[static_cast<size_t>(b)] = acc;
    }
    return out;
}

// Horizontal gradient frame components: (nabla h)^a = sum_b g^{ab} dh(e_b).
inline std::vector<double> gradient_components(const GradientData& gd, const PqcFrameData& f) {
    std::vector<double> up(static_cast<size_t>(f.dim), 0.0);
    for (int a = 0; a < f.dim; ++a) {
        double acc = 0.0;
        for (int b = 0; b < f.dim; ++b) acc += f.ginv(a, b) * gd.dh[static_cast<size_t>(b)];
        up[static_cast<size_t>(a)] = acc;
    }
    return up;
}

} // namespace pqc
