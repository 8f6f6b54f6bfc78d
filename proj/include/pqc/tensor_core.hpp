#pragma once

#include <array>
#include <cmath>
#include <utility>
#include <vector>

#include "pqc/errors.hpp"
#include "pqc/tensor.hpp"

namespace pqc {

// epsilon_1 = epsilon_2 = 1, epsilon_3 = -1; s is 0-based in code.
struct EpsilonSigns {
    static constexpr std::array<double, 3> eps = {1.0, 1.0, -1.0};
    static constexpr double get(int s) { return eps[static_cast<size_t>(s)]; }
};

inline constexpr double eps_sign(int s) { return EpsilonSigns::get(s); }

// Cyclic successors of s in (0,1,2): cyclic(s) = (j,k) with (s,j,k) cyclic.
inline constexpr std::pair<int, int> cyclic(int s) {
    return {(s + 1) % 3, (s + 2) % 3};
}

// Pointwise linear data of a pqc structure on the horizontal space: metric g
// of signature (2n,2n), structure endomorphisms I_s, fundamental 2-forms
// omega_s(X,Y) = g(I_s X, Y).
struct PqcFrameData {
    int n = 0;
    int dim = 0; // 4n
    Tensor2 g;
    Tensor2 ginv;
    std::array<Tensor2, 3> I;
    std::array<Tensor2, 3> omega;
};

inline Tensor2 invert_symmetric(const Tensor2& m) {
    const int d = m.dim();
    // Gauss-Jordan with partial pivoting on an augmented copy.
    std::vector<std::vector<double>> a(d, std::vector<double>(2 * d, 0.0));
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) a[i][j] = m(i, j);
        a[i][d + i] = 1.0;
    }
    for (int col = 0; col < d; ++col) {
        int piv = col;
        for (int r = col + 1; r < d; ++r)
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
        if (std::abs(a[piv][col]) < 1e-14) throw SingularMetric("metric not invertible");
        std::swap(a[piv], a[col]);
        const double s = 1.0 / a[col][col];
        for (int j = 0; j < 2 * d; ++j) a[col][j] *= s;
        for (int r = 0; r < d; ++r) {
            if (r == col) continue;
            const double f = a[r][col];
            if (f == 0.0) continue;
            for (int j = 0; j < 2 * d; ++j) a[r][j] -= f * a[col][j];
        }
    }
    Tensor2 inv(d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) inv(i, j) = a[i][d + j];
    return inv;
}

// Canonical constant-matrix model in the adapted order (e, I1 e, I2 e, I3 e)
// per quadruple, metric signs (+1, -1, -1, +1).
inline PqcFrameData build_adapted_frame(int n) {
    PqcFrameData f;
    f.n = n;
    f.dim = 4 * n;
    f.g = Tensor2(f.dim);
    for (int s = 0; s < 3; ++s) f.I[s] = Tensor2(f.dim);

    static constexpr double gq[4] = {1.0, -1.0, -1.0, 1.0};
    // Quadruple blocks, entry [row][col]: column c holds I_s e_c.
    static constexpr double I1q[4][4] = {
        {0, 1, 0, 0}, {1, 0, 0, 0}, {0, 0, 0, 1}, {0, 0, 1, 0}};
    static constexpr double I2q[4][4] = {
        {0, 0, 1, 0}, {0, 0, 0, -1}, {1, 0, 0, 0}, {0, -1, 0, 0}};
    static constexpr double I3q[4][4] = {
        {0, 0, 0, -1}, {0, 0, 1, 0}, {0, -1, 0, 0}, {1, 0, 0, 0}};

    for (int a = 0; a < n; ++a) {
        for (int r = 0; r < 4; ++r) {
            f.g(4 * a + r, 4 * a + r) = gq[r];
            for (int c = 0; c < 4; ++c) {
                f.I[0](4 * a + r, 4 * a + c) = I1q[r][c];
                f.I[1](4 * a + r, 4 * a + c) = I2q[r][c];
                f.I[2](4 * a + r, 4 * a + c) = I3q[r][c];
            }
        }
    }
    f.ginv = f.g; // signature metric is its own inverse
    for (int s = 0; s < 3; ++s) f.omega[s] = left_apply(f.g, f.I[s]);
    return f;
}

// Conformal rescale: g -> g/(2h), omega -> omega/(2h), I unchanged.
inline PqcFrameData rescale_frame(const PqcFrameData& f, double factor) {
    PqcFrameData r = f;
    r.g = factor * f.g;
    r.ginv = (1.0 / factor) * f.ginv;
    for (int s = 0; s < 3; ++s) r.omega[s] = factor * f.omega[s];
    return r;
}

// Signed trace over an adapted basis, implemented as metric-inverse
// contraction: sum_ab g^{ab} T(e_a, e_b).
inline double signed_trace(const Tensor2& t, const PqcFrameData& f) {
    double s = 0.0;
    for (int a = 0; a < f.dim; ++a)
        for (int b = 0; b < f.dim; ++b) s += f.ginv(a, b) * t(a, b);
    return s;
}

// sum_ab g^{ab} T(e_a, I_s e_b).
inline double signed_trace_pair(const Tensor2& t, const PqcFrameData& f, int s) {
    const Tensor2 ti = right_apply(t, f.I[s]);
    return signed_trace(ti, f);
}

// Kulkarni-Nomizu product for not-necessarily-symmetric A, B:
// (A ^ B)(X,Y,Z,V) = A(X,Z)B(Y,V) + A(Y,V)B(X,Z) - A(Y,Z)B(X,V) - A(X,V)B(Y,Z).
inline Tensor4 kulkarni_nomizu(const Tensor2& A, const Tensor2& B) {
    const int d = A.dim();
    Tensor4 r(d);
    for (int x = 0; x < d; ++x)
        for (int y = 0; y < d; ++y)
            for (int z = 0; z < d; ++z)
                for (int v = 0; v < d; ++v)
                    r(x, y, z, v) = A(x, z) * B(y, v) + A(y, v) * B(x, z) -
                                    A(y, z) * B(x, v) - A(x, v) * B(y, z);
    return r;
}

// Casimir operator on bilinear forms: (dag T)(X,Y) = -sum_s eps_s T(I_s X, I_s Y).
inline Tensor2 casimir_apply(const Tensor2& t, const PqcFrameData& f) {
    Tensor2 r(t.dim());
    for (int s = 0; s < 3; ++s) {
        r -= eps_sign(s) * both_apply(t, f.I[s], f.I[s]);
    }
    return r;
}

struct CasimirParts {
    Tensor2 part3;  // eigenvalue 3
    Tensor2 part1m; // eigenvalue -1
};

// Eigenprojections T_[3] = (T + dag T)/4, T_[-1] = (3T - dag T)/4.
inline CasimirParts casimir_project(const Tensor2& t, const PqcFrameData& f) {
    const Tensor2 dag = casimir_apply(t, f);
    CasimirParts p;
    p.part3 = 0.25 * (t + dag);
    p.part1m = 0.25 * (3.0 * t - dag);
    return p;
}

// R with I_s applied to the first two slots and summed with signs:
// out(X,Y,Z,V) = sum_s eps_s R(I_s X, I_s Y, Z, V).
inline Tensor4 first_pair_casimir_sum(const Tensor4& R, const PqcFrameData& f) {
    const int d = R.dim();
    Tensor4 out(d);
    for (int s = 0; s < 3; ++s) {
        const Tensor2& I = f.I[s];
        const double es = eps_sign(s);
        // sum_{x',y'} I(x',x) I(y',y) R(x',y',z,v); I columns are sparse
        for (int x = 0; x < d; ++x)
            for (int xp = 0; xp < d; ++xp) {
                const double cx = I(xp, x);
                if (cx == 0.0) continue;
                for (int y = 0; y < d; ++y)
                    for (int yp = 0; yp < d; ++yp) {
                        const double c = cx * I(yp, y);
                        if (c == 0.0) continue;
                        for (int z = 0; z < d; ++z)
                            for (int v = 0; v < d; ++v)
                                out(x, y, z, v) += es * c * R(xp, yp, z, v);
                    }
            }
    }
    return out;
}

struct FirstPairParts {
    Tensor4 part3;
    Tensor4 part1m;
};

// Projection acting on the first two arguments:
// R_[3] = 1/4 [R - sum_s eps_s R(I_s., I_s., ., .)], R_[-1] = R - R_[3].
inline FirstPairParts first_pair_project(const Tensor4& R, const PqcFrameData& f) {
    const Tensor4 sum = first_pair_casimir_sum(R, f);
    FirstPairParts p;
    p.part3 = 0.25 * (R - sum);
    p.part1m = 0.25 * (3.0 * R + sum);
    return p;
}

// Sp(n,R)-invariant split of a bilinear form into the four sign patterns
// (+++), (+--), (-+-), (--+); patterns with sign product -1 vanish.
// Psi^sigma = 1/4 [Psi + sum_i sigma_i C_i Psi] with
// (C_i Psi)(X,Y) = -eps_i Psi(I_i X, I_i Y).
inline std::array<Tensor2, 4> four_part_split(const Tensor2& psi, const PqcFrameData& f) {
    std::array<Tensor2, 3> c;
    for (int i = 0; i < 3; ++i) c[i] = (-eps_sign(i)) * both_apply(psi, f.I[i], f.I[i]);
    static constexpr int signs[4][3] = {
        {+1, +1, +1}, {+1, -1, -1}, {-1, +1, -1}, {-1, -1, +1}};
    std::array<Tensor2, 4> parts;
    for (int p = 0; p < 4; ++p) {
        Tensor2 acc = psi;
        for (int i = 0; i < 3; ++i) acc += static_cast<double>(signs[p][i]) * c[i];
        parts[p] = 0.25 * acc;
    }
    return parts;
}

// Trace-free part w.r.t. the frame metric.
inline Tensor2 trace_free(const Tensor2& t, const PqcFrameData& f) {
    const double tr = signed_trace(t, f);
    return t - (tr / f.dim) * f.g;
}

// Structure-relation residuals of a PqcFrameData; all should vanish for a
// genuine pqc frame.
inline double frame_structure_residual(const PqcFrameData& f) {
    double worst = 0.0;
    const int d = f.dim;
    // I_s^2 = eps_s Id; I_i I_j = -I_j I_i = -eps_k I_k
    for (int s = 0; s < 3; ++s) {
        Tensor2 sq = right_apply(f.I[s], f.I[s]);
        for (int a = 0; a < d; ++a)
            for (int b = 0; b < d; ++b) {
                const double want = (a == b) ? eps_sign(s) : 0.0;
                worst = std::max(worst, std::abs(sq(a, b) - want));
            }
    }
    for (int i = 0; i < 3; ++i) {
        auto [j, k] = cyclic(i);
        // column c of I_i I_j is I_i applied to column c of I_j
        for (int cix = 0; cix < d; ++cix)
            for (int r = 0; r < d; ++r) {
                double ij = 0.0, ji = 0.0;
                for (int m = 0; m < d; ++m) {
                    ij += f.I[i](r, m) * f.I[j](m, cix);
                    ji += f.I[j](r, m) * f.I[i](m, cix);
                }
                const double want = -eps_sign(k) * f.I[k](r, cix);
                worst = std::max(worst, std::abs(ij - want));
                worst = std::max(worst, std::abs(ji + want));
            }
    }
    // g(I_s., I_s.) = -eps_s g
    for (int s = 0; s < 3; ++s) {
        Tensor2 gI = both_apply(f.g, f.I[s], f.I[s]);
        Tensor2 diff = gI + eps_sign(s) * f.g;
        worst = std::max(worst, max_abs(diff));
    }
    // omega_s = g(I_s ., .) and antisymmetric
    for (int s = 0; s < 3; ++s) {
        Tensor2 w = left_apply(f.g, f.I[s]);
        worst = std::max(worst, max_abs(w - f.omega[s]));
        worst = std::max(worst, max_abs(w + transpose(w)));
    }
    return worst;
}

} // namespace pqc
