#pragma once

#include <cassert>
#include <cmath>
#include <cstddef>
#include <vector>

namespace pqc {

// Dense (0,2) tensor over the horizontal frame, all slots covariant.
// No symmetry is imposed by storage.
class Tensor2 {
public:
    Tensor2() = default;
    explicit Tensor2(int dim) : dim_(dim), v_(static_cast<size_t>(dim) * dim, 0.0) {}

    int dim() const { return dim_; }
    double& operator()(int a, int b) { return v_[static_cast<size_t>(a) * dim_ + b]; }
    double operator()(int a, int b) const { return v_[static_cast<size_t>(a) * dim_ + b]; }

    const std::vector<double>& data() const { return v_; }
    std::vector<double>& data() { return v_; }

    friend Tensor2 operator+(const Tensor2& a, const Tensor2& b) {
        Tensor2 r(a.dim_);
        for (size_t i = 0; i < r.v_.size(); ++i) r.v_[i] = a.v_[i] + b.v_[i];
        return r;
    }
    friend Tensor2 operator-(const Tensor2& a, const Tensor2& b) {
        Tensor2 r(a.dim_);
        for (size_t i = 0; i < r.v_.size(); ++i) r.v_[i] = a.v_[i] - b.v_[i];
        return r;
    }
    friend Tensor2 operator*(double s, const Tensor2& a) {
        Tensor2 r(a.dim_);
        for (size_t i = 0; i < r.v_.size(); ++i) r.v_[i] = s * a.v_[i];
        return r;
    }
    Tensor2& operator+=(const Tensor2& b) {
        for (size_t i = 0; i < v_.size(); ++i) v_[i] += b.v_[i];
        return *this;
    }
    Tensor2& operator-=(const Tensor2& b) {
        for (size_t i = 0; i < v_.size(); ++i) v_[i] -= b.v_[i];
        return *this;
    }
    Tensor2& operator*=(double s) {
        for (double& x : v_) x *= s;
        return *this;
    }

private:
    int dim_ = 0;
    std::vector<double> v_;
};

// Dense (0,4) tensor, (4n)^4 entries, no symmetry compression.
class Tensor4 {
public:
    Tensor4() = default;
    explicit Tensor4(int dim)
        : dim_(dim), v_(static_cast<size_t>(dim) * dim * dim * dim, 0.0) {}

    int dim() const { return dim_; }
    double& operator()(int a, int b, int c, int d) {
        return v_[((static_cast<size_t>(a) * dim_ + b) * dim_ + c) * dim_ + d];
    }
    double operator()(int a, int b, int c, int d) const {
        return v_[((static_cast<size_t>(a) * dim_ + b) * dim_ + c) * dim_ + d];
    }

    const std::vector<double>& data() const { return v_; }
    std::vector<double>& data() { return v_; }

    friend Tensor4 operator+(const Tensor4& a, const Tensor4& b) {
        Tensor4 r(a.dim_);
        for (size_t i = 0; i < r.v_.size(); ++i) r.v_[i] = a.v_[i] + b.v_[i];
        return r;
    }
    friend Tensor4 operator-(const Tensor4& a, const Tensor4& b) {
        Tensor4 r(a.dim_);
        for (size_t i = 0; i < r.v_.size(); ++i) r.v_[i] = a.v_[i] - b.v_[i];
        return r;
    }
    friend Tensor4 operator*(double s, const Tensor4& a) {
        Tensor4 r(a.dim_);
        for (size_t i = 0; i < r.v_.size(); ++i) r.v_[i] = s * a.v_[i];
        return r;
    }
    Tensor4& operator+=(const Tensor4& b) {
        for (size_t i = 0; i < v_.size(); ++i) v_[i] += b.v_[i];
        return *this;
    }
    Tensor4& operator-=(const Tensor4& b) {
        for (size_t i = 0; i < v_.size(); ++i) v_[i] -= b.v_[i];
        return *this;
    }
    Tensor4& operator*=(double s) {
        for (double& x : v_) x *= s;
        return *this;
    }

private:
    int dim_ = 0;
    std::vector<double> v_;
};

inline double max_abs(const Tensor2& t) {
    double m = 0.0;
    for (double x : t.data()) m = std::max(m, std::abs(x));
    return m;
}

inline double max_abs(const Tensor4& t) {
    double m = 0.0;
    for (double x : t.data()) m = std::max(m, std::abs(x));
    return m;
}

inline Tensor2 transpose(const Tensor2& t) {
    Tensor2 r(t.dim());
    for (int a = 0; a < t.dim(); ++a)
        for (int b = 0; b < t.dim(); ++b) r(a, b) = t(b, a);
    return r;
}

inline Tensor2 symmetric_part(const Tensor2& t) {
    Tensor2 r(t.dim());
    for (int a = 0; a < t.dim(); ++a)
        for (int b = 0; b < t.dim(); ++b) r(a, b) = 0.5 * (t(a, b) + t(b, a));
    return r;
}

inline Tensor2 antisymmetric_part(const Tensor2& t) {
    Tensor2 r(t.dim());
    for (int a = 0; a < t.dim(); ++a)
        for (int b = 0; b < t.dim(); ++b) r(a, b) = 0.5 * (t(a, b) - t(b, a));
    return r;
}

// T(A, I.b): contract the second slot with the endomorphism columns,
// result(a,b) = sum_c T(a,c) I(c,b).
inline Tensor2 right_apply(const Tensor2& t, const Tensor2& endo) {
    const int d = t.dim();
    Tensor2 r(d);
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) {
            double s = 0.0;
            for (int c = 0; c < d; ++c) s += t(a, c) * endo(c, b);
            r(a, b) = s;
        }
    return r;
}

// T(I.a, b): contract the first slot, result(a,b) = sum_c I(c,a) T(c,b).
inline Tensor2 left_apply(const Tensor2& t, const Tensor2& endo) {
    const int d = t.dim();
    Tensor2 r(d);
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) {
            double s = 0.0;
            for (int c = 0; c < d; ++c) s += endo(c, a) * t(c, b);
            r(a, b) = s;
        }
    return r;
}

// T(I.a, J.b) for two endomorphisms.
inline Tensor2 both_apply(const Tensor2& t, const Tensor2& endoA, const Tensor2& endoB) {
    return right_apply(left_apply(t, endoA), endoB);
}

} // namespace pqc
