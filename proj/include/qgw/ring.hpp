#pragma once

// The two truncated rings attached to P^r:
//   H*(P^r)  = Q[H]/(H^{r+1}),    elements stored in the basis 1, H, ..., H^r
//   K(P^r)   = Q[H]/((H-1)^{r+1}), elements stored in the basis
//              e_a = (H-1)^a, a = 0..r
// In the e-basis multiplication is plain truncated convolution, since
// e_a * e_b = e_{a+b}. Conversion to H-powers happens only inside chi.

#include "qgw/rational.hpp"

#include <stdexcept>
#include <vector>

namespace qgw {

struct dimension_mismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A moduli configuration outside the stable range.
struct unstable_key : std::domain_error {
    using std::domain_error::domain_error;
};

namespace detail {

inline std::vector<Rational> truncated_convolution(const std::vector<Rational>& a,
                                                   const std::vector<Rational>& b) {
    std::vector<Rational> out(a.size(), Rational(0));
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; i + j < b.size() && j < b.size(); ++j) {
            if (i + j >= out.size()) break;
            out[i + j] += a[i] * b[j];
        }
    }
    return out;
}

} // namespace detail

// Element of H*(P^r) as coefficients of 1, H, ..., H^r.
class CohClass {
public:
    CohClass() = default;
    explicit CohClass(int r) : r_(r), c_(static_cast<std::size_t>(r) + 1, Rational(0)) {
        if (r < 0) throw std::invalid_argument("CohClass: r must be >= 0");
    }
    CohClass(int r, std::vector<Rational> coeffs) : r_(r), c_(std::move(coeffs)) {
        if (c_.size() != static_cast<std::size_t>(r) + 1)
            throw std::invalid_argument("CohClass: need exactly r+1 coefficients");
    }

    static CohClass unit(int r) {
        CohClass x(r);
        x.c_[0] = 1;
        return x;
    }
    // H^j, zero if j > r.
    static CohClass h_power(int r, int j) {
        CohClass x(r);
        if (j >= 0 && j <= r) x.c_[static_cast<std::size_t>(j)] = 1;
        return x;
    }

    int dim() const { return r_; }
    const std::vector<Rational>& coeffs() const { return c_; }
    Rational& operator[](std::size_t i) { return c_[i]; }
    const Rational& operator[](std::size_t i) const { return c_[i]; }

    bool is_zero() const {
        for (const auto& x : c_)
            if (x != 0) return false;
        return true;
    }

    friend bool operator==(const CohClass& a, const CohClass& b) {
        return a.r_ == b.r_ && a.c_ == b.c_;
    }

    CohClass& operator+=(const CohClass& o) {
        check(o);
        for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
        return *this;
    }
    CohClass& operator-=(const CohClass& o) {
        check(o);
        for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
        return *this;
    }
    CohClass& operator*=(const Rational& s) {
        for (auto& x : c_) x *= s;
        return *this;
    }
    friend CohClass operator+(CohClass a, const CohClass& b) { return a += b; }
    friend CohClass operator-(CohClass a, const CohClass& b) { return a -= b; }
    friend CohClass operator*(Rational s, CohClass a) { return a *= s; }

private:
    void check(const CohClass& o) const {
        if (r_ != o.r_) throw dimension_mismatch("CohClass: dimension mismatch");
    }

    int r_ = 0;
    std::vector<Rational> c_{Rational(0)};
};

// Product truncated by H^{r+1} = 0.
inline CohClass coh_mul(const CohClass& a, const CohClass& b) {
    if (a.dim() != b.dim()) throw dimension_mismatch("coh_mul: dimension mismatch");
    return CohClass(a.dim(), detail::truncated_convolution(a.coeffs(), b.coeffs()));
}

// Integration over P^r: the coefficient of the top power H^r.
inline Rational coh_integral(const CohClass& a) {
    return a.coeffs().back();
}

// Element of K(P^r) in the basis e_a = (H-1)^a.
class KClass {
public:
    KClass() = default;
    explicit KClass(int r) : r_(r), c_(static_cast<std::size_t>(r) + 1, Rational(0)) {
        if (r < 0) throw std::invalid_argument("KClass: r must be >= 0");
    }
    KClass(int r, std::vector<Rational> coeffs) : r_(r), c_(std::move(coeffs)) {
        if (c_.size() != static_cast<std::size_t>(r) + 1)
            throw std::invalid_argument("KClass: need exactly r+1 coefficients");
    }

    static KClass unit(int r) { return basis(r, 0); }
    static KClass basis(int r, int a) {
        KClass x(r);
        if (a < 0 || a > r) throw std::invalid_argument("KClass: basis index out of range");
        x.c_[static_cast<std::size_t>(a)] = 1;
        return x;
    }
    // H = 1 + e_1, so H^j = (1+e_1)^j = sum_t C(j,t) e_t (with e_t = 0, t > r).
    static KClass h_power(int r, int j) {
        KClass x(r);
        for (int t = 0; t <= r; ++t) x.c_[static_cast<std::size_t>(t)] = Rational(binomial(j, t));
        return x;
    }

    int dim() const { return r_; }
    const std::vector<Rational>& coeffs() const { return c_; }
    Rational& operator[](std::size_t i) { return c_[i]; }
    const Rational& operator[](std::size_t i) const { return c_[i]; }

    bool is_zero() const {
        for (const auto& x : c_)
            if (x != 0) return false;
        return true;
    }

    friend bool operator==(const KClass& a, const KClass& b) {
        return a.r_ == b.r_ && a.c_ == b.c_;
    }

    KClass& operator+=(const KClass& o) {
        check(o);
        for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
        return *this;
    }
    KClass& operator-=(const KClass& o) {
        check(o);
        for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
        return *this;
    }
    KClass& operator*=(const Rational& s) {
        for (auto& x : c_) x *= s;
        return *this;
    }
    friend KClass operator+(KClass a, const KClass& b) { return a += b; }
    friend KClass operator-(KClass a, const KClass& b) { return a -= b; }
    friend KClass operator*(Rational s, KClass a) { return a *= s; }

private:
    void check(const KClass& o) const {
        if (r_ != o.r_) throw dimension_mismatch("KClass: dimension mismatch");
    }

    int r_ = 0;
    std::vector<Rational> c_{Rational(0)};
};

// Product modulo (H-1)^{r+1}; in the e-basis this is truncated convolution.
inline KClass k_mul(const KClass& a, const KClass& b) {
    if (a.dim() != b.dim()) throw dimension_mismatch("k_mul: dimension mismatch");
    return KClass(a.dim(), detail::truncated_convolution(a.coeffs(), b.coeffs()));
}

// chi(H^k) = C(k+r, r) extended linearly; e_a = sum_t C(a,t)(-1)^{a-t} H^t.
inline Rational chi_of_basis(int r, int a) {
    Rational v = 0;
    for (int t = 0; t <= a; ++t) {
        Integer term = binomial(a, t) * binomial(t + r, r);
        if ((a - t) % 2 == 0)
            v += Rational(term);
        else
            v -= Rational(term);
    }
    return v;
}

inline Rational k_chi(const KClass& a) {
    Rational v = 0;
    for (int i = 0; i <= a.dim(); ++i) {
        if (a[static_cast<std::size_t>(i)] == 0) continue;
        v += a[static_cast<std::size_t>(i)] * chi_of_basis(a.dim(), i);
    }
    return v;
}

} // namespace qgw
