#pragma once

// Truncated formal power series in one variable with exact coefficients.
// Operations on two series use the minimum truncation order; coefficients
// beyond the order are never materialized.

#include "qgw/rational.hpp"
#include "qgw/ring.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace qgw {

namespace detail {

inline Rational zero_like(const Rational&) { return Rational(0); }
inline KClass zero_like(const KClass& c) { return KClass(c.dim()); }

inline Rational mul_coeff(const Rational& a, const Rational& b) { return a * b; }
inline KClass mul_coeff(const KClass& a, const KClass& b) { return k_mul(a, b); }

} // namespace detail

template <typename C>
class QSeries {
public:
    QSeries() = default;
    // Constant-zero series of the given truncation order; `like` supplies the
    // coefficient shape (ring dimension) for non-scalar coefficients.
    QSeries(int order, const C& like)
        : coeffs_(static_cast<std::size_t>(order) + 1, detail::zero_like(like)) {
        if (order < 0) throw std::invalid_argument("QSeries: order must be >= 0");
    }
    explicit QSeries(std::vector<C> coeffs) : coeffs_(std::move(coeffs)) {
        if (coeffs_.empty()) throw std::invalid_argument("QSeries: empty coefficient list");
    }

    int order() const { return static_cast<int>(coeffs_.size()) - 1; }
    const C& operator[](std::size_t k) const { return coeffs_[k]; }
    C& operator[](std::size_t k) { return coeffs_[k]; }
    const std::vector<C>& coeffs() const { return coeffs_; }

    QSeries truncated(int order) const {
        if (order >= this->order()) return *this;
        std::vector<C> c(coeffs_.begin(), coeffs_.begin() + order + 1);
        return QSeries(std::move(c));
    }

    friend QSeries operator+(const QSeries& a, const QSeries& b) {
        int t = std::min(a.order(), b.order());
        QSeries out = a.truncated(t);
        for (int k = 0; k <= t; ++k) out.coeffs_[static_cast<std::size_t>(k)] += b[static_cast<std::size_t>(k)];
        return out;
    }

    friend QSeries operator*(const QSeries& a, const QSeries& b) {
        int t = std::min(a.order(), b.order());
        QSeries out(t, detail::zero_like(a.coeffs_[0]));
        for (int i = 0; i <= t; ++i)
            for (int j = 0; i + j <= t; ++j)
                out.coeffs_[static_cast<std::size_t>(i + j)] +=
                    detail::mul_coeff(a[static_cast<std::size_t>(i)], b[static_cast<std::size_t>(j)]);
        return out;
    }

    friend bool operator==(const QSeries& a, const QSeries& b) { return a.coeffs_ == b.coeffs_; }

private:
    std::vector<C> coeffs_{};
};

// Expansion of (1 - q^m * scalar)^{-exponent} to order q^T:
//   sum_j C(exponent-1+j, j) scalar^j q^{m j}.
inline QSeries<KClass> series_geom_power(int m, int exponent, const KClass& scalar, int T) {
    if (m <= 0) throw std::invalid_argument("series_geom_power: m must be positive");
    if (exponent <= 0) throw std::invalid_argument("series_geom_power: exponent must be positive");
    QSeries<KClass> out(T, scalar);
    KClass sp = KClass::unit(scalar.dim());
    for (int j = 0; m * j <= T; ++j) {
        if (j > 0) sp = k_mul(sp, scalar);
        KClass term = sp;
        term *= Rational(binomial(exponent - 1 + j, j));
        out[static_cast<std::size_t>(m * j)] += term;
    }
    return out;
}

} // namespace qgw
