#pragma once

// K-theoretic J-function of P^r and the 1-point data extracted from it.
// The degree-d coefficient is
//
//   J_d = prod_{m=1}^{d} (1 - q^m H)^{-(r+1)}
//
// expanded as a q-series with K(P^r) coefficients. Pairing a class gamma
// against the q^k coefficient via chi yields the 1-point invariant with
// cotangent-line exponent k. Tables grow lazily: asking for a higher order
// re-expands and longer prefixes never change.

#include "qgw/rational.hpp"
#include "qgw/ring.hpp"
#include "qgw/series.hpp"

#include <map>
#include <stdexcept>
#include <utility>

namespace qgw {

struct JCoefficient {
    int r = 1;
    int d = 0;
    QSeries<KClass> series{0, KClass(1)};
};

inline JCoefficient j_coefficient(int r, int d, int T) {
    if (d < 0) throw std::invalid_argument("j_coefficient: d must be >= 0");
    JCoefficient out;
    out.r = r;
    out.d = d;
    QSeries<KClass> acc(T, KClass(r));
    acc[0] = KClass::unit(r);  // empty product for d = 0
    const KClass H = KClass::h_power(r, 1);
    for (int m = 1; m <= d; ++m)
        acc = acc * series_geom_power(m, r + 1, H, T);
    out.series = acc;
    return out;
}

// Coefficient-wise chi-pairing of J_d against gamma. The 1-pointed
// degree-0 space is unstable, so d = 0 is rejected.
inline QSeries<Rational> one_point_series(int r, int d, const KClass& gamma, int T) {
    if (d < 1) throw unstable_key("one_point_series: requires d >= 1");
    if (gamma.dim() != r) throw dimension_mismatch("one_point_series: class has wrong dimension");
    JCoefficient j = j_coefficient(r, d, T);
    QSeries<Rational> out(T, Rational(0));
    for (int k = 0; k <= T; ++k)
        out[static_cast<std::size_t>(k)] = k_chi(k_mul(gamma, j.series[static_cast<std::size_t>(k)]));
    return out;
}

inline Rational one_point_invariant(int r, int d, int k, const KClass& gamma) {
    if (k < 0) throw std::invalid_argument("one_point_invariant: k must be >= 0");
    return one_point_series(r, d, gamma, k)[static_cast<std::size_t>(k)];
}

// Lazily grown table of J coefficients, shared read-only by evaluation
// sessions once populated.
class JTable {
public:
    explicit JTable(int r) : r_(r) {}

    int r() const { return r_; }

    const KClass& coeff(int d, int k) {
        auto& entry = table_[d];
        if (entry.order() < k || entry.coeffs().empty()) {
            int need = std::max(k, entry.coeffs().empty() ? k : 2 * entry.order());
            entry = j_coefficient(r_, d, need).series;
        }
        return entry[static_cast<std::size_t>(k)];
    }

    // 1-point base value for an arbitrary K-class insertion.
    Rational one_point(int d, int k, const KClass& gamma) {
        if (d < 1) throw unstable_key("JTable::one_point: requires d >= 1");
        return k_chi(k_mul(gamma, coeff(d, k)));
    }

private:
    int r_;
    std::map<int, QSeries<KClass>> table_;
};

} // namespace qgw
