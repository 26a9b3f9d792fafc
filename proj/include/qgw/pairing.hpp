#pragma once

// K-theoretic Poincare metric g_{ab} = chi(e_a e_b) on P^r and its exact
// inverse. The inverse contracts diagonal classes in boundary splittings.

#include "qgw/rational.hpp"
#include "qgw/ring.hpp"

#include <stdexcept>
#include <vector>

namespace qgw {

struct singular_matrix : std::runtime_error {
    using std::runtime_error::runtime_error;
};

using RationalMatrix = std::vector<std::vector<Rational>>;

// Gauss-Jordan over Q; exact.
inline RationalMatrix matrix_inverse(RationalMatrix m) {
    const std::size_t n = m.size();
    RationalMatrix inv(n, std::vector<Rational>(n, Rational(0)));
    for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        while (piv < n && m[piv][col] == 0) ++piv;
        if (piv == n) throw singular_matrix("matrix_inverse: singular matrix");
        std::swap(m[piv], m[col]);
        std::swap(inv[piv], inv[col]);
        Rational d = m[col][col];
        for (std::size_t j = 0; j < n; ++j) {
            m[col][j] /= d;
            inv[col][j] /= d;
        }
        for (std::size_t row = 0; row < n; ++row) {
            if (row == col || m[row][col] == 0) continue;
            Rational f = m[row][col];
            for (std::size_t j = 0; j < n; ++j) {
                m[row][j] -= f * m[col][j];
                inv[row][j] -= f * inv[col][j];
            }
        }
    }
    return inv;
}

struct PairingMatrix {
    int r = 1;
    RationalMatrix g;     // g_{ab}
    RationalMatrix ginv;  // g^{ab}
};

// g_{ab} = chi(e_a e_b) = chi(e_{a+b}), zero once a+b > r.
inline PairingMatrix k_metric(int r) {
    if (r < 1) throw std::invalid_argument("k_metric: r must be >= 1");
    PairingMatrix p;
    p.r = r;
    const std::size_t n = static_cast<std::size_t>(r) + 1;
    p.g.assign(n, std::vector<Rational>(n, Rational(0)));
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            if (a + b <= static_cast<std::size_t>(r))
                p.g[a][b] = chi_of_basis(r, static_cast<int>(a + b));
    p.ginv = matrix_inverse(p.g);
    return p;
}

// Cohomological Poincare pairing on P^r as a Gram matrix in 1, H, ..., H^r;
// used by property tests (antidiagonal identity).
inline RationalMatrix coh_gram(int r) {
    const std::size_t n = static_cast<std::size_t>(r) + 1;
    RationalMatrix g(n, std::vector<Rational>(n, Rational(0)));
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            g[a][b] = coh_integral(coh_mul(CohClass::h_power(r, static_cast<int>(a)),
                                           CohClass::h_power(r, static_cast<int>(b))));
    return g;
}

} // namespace qgw
