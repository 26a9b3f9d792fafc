#pragma once

// Canonical descriptors of genus-0 invariants and exact linear combinations
// of them. Two keys compare equal iff they denote the same invariant up to
// permutation of the marked points.
//
// Quantum K insertions carry an atom from the closed alphabet
//   1, e_1..e_r, H^1..H^r
// (e_a = (H-1)^a). The alphabet is closed under the rewrite rules:
// e_a * H = e_a + e_{a+1}, H^r * H reduces modulo (H-1)^{r+1} = 0, and
// e_a expands into H-powers when a divisor trade needs one.

#include "qgw/rational.hpp"
#include "qgw/ring.hpp"

#include <algorithm>
#include <compare>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qgw {

// ---------------------------------------------------------------------------
// Linear combinations with exact weights

template <typename K>
class LinComb {
public:
    using Term = std::pair<Rational, K>;

    LinComb() = default;

    void add(Rational w, K key) {
        if (w == 0) return;
        auto it = terms_.find(key);
        if (it == terms_.end()) {
            terms_.emplace(std::move(key), std::move(w));
        } else {
            it->second += w;
            if (it->second == 0) terms_.erase(it);
        }
    }

    void add_scaled(const Rational& w, const LinComb& other) {
        for (const auto& [k, c] : other.terms_) add(w * c, k);
    }

    bool empty() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }

    std::vector<Term> terms() const {
        std::vector<Term> out;
        out.reserve(terms_.size());
        for (const auto& [k, c] : terms_) out.emplace_back(c, k);
        return out;
    }

private:
    std::map<K, Rational> terms_;
};

// ---------------------------------------------------------------------------
// K-theory atoms

enum class AtomKind : int { Unit = 0, E = 1, Hpow = 2 };

struct Atom {
    AtomKind kind = AtomKind::Unit;
    int pow = 0;  // e-index for E, H-exponent for Hpow, 0 for Unit

    static Atom unit() { return {}; }
    static Atom e(int a) {
        if (a == 0) return unit();
        return {AtomKind::E, a};
    }
    static Atom h(int j) {
        if (j == 0) return unit();
        return {AtomKind::Hpow, j};
    }

    bool is_unit() const { return kind == AtomKind::Unit; }
    bool is_h() const { return kind == AtomKind::Hpow; }
    bool is_e() const { return kind == AtomKind::E; }

    KClass to_class(int r) const {
        switch (kind) {
        case AtomKind::Unit: return KClass::unit(r);
        case AtomKind::E: return KClass::basis(r, pow);
        case AtomKind::Hpow: return KClass::h_power(r, pow);
        }
        throw std::logic_error("Atom::to_class: bad kind");
    }

    std::string text() const {
        switch (kind) {
        case AtomKind::Unit: return "1";
        case AtomKind::E: return "e" + std::to_string(pow);
        case AtomKind::Hpow: return pow == 1 ? "H" : "H^" + std::to_string(pow);
        }
        throw std::logic_error("Atom::text: bad kind");
    }

    auto operator<=>(const Atom&) const = default;
};

// One H-factor removed: H^j -> H^{j-1}. Precondition: is_h().
inline Atom atom_strip_h(const Atom& a) {
    if (!a.is_h()) throw std::logic_error("atom_strip_h: no H factor");
    return Atom::h(a.pow - 1);
}

// Multiplication by H inside Q[H]/((H-1)^{r+1}), expressed on the alphabet.
inline std::vector<std::pair<Rational, Atom>> atom_mul_h(const Atom& a, int r) {
    std::vector<std::pair<Rational, Atom>> out;
    switch (a.kind) {
    case AtomKind::Unit:
        out.emplace_back(1, Atom::h(1));
        break;
    case AtomKind::E:
        // e_a H = e_a (1 + e_1) = e_a + e_{a+1}
        out.emplace_back(1, Atom::e(a.pow));
        if (a.pow + 1 <= r) out.emplace_back(1, Atom::e(a.pow + 1));
        break;
    case AtomKind::Hpow:
        if (a.pow + 1 <= r) {
            out.emplace_back(1, Atom::h(a.pow + 1));
        } else {
            // H^{r+1} = -sum_{t=0}^{r} C(r+1,t) (-1)^{r+1-t} H^t
            for (int t = 0; t <= r; ++t) {
                Rational c(binomial(r + 1, t));
                if ((r - t) % 2 != 0) c = -c;
                out.emplace_back(c, Atom::h(t));
            }
        }
        break;
    }
    return out;
}

// e_a = (H-1)^a = sum_t C(a,t)(-1)^{a-t} H^t. Precondition: is_e().
inline std::vector<std::pair<Rational, Atom>> atom_expand_e(const Atom& a) {
    if (!a.is_e()) throw std::logic_error("atom_expand_e: not an e-atom");
    std::vector<std::pair<Rational, Atom>> out;
    for (int t = 0; t <= a.pow; ++t) {
        Rational c(binomial(a.pow, t));
        if ((a.pow - t) % 2 != 0) c = -c;
        out.emplace_back(c, Atom::h(t));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Quantum K keys

struct QkInsertion {
    int psi = 0;  // exponent of the cotangent line L_i; never negative
    Atom cls{};

    auto operator<=>(const QkInsertion&) const = default;
};

struct QkKey {
    int r = 1;
    int d = 0;
    std::vector<QkInsertion> ins;  // sorted descending

    void canonicalize() {
        std::sort(ins.begin(), ins.end(), [](const QkInsertion& x, const QkInsertion& y) { return y < x; });
    }

    int n() const { return static_cast<int>(ins.size()); }

    bool stable() const {
        if (d < 0 || ins.empty()) return false;
        if (d == 0 && n() < 3) return false;
        return true;
    }

    auto operator<=>(const QkKey&) const = default;
};

inline QkKey make_qk_key(int r, int d, std::vector<QkInsertion> ins) {
    QkKey k;
    k.r = r;
    k.d = d;
    k.ins = std::move(ins);
    k.canonicalize();
    return k;
}

// Canonical rendering, e.g. "(L^2*e1, e1) @ d=1".
inline std::string format_key(const QkKey& k) {
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 0; i < k.ins.size(); ++i) {
        if (i) os << ", ";
        if (k.ins[i].psi > 0) os << "L^" << k.ins[i].psi << '*';
        os << k.ins[i].cls.text();
    }
    os << ") @ d=" << k.d;
    return os.str();
}

// ---------------------------------------------------------------------------
// Gromov-Witten keys (cohomological): insertions psi^l ev^*(H^k)

struct GwInsertion {
    int psi = 0;
    int hpow = 0;  // 0 <= hpow <= r

    auto operator<=>(const GwInsertion&) const = default;
};

struct GwKey {
    int r = 2;
    int d = 0;
    std::vector<GwInsertion> ins;

    void canonicalize() {
        std::sort(ins.begin(), ins.end(), [](const GwInsertion& x, const GwInsertion& y) { return y < x; });
    }

    int n() const { return static_cast<int>(ins.size()); }

    bool stable() const {
        if (d < 0 || ins.empty()) return false;
        if (d == 0 && n() < 3) return false;
        return true;
    }

    auto operator<=>(const GwKey&) const = default;
};

inline GwKey make_gw_key(int r, int d, std::vector<GwInsertion> ins) {
    GwKey k;
    k.r = r;
    k.d = d;
    k.ins = std::move(ins);
    k.canonicalize();
    return k;
}

inline std::string format_key(const GwKey& k) {
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 0; i < k.ins.size(); ++i) {
        if (i) os << ", ";
        if (k.ins[i].psi > 0) os << "L^" << k.ins[i].psi << '*';
        if (k.ins[i].hpow == 0)
            os << '1';
        else if (k.ins[i].hpow == 1)
            os << 'H';
        else
            os << "H^" << k.ins[i].hpow;
    }
    os << ") @ d=" << k.d;
    return os.str();
}

} // namespace qgw
