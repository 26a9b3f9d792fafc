#pragma once

// Genus-0 Gromov-Witten invariants of P^r (acceptance data is for P^2).
// Two routes:
//
//  * kontsevich_N(d): the closed recursion for the number N_d of degree-d
//    rational curves through 3d-1 general points of P^2,
//      N_d = sum_{d1+d2=d, di>0} N_{d1} N_{d2}
//              ( d1^2 d2^2 C(3d-4, 3d1-2) - d1^3 d2 C(3d-4, 3d1-1) ).
//
//  * gw_evaluate: a generic reduction engine. Divisor trades move H-factors
//    between markings; with a third marking as witness the descendent-free
//    form
//      ev_i^* H = ev_j^* H + sum_{d1+d2=d} ( d2 D_{ik,d1|j,d2}
//                                          - d1 D_{i,d1|jk,d2} )
//    keeps keys descendent-free, while the psi_j form
//      ev_i^* H = ev_j^* H + d psi_j - sum d1 D_{i,d1|j,d2}
//    handles keys that already carry cotangent powers. psi_i + psi_j =
//    D_{i|j} clears cotangent powers, the string and divisor axioms drop
//    points, boundary divisors split through the diagonal sum_a H^a (x)
//    H^{r-a}, and 1-point descendents come from a pluggable oracle table.
//
// Every key is checked against the virtual dimension before reduction;
// mismatches are zero.

#include "qgw/key.hpp"
#include "qgw/rational.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace qgw {

struct missing_oracle_entry : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// 1-point descendents <tau_l(H^k)>_{0,1,d}, keyed by (d, l, k).
struct OracleTable {
    int r = 2;
    std::map<std::tuple<int, int, int>, Rational> entries;

    std::optional<Rational> find(int d, int l, int k) const {
        auto it = entries.find({d, l, k});
        if (it == entries.end()) return std::nullopt;
        return it->second;
    }
};

// Closed recursion; memoized.
class NTable {
public:
    Rational at(int d) {
        if (d < 1) throw std::invalid_argument("kontsevich_N: d must be >= 1");
        auto it = memo_.find(d);
        if (it != memo_.end()) return it->second;
        Rational v;
        if (d == 1) {
            v = 1;
        } else {
            v = 0;
            for (int d1 = 1; d1 < d; ++d1) {
                int d2 = d - d1;
                Rational w = Rational(d1) * d1 * d2 * d2 * Rational(binomial(3 * d - 4, 3 * d1 - 2)) -
                             Rational(d1) * d1 * d1 * d2 * Rational(binomial(3 * d - 4, 3 * d1 - 1));
                v += at(d1) * at(d2) * w;
            }
        }
        memo_.emplace(d, v);
        return v;
    }

private:
    std::map<int, Rational> memo_;
};

inline Rational kontsevich_N(int d) {
    static thread_local NTable table;
    return table.at(d);
}

class GwSession {
public:
    explicit GwSession(int r = 2, const OracleTable* oracle = nullptr) : r_(r), oracle_(oracle) {
        if (oracle && oracle->r != r) throw std::invalid_argument("GwSession: oracle has wrong r");
    }

    int r() const { return r_; }

    // Virtual dimension of M_{0,n}(P^r, d): r + d(r+1) + n - 3.
    long virtual_dim(const GwKey& key) const {
        return r_ + static_cast<long>(key.d) * (r_ + 1) + key.n() - 3;
    }

    bool dimension_ok(const GwKey& key) const {
        long total = 0;
        for (const auto& s : key.ins) total += s.psi + s.hpow;
        return total == virtual_dim(key);
    }

    Rational evaluate(const GwKey& key) {
        if (!key.stable()) throw unstable_key("gw_evaluate: unstable configuration " + format_key(key));
        for (const auto& s : key.ins)
            if (s.hpow < 0 || s.hpow > r_ || s.psi < 0)
                throw std::invalid_argument("gw_evaluate: insertion out of range");
        auto it = memo_.find(key);
        if (it != memo_.end()) return it->second;
        Rational v = dimension_ok(key) ? reduce(key) : Rational(0);
        memo_.emplace(key, v);
        return v;
    }

    Rational evaluate(const LinComb<GwKey>& comb) {
        Rational v = 0;
        for (const auto& [w, k] : comb.terms()) v += w * evaluate(k);
        return v;
    }

    // Multilinear expansion of (psi-power, CohClass) insertions.
    LinComb<GwKey> normalize(const std::vector<std::pair<int, CohClass>>& raw, int d) const {
        LinComb<GwKey> out;
        std::vector<GwInsertion> acc;
        expand_slot(raw, d, 0, Rational(1), acc, out);
        return out;
    }

    // Divisor trade in the eq-(3) form (witness marking m, no descendents
    // produced). Exposed for the property suite; `target` overrides j.
    Rational trade_eq3(const GwKey& key, int i, int j, int m);

    // Divisor trade in the psi_j form.
    Rational trade_psi_form(const GwKey& key, int i, int j);

    // String / divisor-axiom drops and the psi rule, exposed so the
    // property suite can vary the reduction path.
    Rational drop_string(const GwKey& key, int p);
    Rational drop_divisor(const GwKey& key, int p);
    Rational psi_rule(const GwKey& key, int i, int j);

private:
    Rational reduce(const GwKey& key) {
        const int n = key.n();

        // degree 0: M_{0,n} x P^r, closed form
        if (key.d == 0) return degree0(key);

        // 1-point: oracle
        if (n == 1) {
            const auto& s = key.ins[0];
            if (!oracle_) throw missing_oracle_entry("gw_evaluate: 1-point base needs an oracle table");
            auto v = oracle_->find(key.d, s.psi, s.hpow);
            if (!v) {
                std::ostringstream os;
                os << "gw_evaluate: oracle has no entry (d=" << key.d << ", l=" << s.psi
                   << ", k=" << s.hpow << ")";
                throw missing_oracle_entry(os.str());
            }
            return *v;
        }

        // built-in seed: the unique line through two general points
        if (key.d == 1 && n == 2 && key.ins[0] == GwInsertion{0, r_} && key.ins[1] == GwInsertion{0, r_})
            return 1;

        // string: drop a fundamental-class point
        for (int p = 0; p < n; ++p)
            if (key.ins[static_cast<std::size_t>(p)] == GwInsertion{0, 0}) return drop_string(key, p);

        // divisor axiom: drop a plain H point
        for (int p = 0; p < n; ++p)
            if (key.ins[static_cast<std::size_t>(p)] == GwInsertion{0, 1}) return drop_divisor(key, p);

        // Canonical order sorts by cotangent power first, so slots carrying
        // psi form a prefix. With two or more of them, push the smallest
        // tower onto the largest; this strictly shrinks sum(psi) - max(psi)
        // and eventually frees a slot for the drops above.
        int psi_slots = 0;
        while (psi_slots < n && key.ins[static_cast<std::size_t>(psi_slots)].psi > 0) ++psi_slots;
        if (psi_slots >= 2) return psi_rule(key, psi_slots - 1, 0);

        // Trade H-factors from the lightest slot into slot 0; its power caps
        // at r, after which the main term vanishes and only descendents and
        // boundary terms remain.
        int src = -1;
        for (int t = n - 1; t >= 0; --t)
            if (key.ins[static_cast<std::size_t>(t)].hpow >= 1) {
                src = t;
                break;
            }
        if (src >= 0) {
            int tgt = src == 0 ? 1 : 0;
            if (psi_slots == 0 && n >= 3) {
                int wit = -1;
                for (int t = 0; t < n; ++t)
                    if (t != src && t != tgt) {
                        wit = t;
                        break;
                    }
                return trade_eq3(key, src, tgt, wit);
            }
            return trade_psi_form(key, src, tgt);
        }

        // a single pure-descendent slot and nothing else cannot occur: the
        // other slots would be (0, 0) and were dropped above
        throw std::logic_error("gw_evaluate: no applicable rule for " + format_key(key));
    }

    Rational degree0(const GwKey& key) const {
        // M_{0,n}(X, 0) = M_{0,n} x X; psi integrals give a multinomial.
        long lsum = 0, ksum = 0;
        for (const auto& s : key.ins) {
            lsum += s.psi;
            ksum += s.hpow;
        }
        if (ksum != r_ || lsum != key.n() - 3) return 0;
        Rational v(factorial(key.n() - 3));
        for (const auto& s : key.ins) v /= Rational(factorial(s.psi));
        return v;
    }

    // --- boundary machinery ---------------------------------------------

    static std::vector<GwInsertion> erase_at(const std::vector<GwInsertion>& v, int p) {
        std::vector<GwInsertion> out;
        out.reserve(v.size() - 1);
        for (int i = 0; i < static_cast<int>(v.size()); ++i)
            if (i != p) out.push_back(v[static_cast<std::size_t>(i)]);
        return out;
    }

    std::vector<int> other_slots(const GwKey& key, int i, int j) const {
        std::vector<int> out;
        for (int t = 0; t < key.n(); ++t)
            if (t != i && t != j) out.push_back(t);
        return out;
    }

    static bool side_stable(std::size_t marks, int deg) { return deg >= 1 || marks >= 2; }

    // Sum over distributions of `others` and over the diagonal of the
    // splitting D_{S1,d1 | S2,d2}; slot i goes left, slot j right, an
    // optional witness is pinned to one side. Identical insertions are
    // grouped so each distribution carries its binomial multiplicity.
    Rational sum_splits(const GwKey& key, const std::vector<GwInsertion>& ins, int i, int j,
                        const std::vector<int>& others, int d1, std::optional<int> require_left,
                        std::optional<int> require_right) {
        const int d2 = key.d - d1;

        std::vector<std::pair<GwInsertion, int>> groups;  // insertion type -> count
        std::vector<GwInsertion> forced1{ins[static_cast<std::size_t>(i)]};
        std::vector<GwInsertion> forced2{ins[static_cast<std::size_t>(j)]};
        for (int t : others) {
            const auto& s = ins[static_cast<std::size_t>(t)];
            if (require_left && t == *require_left) {
                forced1.push_back(s);
            } else if (require_right && t == *require_right) {
                forced2.push_back(s);
            } else {
                bool found = false;
                for (auto& [type, count] : groups)
                    if (type == s) {
                        ++count;
                        found = true;
                        break;
                    }
                if (!found) groups.emplace_back(s, 1);
            }
        }

        Rational total = 0;
        std::vector<int> pick(groups.size(), 0);
        for (;;) {
            Rational mult = 1;
            std::size_t marks1 = forced1.size(), marks2 = forced2.size();
            for (std::size_t g = 0; g < groups.size(); ++g) {
                mult *= Rational(binomial(groups[g].second, pick[g]));
                marks1 += static_cast<std::size_t>(pick[g]);
                marks2 += static_cast<std::size_t>(groups[g].second - pick[g]);
            }
            if (side_stable(marks1, d1) && side_stable(marks2, d2)) {
                std::vector<GwInsertion> side1 = forced1, side2 = forced2;
                for (std::size_t g = 0; g < groups.size(); ++g) {
                    side1.insert(side1.end(), static_cast<std::size_t>(pick[g]), groups[g].first);
                    side2.insert(side2.end(), static_cast<std::size_t>(groups[g].second - pick[g]),
                                 groups[g].first);
                }
                for (int a = 0; a <= r_; ++a) {
                    auto s1 = side1;
                    auto s2 = side2;
                    s1.push_back({0, a});
                    s2.push_back({0, r_ - a});
                    total += mult * evaluate(make_gw_key(key.r, d1, s1)) *
                             evaluate(make_gw_key(key.r, d2, s2));
                }
            }
            // next multi-index
            std::size_t g = 0;
            while (g < groups.size() && pick[g] == groups[g].second) {
                pick[g] = 0;
                ++g;
            }
            if (g == groups.size()) break;
            ++pick[g];
        }
        return total;
    }

    void expand_slot(const std::vector<std::pair<int, CohClass>>& raw, int d, std::size_t slot,
                     Rational w, std::vector<GwInsertion>& acc, LinComb<GwKey>& out) const {
        if (slot == raw.size()) {
            out.add(w, make_gw_key(r_, d, acc));
            return;
        }
        const auto& [psi, cls] = raw[slot];
        if (psi < 0) throw std::invalid_argument("normalize: negative cotangent power");
        if (cls.dim() != r_) throw dimension_mismatch("normalize: class has wrong dimension");
        for (int k = 0; k <= r_; ++k) {
            const Rational& c = cls[static_cast<std::size_t>(k)];
            if (c == 0) continue;
            acc.push_back({psi, k});
            expand_slot(raw, d, slot + 1, w * c, acc, out);
            acc.pop_back();
        }
    }

    int r_;
    const OracleTable* oracle_;
    std::map<GwKey, Rational> memo_;

public:
    friend class GwRuleAccess;
};

// eq-(3) trade: no descendents are produced, boundary terms carry the
// witness marking m on prescribed sides.
inline Rational GwSession::trade_eq3(const GwKey& key, int i, int j, int m) {
    if (key.ins[static_cast<std::size_t>(i)].hpow < 1)
        throw std::invalid_argument("trade_eq3: no H factor at source");
    auto ins = key.ins;
    ins[static_cast<std::size_t>(i)].hpow -= 1;

    Rational v = 0;
    // main term: one more H at j
    {
        auto main = ins;
        main[static_cast<std::size_t>(j)].hpow += 1;
        if (main[static_cast<std::size_t>(j)].hpow <= key.r)
            v += evaluate(make_gw_key(key.r, key.d, main));
    }
    std::vector<int> others = other_slots(key, i, j);
    for (int d1 = 0; d1 <= key.d; ++d1) {
        int d2 = key.d - d1;
        if (d2 != 0) v += Rational(d2) * sum_splits(key, ins, i, j, others, d1, /*left*/ m, {});
        if (d1 != 0) v -= Rational(d1) * sum_splits(key, ins, i, j, others, d1, {}, /*right*/ m);
    }
    return v;
}

// Corollary-1 trade: ev_i^* H -> ev_j^* H + d psi_j - sum d1 D_{i,d1|j,d2}.
inline Rational GwSession::trade_psi_form(const GwKey& key, int i, int j) {
    if (key.ins[static_cast<std::size_t>(i)].hpow < 1)
        throw std::invalid_argument("trade_psi_form: no H factor at source");
    auto ins = key.ins;
    ins[static_cast<std::size_t>(i)].hpow -= 1;

    Rational v = 0;
    {
        auto main = ins;
        main[static_cast<std::size_t>(j)].hpow += 1;
        if (main[static_cast<std::size_t>(j)].hpow <= key.r)
            v += evaluate(make_gw_key(key.r, key.d, main));
    }
    {
        auto desc = ins;
        desc[static_cast<std::size_t>(j)].psi += 1;
        v += Rational(key.d) * evaluate(make_gw_key(key.r, key.d, desc));
    }
    std::vector<int> others = other_slots(key, i, j);
    for (int d1 = 1; d1 <= key.d; ++d1)
        v -= Rational(d1) * sum_splits(key, ins, i, j, others, d1, {}, {});
    return v;
}

// String axiom: drop a (0, H^0) point; each cotangent power elsewhere
// steps down once.
inline Rational GwSession::drop_string(const GwKey& key, int p) {
    if (key.ins[static_cast<std::size_t>(p)] != GwInsertion{0, 0})
        throw std::invalid_argument("drop_string: slot is not the fundamental class");
    std::vector<GwInsertion> rest = erase_at(key.ins, p);
    Rational v = 0;
    for (std::size_t i = 0; i < rest.size(); ++i) {
        if (rest[i].psi < 1) continue;
        auto mod = rest;
        mod[i].psi -= 1;
        v += evaluate(make_gw_key(key.r, key.d, mod));
    }
    return v;
}

// Divisor axiom: drop a (0, H) point; the degree multiplies the base term
// and each cotangent power trades one step for an extra H.
inline Rational GwSession::drop_divisor(const GwKey& key, int p) {
    if (key.ins[static_cast<std::size_t>(p)] != GwInsertion{0, 1})
        throw std::invalid_argument("drop_divisor: slot is not a plain divisor class");
    std::vector<GwInsertion> rest = erase_at(key.ins, p);
    GwKey base = make_gw_key(key.r, key.d, rest);
    Rational v = Rational(key.d) * evaluate(base);
    for (std::size_t i = 0; i < rest.size(); ++i) {
        if (rest[i].psi < 1) continue;
        auto mod = rest;
        mod[i].psi -= 1;
        mod[i].hpow += 1;
        if (mod[i].hpow > key.r) continue;  // H^{r+1} = 0
        v += evaluate(make_gw_key(key.r, key.d, mod));
    }
    return v;
}

// psi_i = D_{i|j} - psi_j on a key whose slot i has psi >= 1.
inline Rational GwSession::psi_rule(const GwKey& key, int i, int j) {
    if (key.ins[static_cast<std::size_t>(i)].psi < 1)
        throw std::invalid_argument("psi_rule: no cotangent power at slot i");
    auto ins = key.ins;
    ins[static_cast<std::size_t>(i)].psi -= 1;

    Rational v = 0;
    std::vector<int> others = other_slots(key, i, j);
    for (int d1 = 0; d1 <= key.d; ++d1)
        v += sum_splits(key, ins, i, j, others, d1, {}, {});

    auto swapped = ins;
    swapped[static_cast<std::size_t>(j)].psi += 1;
    v -= evaluate(make_gw_key(key.r, key.d, swapped));
    return v;
}

// Oracle-free entry for the primary P^2 pipeline.
inline Rational gw_pointed_count(int d, GwSession& session) {
    std::vector<GwInsertion> ins(static_cast<std::size_t>(3 * d - 1), GwInsertion{0, 2});
    return session.evaluate(make_gw_key(session.r(), d, ins));
}

} // namespace qgw
