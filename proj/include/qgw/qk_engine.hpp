#pragma once

// Genus-0 quantum K-invariants of P^r (acceptance data exists for r = 1),
// evaluated by a terminating rewrite system:
//
//   STRING / FUND-CLASS  drop a (psi = 0, structure sheaf) point; the
//                        pushforward of the remaining cotangent powers
//                        contributes every lower power once.
//   TRADE-H              move one H-factor from marking i to marking j:
//                        ev_i^* O(1) = ev_j^* O(1) (x) L_j^{(x) d}
//                        (x) O(-sum_{d1>=1} d1 D_{i,d1|j,d2}),
//                        with O(-cD) unrolled through the exact sequences
//                        O(-cD) = O(-(c-1)D) - O_D(-(c-1)D); each unroll
//                        step puts matching cotangent powers on the two
//                        node branches.
//   PSI-PAIR             L_i (x) L_j = O(D_{i|j}); the correction term is
//                        O_D (x) N_D with N_D dual to the product of the
//                        node cotangent lines.
//   EXPAND               rewrite e_a into H-powers at one slot when a trade
//                        needs an H-factor there.
//   BASE-1PT             1-point values from the J-function table.
//   BASE-D0              three-point degree-0 chi (cotangent lines on that
//                        space are trivial, so psi powers are dropped).
//
// Boundary divisors are contracted through the K-theoretic diagonal
// sum_{a,b} g^{ab} e_a (x) e_b on one divisor at a time. Splits whose
// degree-0 side has fewer than two markings are empty. A configuration
// that would need a negative cotangent exponent on a side where the
// cotangent lines are nontrivial is reported as irreducible rather than
// guessed at.

#include "qgw/jfunction.hpp"
#include "qgw/key.hpp"
#include "qgw/pairing.hpp"
#include "qgw/rational.hpp"
#include "qgw/ring.hpp"
#include "qgw/trace.hpp"

#include <map>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace qgw {

struct irreducible_configuration : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// First-step override used by the reduction-path independence tests.
struct QkStepChoice {
    enum class Kind { TradeTarget, PsiPartner } kind = Kind::TradeTarget;
    int slot = 0;  // target slot for a trade, partner slot for a psi-pair
};

class QkSession {
public:
    explicit QkSession(int r, bool tracing = false)
        : r_(r), jtable_(r), metric_(k_metric(r)), tracing_(tracing) {}

    int r() const { return r_; }
    JTable& jtable() { return jtable_; }
    const ReductionTrace<QkKey>& trace() const { return trace_; }
    const std::map<QkKey, Rational>& memo() const { return memo_; }
    void set_tracing(bool on) { tracing_ = on; }

    // -- entry points --------------------------------------------------

    Rational evaluate(const QkKey& key) { return evaluate_key(key, nullptr); }

    Rational evaluate(const LinComb<QkKey>& comb) {
        Rational v = 0;
        for (const auto& [w, k] : comb.terms()) v += w * evaluate(k);
        return v;
    }

    // Multilinear expansion of raw class insertions into e-basis monomial
    // keys with exact weights.
    LinComb<QkKey> normalize(const std::vector<std::pair<int, KClass>>& raw, int d) const {
        LinComb<QkKey> out;
        std::vector<QkInsertion> acc;
        expand_slot(raw, d, 0, Rational(1), acc, out);
        return out;
    }

    // Evaluate with an explicit first-step choice (property tests only).
    Rational evaluate_with_choice(const QkKey& key, const QkStepChoice& choice) {
        return evaluate_key(key, &choice);
    }

    // -- individual rewrite rules (exposed for unit tests) ---------------

    // Drop the point at slot p; it must carry (psi = 0, unit). Every other
    // marking contributes each strictly smaller cotangent power once.
    LinComb<QkKey> reduce_drop_point(const QkKey& key, int p) const {
        const auto& slot = key.ins[static_cast<std::size_t>(p)];
        if (slot.psi != 0 || !slot.cls.is_unit())
            throw std::invalid_argument("reduce_drop_point: slot is not (0, 1)");
        std::vector<QkInsertion> rest;
        for (int i = 0; i < key.n(); ++i)
            if (i != p) rest.push_back(key.ins[static_cast<std::size_t>(i)]);
        QkKey base = make_qk_key(key.r, key.d, rest);
        if (!base.stable()) throw unstable_key("reduce_drop_point: unstable result");
        LinComb<QkKey> out;
        out.add(1, base);
        for (std::size_t i = 0; i < rest.size(); ++i) {
            for (int c = 1; c <= rest[i].psi; ++c) {
                auto mod = rest;
                mod[i].psi -= c;
                out.add(1, make_qk_key(key.r, key.d, mod));
            }
        }
        return out;
    }

    struct TradeResult {
        LinComb<QkKey> main;
        Rational boundary = 0;  // already signed into the value below
        Rational value = 0;     // evaluate(main) - boundary corrections
    };

    // Remove one H-factor at slot i, multiply the class at slot j by H and
    // raise its cotangent power by d; subtract the boundary corrections.
    TradeResult trade_H(const QkKey& key, int i, int j) {
        const auto& src = key.ins[static_cast<std::size_t>(i)];
        if (!src.cls.is_h()) throw std::invalid_argument("trade_H: no H factor at source");
        if (i == j) throw std::invalid_argument("trade_H: need distinct markings");

        // Substituted integrand, branching over the target's ring product.
        std::vector<std::pair<Rational, std::vector<QkInsertion>>> branches;
        {
            auto base = key.ins;
            base[static_cast<std::size_t>(i)].cls = atom_strip_h(src.cls);
            const auto& tgt = base[static_cast<std::size_t>(j)];
            for (const auto& [w, atom] : atom_mul_h(tgt.cls, key.r)) {
                auto ins = base;
                ins[static_cast<std::size_t>(j)].cls = atom;
                ins[static_cast<std::size_t>(j)].psi += key.d;
                branches.emplace_back(w, std::move(ins));
            }
        }

        TradeResult res;
        for (const auto& [w, ins] : branches) res.main.add(w, make_qk_key(key.r, key.d, ins));

        // Boundary: splits d1 + d2 = d with d1 >= 1 (i on the d1 side, j on
        // the d2 side), every distribution of the other markings, node
        // powers 0 .. d1-1 from the multiplicity-d1 sheaf.
        std::vector<int> others;
        for (int t = 0; t < key.n(); ++t)
            if (t != i && t != j) others.push_back(t);

        Rational boundary = 0;
        for (int d1 = 1; d1 <= key.d; ++d1) {
            int d2 = key.d - d1;
            for (std::uint64_t mask = 0; mask < (1ull << others.size()); ++mask) {
                for (const auto& [w, ins] : branches) {
                    std::vector<QkInsertion> side1{ins[static_cast<std::size_t>(i)]};
                    std::vector<QkInsertion> side2{ins[static_cast<std::size_t>(j)]};
                    for (std::size_t t = 0; t < others.size(); ++t)
                        ((mask >> t) & 1 ? side1 : side2).push_back(ins[static_cast<std::size_t>(others[t])]);
                    for (int m = 0; m < d1; ++m)
                        boundary += w * boundary_split(key, side1, d1, side2, d2, m);
                }
            }
        }
        res.boundary = boundary;
        res.value = evaluate(res.main) - boundary;
        return res;
    }

    struct PsiPairResult {
        LinComb<QkKey> main;
        Rational boundary = 0;
        Rational value = 0;  // evaluate(main) + boundary
    };

    // L_i L_j = O(D_{i|j}): lower both powers, add the normal-bundle
    // correction on every stable splitting.
    PsiPairResult reduce_psi_pair(const QkKey& key, int i, int j) {
        if (i == j) throw std::invalid_argument("reduce_psi_pair: need distinct markings");
        if (key.ins[static_cast<std::size_t>(i)].psi < 1 || key.ins[static_cast<std::size_t>(j)].psi < 1)
            throw std::invalid_argument("reduce_psi_pair: both cotangent powers must be >= 1");

        auto ins = key.ins;
        ins[static_cast<std::size_t>(i)].psi -= 1;
        ins[static_cast<std::size_t>(j)].psi -= 1;

        PsiPairResult res;
        res.main.add(1, make_qk_key(key.r, key.d, ins));

        std::vector<int> others;
        for (int t = 0; t < key.n(); ++t)
            if (t != i && t != j) others.push_back(t);

        Rational boundary = 0;
        for (int d1 = 0; d1 <= key.d; ++d1) {
            int d2 = key.d - d1;
            for (std::uint64_t mask = 0; mask < (1ull << others.size()); ++mask) {
                std::vector<QkInsertion> side1{ins[static_cast<std::size_t>(i)]};
                std::vector<QkInsertion> side2{ins[static_cast<std::size_t>(j)]};
                for (std::size_t t = 0; t < others.size(); ++t)
                    ((mask >> t) & 1 ? side1 : side2).push_back(ins[static_cast<std::size_t>(others[t])]);
                // N_D dual to the product of the node cotangent lines.
                boundary += boundary_split(key, side1, d1, side2, d2, -1);
            }
        }
        res.boundary = boundary;
        res.value = evaluate(res.main) + boundary;
        return res;
    }

    // Diagonal contraction across one boundary divisor. `node_psi` is the
    // accumulated cotangent power at the two node branches. Unstable sides
    // make the divisor empty.
    Rational boundary_split(const QkKey& parent, const std::vector<QkInsertion>& side1, int d1,
                            const std::vector<QkInsertion>& side2, int d2, int node_psi) {
        if (!side_stable(side1, d1) || !side_stable(side2, d2)) return 0;

        Rational total = 0;
        std::vector<std::pair<Rational, QkKey>> audit;
        std::vector<Rational> v1(static_cast<std::size_t>(r_) + 1), v2(static_cast<std::size_t>(r_) + 1);
        for (int a = 0; a <= r_; ++a) {
            v1[static_cast<std::size_t>(a)] = evaluate(side_key(side1, d1, node_psi, a));
            v2[static_cast<std::size_t>(a)] = evaluate(side_key(side2, d2, node_psi, a));
            if (tracing_) {
                audit.emplace_back(1, side_key(side1, d1, node_psi, a));
                audit.emplace_back(1, side_key(side2, d2, node_psi, a));
            }
        }
        for (int a = 0; a <= r_; ++a)
            for (int b = 0; b <= r_; ++b)
                total += metric_.ginv[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] *
                         v1[static_cast<std::size_t>(a)] * v2[static_cast<std::size_t>(b)];
        if (tracing_)
            trace_.push_back({Rule::BoundarySplit, parent, std::move(audit), total});
        return total;
    }

    // 1-point and degree-0 bases.
    Rational base_cases(const QkKey& key) {
        if (key.n() == 1 && key.d >= 1) {
            const auto& s = key.ins[0];
            return jtable_.one_point(key.d, s.psi, s.cls.to_class(r_));
        }
        if (key.d == 0 && key.n() == 3) {
            KClass prod = KClass::unit(r_);
            for (const auto& s : key.ins) prod = k_mul(prod, s.cls.to_class(r_));
            return k_chi(prod);
        }
        throw std::invalid_argument("base_cases: not a base configuration");
    }

private:
    // -- strategy --------------------------------------------------------

    Rational evaluate_key(const QkKey& key, const QkStepChoice* choice) {
        if (!key.stable()) throw unstable_key("evaluate: unstable configuration " + format_key(key));
        if (!choice) {
            auto it = memo_.find(key);
            if (it != memo_.end()) return it->second;
        }

        Rational v;
        if (key.n() == 1 && key.d >= 1) {
            v = base_cases(key);
            record(Rule::Base1Pt, key, {}, v);
        } else if (key.d == 0 && key.n() == 3) {
            v = base_cases(key);
            record(Rule::BaseD0, key, {}, v);
        } else {
            v = reduce_step(key, choice);
        }
        if (!choice) memo_.emplace(key, v);
        return v;
    }

    Rational reduce_step(const QkKey& key, const QkStepChoice* choice) {
        // (a) a droppable point
        for (int p = 0; p < key.n(); ++p) {
            const auto& s = key.ins[static_cast<std::size_t>(p)];
            if (s.psi == 0 && s.cls.is_unit()) {
                auto comb = reduce_drop_point(key, p);
                bool corrections = comb.size() > 1;
                Rational v = evaluate(comb);
                record(corrections ? Rule::String : Rule::FundClass, key, comb.terms(), v);
                return v;
            }
        }
        // (b) trade an H-factor away
        int src = -1;
        for (int t = key.n() - 1; t >= 0; --t) {
            if (key.ins[static_cast<std::size_t>(t)].cls.is_h()) {
                src = t;  // canonical order is descending, so the last H slot
                break;    // has the minimal cotangent power
            }
        }
        if (src >= 0) {
            int tgt = (src == 0) ? 1 : 0;  // the canonically first other slot
            if (choice && choice->kind == QkStepChoice::Kind::TradeTarget) {
                if (choice->slot == src || choice->slot < 0 || choice->slot >= key.n())
                    throw std::invalid_argument("evaluate_with_choice: bad trade target");
                tgt = choice->slot;
            }
            auto res = trade_H(key, src, tgt);
            record(Rule::TradeH, key, res.main.terms(), res.value);
            return res.value;
        }
        // (c) expand an e-atom into H-powers (the canonically last e-slot)
        for (int t = key.n() - 1; t >= 0; --t) {
            const auto& s = key.ins[static_cast<std::size_t>(t)];
            if (s.cls.is_e()) {
                LinComb<QkKey> comb;
                for (const auto& [w, atom] : atom_expand_e(s.cls)) {
                    auto ins = key.ins;
                    ins[static_cast<std::size_t>(t)].cls = atom;
                    comb.add(w, make_qk_key(key.r, key.d, ins));
                }
                Rational v = evaluate(comb);
                record(Rule::Expand, key, comb.terms(), v);
                return v;
            }
        }
        // (d) every slot is (psi >= 1, unit): pair the extremes
        {
            int p = key.n() - 1;  // minimal power
            int j = 0;            // maximal power
            if (choice && choice->kind == QkStepChoice::Kind::PsiPartner) {
                if (choice->slot == p || choice->slot < 0 || choice->slot >= key.n())
                    throw std::invalid_argument("evaluate_with_choice: bad psi partner");
                j = choice->slot;
            }
            auto res = reduce_psi_pair(key, p, j);
            record(Rule::PsiPair, key, res.main.terms(), res.value);
            return res.value;
        }
    }

    // -- helpers ----------------------------------------------------------

    static bool side_stable(const std::vector<QkInsertion>& markings, int deg) {
        // one node point is added to each side
        return deg >= 1 || static_cast<int>(markings.size()) >= 2;
    }

    QkKey side_key(const std::vector<QkInsertion>& markings, int deg, int node_psi, int node_a) const {
        std::vector<QkInsertion> ins = markings;
        ins.push_back({node_psi, Atom::e(node_a)});
        bool three_pt_d0 = (deg == 0 && ins.size() == 3);
        for (auto& s : ins) {
            if (three_pt_d0) {
                s.psi = 0;  // cotangent lines on the 3-pointed degree-0 space are trivial
            } else if (s.psi < 0) {
                throw irreducible_configuration(
                    "boundary side needs a negative cotangent exponent; no covered rule applies");
            }
        }
        return make_qk_key(r_, deg, ins);
    }

    void expand_slot(const std::vector<std::pair<int, KClass>>& raw, int d, std::size_t slot,
                     Rational w, std::vector<QkInsertion>& acc, LinComb<QkKey>& out) const {
        if (slot == raw.size()) {
            out.add(w, make_qk_key(r_, d, acc));
            return;
        }
        const auto& [psi, cls] = raw[slot];
        if (psi < 0) throw std::invalid_argument("normalize: negative cotangent power");
        if (cls.dim() != r_) throw dimension_mismatch("normalize: class has wrong dimension");
        for (int a = 0; a <= r_; ++a) {
            const Rational& c = cls[static_cast<std::size_t>(a)];
            if (c == 0) continue;
            acc.push_back({psi, Atom::e(a)});
            expand_slot(raw, d, slot + 1, w * c, acc, out);
            acc.pop_back();
        }
    }

    void record(Rule rule, const QkKey& before, std::vector<std::pair<Rational, QkKey>> after,
                Rational value) {
        if (!tracing_) return;
        trace_.push_back({rule, before, std::move(after), std::move(value)});
    }

    int r_;
    JTable jtable_;
    PairingMatrix metric_;
    bool tracing_;
    std::map<QkKey, Rational> memo_;
    ReductionTrace<QkKey> trace_;
};

} // namespace qgw
