#pragma once

// Ordered record of rewrite-rule applications. Each step names the rule,
// the key it fired on, and the resulting linear combination; values filled
// in from the memo let a replay reproduce the result exactly.

#include "qgw/key.hpp"
#include "qgw/rational.hpp"

#include <string>
#include <vector>

namespace qgw {

enum class Rule {
    FundClass,      // drop an unmarked structure-sheaf point, no psi anywhere
    String,         // drop with cotangent-line corrections
    TradeH,         // divisor trade with boundary corrections
    PsiPair,        // L_i L_j = O(D_{i|j})
    Expand,         // e_a rewritten into H-powers at one slot
    BoundarySplit,  // diagonal contraction across a boundary divisor
    Base1Pt,        // 1-point J-function lookup
    BaseD0          // degree-0 three-point chi
};

inline const char* rule_name(Rule r) {
    switch (r) {
    case Rule::FundClass: return "FUND-CLASS";
    case Rule::String: return "STRING";
    case Rule::TradeH: return "TRADE-H";
    case Rule::PsiPair: return "PSI-PAIR";
    case Rule::Expand: return "EXPAND";
    case Rule::BoundarySplit: return "BOUNDARY-SPLIT";
    case Rule::Base1Pt: return "BASE-1PT";
    case Rule::BaseD0: return "BASE-D0";
    }
    return "?";
}

template <typename K>
struct TraceStep {
    Rule rule;
    K before;
    std::vector<std::pair<Rational, K>> after;  // weighted children (empty for bases)
    Rational value;                             // exact value of `before`
};

template <typename K>
using ReductionTrace = std::vector<TraceStep<K>>;

} // namespace qgw
