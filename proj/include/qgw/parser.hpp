#pragma once

// Recursive-descent parser for the textual mini-language shared by the CLI,
// cache files, and oracle files.
//
//   class     := term (("+"|"-") term)*
//   term      := [coef "*"] atom
//   atom      := "e" INT | "H" ["^" INT] | "1"
//   coef      := INT ["/" INT]
//   invariant := "(" insertion ("," insertion)* ")" "@" "d=" INT
//   insertion := ["L^" INT "*"] class
//
// Whitespace-insensitive; errors carry exact byte positions.

#include "qgw/key.hpp"
#include "qgw/rational.hpp"
#include "qgw/ring.hpp"

#include <cctype>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace qgw {

struct parse_error : std::runtime_error {
    std::size_t position;
    parse_error(const std::string& msg, std::size_t pos)
        : std::runtime_error(msg + " at byte " + std::to_string(pos)), position(pos) {}
};

namespace detail {

class Cursor {
public:
    explicit Cursor(std::string_view text) : text_(text) {}

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    bool done() {
        skip_ws();
        return pos_ >= text_.size();
    }
    char peek() {
        skip_ws();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }
    bool accept(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    void expect(char c, const char* what) {
        if (!accept(c)) fail(std::string("expected '") + c + "' (" + what + ")");
    }
    [[noreturn]] void fail(const std::string& msg) { throw parse_error(msg, pos_); }
    std::size_t pos() const { return pos_; }

    Integer integer() {
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (pos_ == start) fail("expected an integer");
        return Integer(std::string(text_.substr(start, pos_ - start)));
    }

    int small_integer(int max, const char* what) {
        std::size_t at = pos_;
        Integer v = integer();
        if (v > max) throw parse_error(std::string(what) + " out of range", at);
        return static_cast<int>(v);
    }

private:
    std::string_view text_;
    std::size_t pos_ = 0;
};

// Monomial form of a parsed class: weighted atoms, H-powers still unbounded.
struct ClassMonomial {
    Rational coef;
    bool is_e = false;  // otherwise an H-power (pow = 0 means the unit)
    int pow = 0;
};

inline std::vector<ClassMonomial> parse_class_monomials(Cursor& cur) {
    std::vector<ClassMonomial> out;
    bool first = true;
    Rational sign = 1;
    if (cur.accept('-')) sign = -1;  // tolerate a leading sign
    for (;;) {
        Rational coef = sign;
        // [coef "*"]  -- a bare coefficient (no atom) also denotes a multiple
        // of the unit, so "1" and "1/2" parse.
        if (std::isdigit(static_cast<unsigned char>(cur.peek()))) {
            Integer num = cur.integer();
            Rational c(num);
            if (cur.accept('/')) {
                std::size_t at = cur.pos();
                Integer den = cur.integer();
                if (den == 0) throw parse_error("zero denominator", at);
                c = Rational(num, den);
            }
            coef *= c;
            if (!cur.accept('*')) {
                out.push_back({coef, false, 0});  // pure number = multiple of 1
                goto next_term;
            }
        }
        {
            char c = cur.peek();
            if (c == 'e') {
                cur.accept('e');
                int idx = cur.small_integer(64, "basis index");
                out.push_back({coef, true, idx});
            } else if (c == 'H') {
                cur.accept('H');
                int p = 1;
                if (cur.accept('^')) p = cur.small_integer(64, "H exponent");
                out.push_back({coef, false, p});
            } else if (c == '1') {
                cur.accept('1');
                out.push_back({coef, false, 0});
            } else {
                cur.fail("expected a class atom ('e<i>', 'H', 'H^k' or '1')");
            }
        }
    next_term:
        first = false;
        if (cur.accept('+')) {
            sign = 1;
        } else if (cur.accept('-')) {
            sign = -1;
        } else {
            break;
        }
    }
    (void)first;
    return out;
}

} // namespace detail

// K(P^r) class; e-atoms are basis vectors, H^j = (1+e_1)^j (any j >= 0).
inline KClass parse_k_class(std::string_view text, int r) {
    detail::Cursor cur(text);
    auto monomials = detail::parse_class_monomials(cur);
    if (!cur.done()) cur.fail("trailing input after class");
    KClass out(r);
    for (const auto& m : monomials) {
        if (m.is_e) {
            if (m.pow > r) throw parse_error("basis index exceeds r", 0);
            out += m.coef * KClass::basis(r, m.pow);
        } else {
            out += m.coef * KClass::h_power(r, m.pow);
        }
    }
    return out;
}

// H^*(P^r) class; e-atoms have no meaning in the cohomology ring.
inline CohClass parse_coh_class(std::string_view text, int r) {
    detail::Cursor cur(text);
    auto monomials = detail::parse_class_monomials(cur);
    if (!cur.done()) cur.fail("trailing input after class");
    CohClass out(r);
    for (const auto& m : monomials) {
        if (m.is_e) throw parse_error("e-basis atoms are not cohomology classes", 0);
        out += m.coef * CohClass::h_power(r, m.pow);  // zero once pow > r
    }
    return out;
}

// Parsed but not yet ring-committed invariant expression.
struct ParsedInvariant {
    int d = 0;
    std::vector<std::pair<int, std::vector<detail::ClassMonomial>>> slots;
};

inline ParsedInvariant parse_invariant_expr(std::string_view text) {
    detail::Cursor cur(text);
    ParsedInvariant out;
    cur.expect('(', "invariant opens with a slot list");
    for (;;) {
        int psi = 0;
        if (cur.peek() == 'L') {
            cur.accept('L');
            cur.expect('^', "cotangent power");
            psi = cur.small_integer(1 << 20, "cotangent power");
            cur.expect('*', "after L^k");
        }
        auto cls = detail::parse_class_monomials(cur);
        out.slots.emplace_back(psi, std::move(cls));
        if (cur.accept(',')) continue;
        cur.expect(')', "slot list");
        break;
    }
    cur.expect('@', "degree tag");
    if (!cur.accept('d')) cur.fail("expected 'd='");
    cur.expect('=', "degree tag");
    std::size_t at = cur.pos();
    Integer d = cur.integer();
    if (d > 1000) throw parse_error("degree out of range", at);
    out.d = static_cast<int>(d);
    if (!cur.done()) cur.fail("trailing input after invariant");
    return out;
}

inline std::vector<std::pair<int, KClass>> to_k_insertions(const ParsedInvariant& inv, int r) {
    std::vector<std::pair<int, KClass>> out;
    for (const auto& [psi, monomials] : inv.slots) {
        KClass cls(r);
        for (const auto& m : monomials) {
            if (m.is_e) {
                if (m.pow > r) throw parse_error("basis index exceeds r", 0);
                cls += m.coef * KClass::basis(r, m.pow);
            } else {
                cls += m.coef * KClass::h_power(r, m.pow);
            }
        }
        out.emplace_back(psi, cls);
    }
    return out;
}

inline std::vector<std::pair<int, CohClass>> to_coh_insertions(const ParsedInvariant& inv, int r) {
    std::vector<std::pair<int, CohClass>> out;
    for (const auto& [psi, monomials] : inv.slots) {
        CohClass cls(r);
        for (const auto& m : monomials) {
            if (m.is_e) throw parse_error("e-basis atoms are not cohomology classes", 0);
            cls += m.coef * CohClass::h_power(r, m.pow);
        }
        out.emplace_back(psi, cls);
    }
    return out;
}

} // namespace qgw
