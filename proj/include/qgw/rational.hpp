#pragma once

// Exact rational arithmetic. All engine values are Rational; no floating
// point is used anywhere.

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace qgw {

using Integer = boost::multiprecision::cpp_int;

// cpp_rational keeps lowest terms and a positive denominator, which is
// exactly the invariant we need.
using Rational = boost::multiprecision::cpp_rational;

inline Integer binomial(long n, long k) {
    if (k < 0 || n < 0 || k > n) return 0;
    if (k > n - k) k = n - k;
    Integer r = 1;
    for (long i = 1; i <= k; ++i) {
        r *= (n - k + i);
        r /= i;
    }
    return r;
}

inline Integer factorial(long n) {
    Integer r = 1;
    for (long i = 2; i <= n; ++i) r *= i;
    return r;
}

// Renders "p" for integers and "p/q" otherwise. Never decimals.
inline std::string to_string(const Rational& x) {
    std::ostringstream os;
    os << numerator(x);
    if (denominator(x) != 1) os << '/' << denominator(x);
    return os.str();
}

// Parses "p" or "p/q" with optional sign. Returns nullopt on malformed
// input; exactness is preserved.
inline std::optional<Rational> parse_rational(std::string_view text) {
    if (text.empty()) return std::nullopt;
    std::string s(text);
    std::size_t slash = s.find('/');
    try {
        if (slash == std::string::npos) {
            return Rational(Integer(s));
        }
        Integer num(s.substr(0, slash));
        Integer den(s.substr(slash + 1));
        if (den == 0) return std::nullopt;
        return Rational(num, den);
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

} // namespace qgw
