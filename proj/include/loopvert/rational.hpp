#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace loopvert {

/// Exact rational scalar. All coefficient arithmetic in the library is done
/// in Q; there is no floating point anywhere.
using Rational = mpq_class;

inline Rational rat(long num, long den = 1) {
    if (den == 0) throw std::invalid_argument("rational with zero denominator");
    Rational q(num, den);
    q.canonicalize();
    return q;
}

/// Parses "p", "-p" or "p/q". Returns nullopt on malformed input.
inline std::optional<Rational> parse_rational(std::string_view text) {
    if (text.empty()) return std::nullopt;
    std::string s(text);
    for (size_t i = 0; i < s.size(); ++i) {
        char c = s[i];
        bool ok = (c >= '0' && c <= '9') || c == '/' || (c == '-' && i == 0);
        if (!ok) return std::nullopt;
    }
    auto slash = s.find('/');
    if (slash == 0 || slash == s.size() - 1) return std::nullopt;
    if (slash != std::string::npos && s.find('/', slash + 1) != std::string::npos)
        return std::nullopt;
    try {
        Rational q(s);
        if (q.get_den() == 0) return std::nullopt;
        q.canonicalize();
        return q;
    } catch (const std::invalid_argument &) {
        return std::nullopt;
    }
}

inline std::string rational_str(const Rational &q) { return q.get_str(); }

/// Generalized binomial coefficient C(n, k) for integer n (possibly negative)
/// and k >= 0.
inline Rational binomial(long n, long k) {
    if (k < 0) return 0;
    Rational r = 1;
    for (long j = 0; j < k; ++j) {
        r *= rat(n - j);
        r /= rat(j + 1);
    }
    return r;
}

}  // namespace loopvert
