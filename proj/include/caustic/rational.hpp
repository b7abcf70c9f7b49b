#pragma once

// Exact rational scalar used by the series engine and the graded matrices.

#include <boost/multiprecision/cpp_int.hpp>
#include <string>

#include "caustic/errors.hpp"
#include "caustic/real.hpp"

namespace caustic {

using Rat = boost::multiprecision::cpp_rational;
using Int = boost::multiprecision::cpp_int;

inline Rat rat_pow(const Rat& base, unsigned n) {
    Rat r(1), b = base;
    while (n) {
        if (n & 1u) r *= b;
        b *= b;
        n >>= 1u;
    }
    return r;
}

inline Int binomial(unsigned n, unsigned k) {
    if (k > n) return 0;
    if (k > n - k) k = n - k;
    Int r = 1;
    for (unsigned i = 0; i < k; ++i) {
        r *= n - i;
        r /= i + 1;
    }
    return r;
}

// Correct rounding of the conversion chain: integer -> Real is exact for the
// magnitudes used here; one division rounds once.
template <class Real>
Real to_real(const Rat& q) {
    return Real(numerator(q)) / Real(denominator(q));
}

template <>
inline double to_real<double>(const Rat& q) {
    return q.convert_to<double>();
}

inline std::string rat_to_string(const Rat& q) {
    std::string s = numerator(q).str();
    if (denominator(q) != 1) s += "/" + denominator(q).str();
    return s;
}

// Accepts "n", "-n", "n/d".
inline Rat rat_from_string(const std::string& s) {
    const auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return Rat(Int(s));
        Int num(s.substr(0, slash));
        Int den(s.substr(slash + 1));
        if (den == 0) throw domain_error("rational with zero denominator: " + s);
        return Rat(num, den);
    } catch (const std::runtime_error&) {
        throw domain_error("unparseable rational: " + s);
    }
}

}  // namespace caustic
