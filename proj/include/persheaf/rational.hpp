#pragma once

#include <gmpxx.h>

#include <string>

namespace persheaf {

// All linear algebra is exact over the rationals; no floating point anywhere.
using Integer  = mpz_class;
using Rational = mpq_class;

inline Rational rational(long num, long den = 1) {
    Rational q(num, den);
    q.canonicalize();
    return q;
}

inline Rational parse_rational(const std::string& s) {
    Rational q(s);
    q.canonicalize();
    return q;
}

inline std::string to_string(const Rational& q) { return q.get_str(); }

}  // namespace persheaf
