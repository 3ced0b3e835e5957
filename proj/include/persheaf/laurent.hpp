#pragma once

#include <map>
#include <string>

#include "persheaf/rational.hpp"

namespace persheaf {

// Integer Laurent polynomial in a single variable.  The Hecke engine reads
// the variable as v = q^{1/2} (so q is v^2); the toric engine reads it as t.
class Laurent {
public:
    Laurent() = default;
    explicit Laurent(const Integer& constant) {
        if (constant != 0) c_[0] = constant;
    }
    static Laurent monomial(const Integer& coeff, int exp) {
        Laurent p;
        if (coeff != 0) p.c_[exp] = coeff;
        return p;
    }

    const std::map<int, Integer>& coeffs() const { return c_; }
    Integer coeff(int exp) const {
        auto it = c_.find(exp);
        return it == c_.end() ? Integer(0) : it->second;
    }
    bool is_zero() const { return c_.empty(); }
    int min_exp() const;
    int max_exp() const;

    Laurent operator+(const Laurent& o) const;
    Laurent operator-(const Laurent& o) const;
    Laurent operator*(const Laurent& o) const;
    Laurent operator*(const Integer& s) const;
    bool operator==(const Laurent& o) const { return c_ == o.c_; }

    Laurent shifted(int k) const;   // multiply by x^k
    Laurent inverted() const;       // x -> x^{-1}
    Laurent truncated(int max_deg) const;  // drop exponents > max_deg
    Integer eval_one() const;       // value at x = 1

    // Substitute x -> given Laurent (used for q = v^2 style rewrites).
    Laurent substitute(const Laurent& x) const;

    std::string str(const std::string& var = "t") const;

private:
    std::map<int, Integer> c_;  // exponent -> nonzero coefficient
    void prune();
};

Laurent operator*(const Integer& s, const Laurent& p);

}  // namespace persheaf
