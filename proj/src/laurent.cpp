#include "persheaf/laurent.hpp"

#include <sstream>
#include <stdexcept>

namespace persheaf {

void Laurent::prune() {
    for (auto it = c_.begin(); it != c_.end();) {
        if (it->second == 0) it = c_.erase(it); else ++it;
    }
}

int Laurent::min_exp() const {
    if (c_.empty()) throw std::domain_error("min_exp of zero polynomial");
    return c_.begin()->first;
}

int Laurent::max_exp() const {
    if (c_.empty()) throw std::domain_error("max_exp of zero polynomial");
    return c_.rbegin()->first;
}

Laurent Laurent::operator+(const Laurent& o) const {
    Laurent out = *this;
    for (const auto& [e, v] : o.c_) out.c_[e] += v;
    out.prune();
    return out;
}

Laurent Laurent::operator-(const Laurent& o) const {
    Laurent out = *this;
    for (const auto& [e, v] : o.c_) out.c_[e] -= v;
    out.prune();
    return out;
}

Laurent Laurent::operator*(const Laurent& o) const {
    Laurent out;
    for (const auto& [e1, v1] : c_)
        for (const auto& [e2, v2] : o.c_) out.c_[e1 + e2] += v1 * v2;
    out.prune();
    return out;
}

Laurent Laurent::operator*(const Integer& s) const {
    Laurent out;
    if (s == 0) return out;
    for (const auto& [e, v] : c_) out.c_[e] = v * s;
    return out;
}

Laurent operator*(const Integer& s, const Laurent& p) { return p * s; }

Laurent Laurent::shifted(int k) const {
    Laurent out;
    for (const auto& [e, v] : c_) out.c_[e + k] = v;
    return out;
}

Laurent Laurent::inverted() const {
    Laurent out;
    for (const auto& [e, v] : c_) out.c_[-e] = v;
    return out;
}

Laurent Laurent::truncated(int max_deg) const {
    Laurent out;
    for (const auto& [e, v] : c_)
        if (e <= max_deg) out.c_[e] = v;
    return out;
}

Integer Laurent::eval_one() const {
    Integer s = 0;
    for (const auto& [e, v] : c_) s += v;
    return s;
}

Laurent Laurent::substitute(const Laurent& x) const {
    Laurent out;
    for (const auto& [e, v] : c_) {
        Laurent term = Laurent(Integer(1));
        if (e >= 0) {
            for (int i = 0; i < e; ++i) term = term * x;
        } else {
            Laurent xi = x.inverted();
            for (int i = 0; i < -e; ++i) term = term * xi;
        }
        out = out + term * v;
    }
    return out;
}

std::string Laurent::str(const std::string& var) const {
    if (c_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, v] : c_) {
        Integer a = v;
        if (first) {
            if (a < 0) { os << "-"; a = -a; }
        } else {
            os << (a < 0 ? " - " : " + ");
            if (a < 0) a = -a;
        }
        first = false;
        bool unit = (a == 1);
        if (e == 0) {
            os << a.get_str();
        } else {
            if (!unit) os << a.get_str() << "*";
            os << var;
            if (e != 1) os << "^" << e;
        }
    }
    return os.str();
}

}  // namespace persheaf
