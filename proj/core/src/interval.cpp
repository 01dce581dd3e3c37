#include "lpiso/interval.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>

namespace lpiso {

Interval::Interval(Rational lo, Rational hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
    if (lo_ > hi_) {
        throw std::invalid_argument("Interval: lo > hi");
    }
}

bool Interval::width_at_most_pow2(long k) const { return width() <= pow2(-k); }

Rational Interval::mag() const { return std::max(abs(lo_), abs(hi_)); }

Interval operator*(const Interval& a, const Interval& b) {
    Rational c[4] = {a.lo_ * b.lo_, a.lo_ * b.hi_, a.hi_ * b.lo_, a.hi_ * b.hi_};
    return Interval(*std::min_element(c, c + 4), *std::max_element(c, c + 4));
}

Interval operator*(const Rational& s, const Interval& a) {
    if (sgn(s) >= 0) {
        return Interval(s * a.lo_, s * a.hi_);
    }
    return Interval(s * a.hi_, s * a.lo_);
}

Interval abs(const Interval& a) {
    if (sgn(a.lo()) >= 0) {
        return a;
    }
    if (sgn(a.hi()) <= 0) {
        return -a;
    }
    return Interval(Rational(0), a.mag());
}

Interval hull(const Interval& a, const Interval& b) {
    return Interval(std::min(a.lo(), b.lo()), std::max(a.hi(), b.hi()));
}

Interval max(const Interval& a, const Interval& b) {
    return Interval(std::max(a.lo(), b.lo()), std::max(a.hi(), b.hi()));
}

Interval reciprocal(const Interval& a) {
    if (a.contains_zero()) {
        throw std::domain_error("reciprocal of an interval containing zero");
    }
    return Interval(1 / a.hi(), 1 / a.lo());
}

Interval round_out(const Interval& a, long bits) {
    return Interval(floor_to_dyadic(a.lo(), bits), ceil_to_dyadic(a.hi(), bits));
}

std::ostream& operator<<(std::ostream& os, const Interval& a) {
    return os << "[" << to_string(a.lo()) << ", " << to_string(a.hi()) << "]";
}

}  // namespace lpiso
