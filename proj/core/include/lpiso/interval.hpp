#pragma once

#include "lpiso/rational.hpp"

#include <iosfwd>
#include <string>

namespace lpiso {

/// Closed rational interval [lo, hi] with lo <= hi.
class Interval {
public:
    Interval() = default;
    explicit Interval(Rational point) : lo_(point), hi_(std::move(point)) {}
    Interval(Rational lo, Rational hi);

    const Rational& lo() const { return lo_; }
    const Rational& hi() const { return hi_; }

    Rational width() const { return hi_ - lo_; }
    Rational mid() const { return (lo_ + hi_) / 2; }
    bool is_point() const { return lo_ == hi_; }
    bool contains(const Rational& x) const { return lo_ <= x && x <= hi_; }
    bool contains(const Interval& other) const { return lo_ <= other.lo_ && other.hi_ <= hi_; }
    bool contains_zero() const { return sgn(lo_) <= 0 && sgn(hi_) >= 0; }
    bool intersects(const Interval& other) const { return lo_ <= other.hi_ && other.lo_ <= hi_; }
    bool width_at_most_pow2(long k) const;  // width <= 2^-k

    /// Largest |x| over the interval.
    Rational mag() const;

    friend Interval operator+(const Interval& a, const Interval& b) {
        return Interval(a.lo_ + b.lo_, a.hi_ + b.hi_);
    }
    friend Interval operator-(const Interval& a, const Interval& b) {
        return Interval(a.lo_ - b.hi_, a.hi_ - b.lo_);
    }
    friend Interval operator-(const Interval& a) { return Interval(-a.hi_, -a.lo_); }
    friend Interval operator*(const Interval& a, const Interval& b);
    friend Interval operator*(const Rational& s, const Interval& a);
    Interval& operator+=(const Interval& b) { return *this = *this + b; }

    friend bool operator==(const Interval& a, const Interval& b) {
        return a.lo_ == b.lo_ && a.hi_ == b.hi_;
    }

private:
    Rational lo_;
    Rational hi_;
};

Interval abs(const Interval& a);
Interval hull(const Interval& a, const Interval& b);
Interval max(const Interval& a, const Interval& b);

// Reciprocal of an interval that excludes zero (std::domain_error otherwise).
Interval reciprocal(const Interval& a);

// Widen outward onto the grid 2^-bits.
Interval round_out(const Interval& a, long bits);

std::ostream& operator<<(std::ostream& os, const Interval& a);

}  // namespace lpiso
