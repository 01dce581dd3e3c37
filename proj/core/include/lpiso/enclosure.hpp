#pragma once

#include "lpiso/interval.hpp"
#include "lpiso/rational.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <string>

namespace lpiso {

class Exponent;

/// A computable real given as a precision-indexed rational interval
/// generator: refine(k) has width <= 2^-k and contains the real. Values that
/// are known exactly carry the rational along so downstream code can take
/// exact fast paths.
class Enclosure {
public:
    using Generator = std::function<Interval(long k)>;

    Enclosure() : Enclosure(Rational(0)) {}
    Enclosure(Rational exact);
    Enclosure(int exact) : Enclosure(Rational(exact)) {}

    // The generator must honour the width contract; refine() re-checks it.
    static Enclosure from_generator(Generator g);

    Interval refine(long k) const;
    const std::optional<Rational>& exact() const { return state_->exact; }
    bool is_exact() const { return state_->exact.has_value(); }

    friend Enclosure operator+(const Enclosure& a, const Enclosure& b);
    friend Enclosure operator-(const Enclosure& a, const Enclosure& b);
    friend Enclosure operator*(const Enclosure& a, const Enclosure& b);
    friend Enclosure operator-(const Enclosure& a);

    // 1/x for x != 0; never terminates for x == 0 (searches for a sign).
    Enclosure reciprocal() const;
    friend Enclosure operator/(const Enclosure& a, const Enclosure& b) { return a * b.reciprocal(); }

    // x^p and x^(1/p) for x >= 0.
    Enclosure pow(const Exponent& p) const;
    Enclosure root(const Exponent& p) const;

private:
    struct State {
        std::optional<Rational> exact;
        Generator generator;
    };
    explicit Enclosure(std::shared_ptr<const State> s) : state_(std::move(s)) {}
    std::shared_ptr<const State> state_;
};

/// The exponent p >= 1 of an L^p space, either an exact rational or a
/// computable real.
class Exponent {
public:
    explicit Exponent(Rational p);
    explicit Exponent(Enclosure p);
    static Exponent parse(std::string_view text) { return Exponent(parse_rational(text)); }

    bool is_rational() const { return rational_.has_value(); }
    // Throws std::logic_error for non-rational exponents.
    const Rational& value() const;
    Interval refine(long k) const;
    const Enclosure& enclosure() const { return value_; }

    bool is_integer() const;

    // True when some refinement up to precision max_k excludes 2.
    bool certified_not_two(long max_k = 64) const;
    // Throws PEqualsTwoError unless certified_not_two().
    void require_not_two() const;

    // Rational exponents compare exactly; enclosure exponents only by identity
    // or by exact agreement of their rational fast path.
    bool same_as(const Exponent& other) const;

    std::string to_string() const;

private:
    std::optional<Rational> rational_;
    Enclosure value_;
};

/// |z|^p with width <= 2^-k.
Interval pow_abs(const ComplexRational& z, const Exponent& p, long k);

/// {t^p : t in x} for x.lo >= 0; the rounding contribution is at most 2^-k,
/// total width additionally grows with the width of x by the Lipschitz
/// constant p * x.hi^(p-1).
Interval pow_interval(const Interval& x, const Exponent& p, long k);

/// {t^(1/p) : t in x}. Rounding contribution at most 2^-k; growth from the
/// width of x is bounded by the Lipschitz constant of t^(1/p) on x.
/// Throws NegativeInputError when x.lo < 0.
Interval root(const Interval& x, const Exponent& p, long k);

/// |4 - 2 (sqrt 2)^p|^-1, the normalising constant of the disjointness
/// functional. Throws PEqualsTwoError unless p is certified != 2.
Interval sigma_constant(const Exponent& p, long k);

/// 2^p.
Interval two_pow(const Exponent& p, long k);

/// Calls eval(j) for increasing working precisions j until the returned
/// interval has width <= 2^-k. Throws Error if the precision cap is hit.
Interval refine_until(long k, const std::function<Interval(long)>& eval);

}  // namespace lpiso
