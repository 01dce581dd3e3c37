#include "lpiso/enclosure.hpp"

#include "lpiso/errors.hpp"

#include <mpfr.h>

#include <algorithm>
#include <stdexcept>

namespace lpiso {

namespace {

constexpr long kPrecisionCap = 1L << 16;

class Mpfr {
public:
    explicit Mpfr(long prec) { mpfr_init2(v_, static_cast<mpfr_prec_t>(std::max(prec, 8L))); }
    ~Mpfr() { mpfr_clear(v_); }
    Mpfr(const Mpfr&) = delete;
    Mpfr& operator=(const Mpfr&) = delete;

    mpfr_ptr get() { return v_; }
    mpfr_srcptr get() const { return v_; }

    Rational to_rational() const {
        Rational q;
        mpfr_get_q(q.get_mpq_t(), v_);
        return q;
    }

private:
    mpfr_t v_;
};

long bits_of(const Rational& bound) {
    if (sgn(bound) <= 0) {
        return 0;
    }
    return std::max(0L, floor_log2(bound) + 1);
}

// Exact n-th root of a nonnegative rational, if it exists.
std::optional<Rational> exact_root(const Rational& y, unsigned long n) {
    Integer num;
    Integer den;
    if (mpz_root(num.get_mpz_t(), y.get_num_mpz_t(), n) == 0) {
        return std::nullopt;
    }
    if (mpz_root(den.get_mpz_t(), y.get_den_mpz_t(), n) == 0) {
        return std::nullopt;
    }
    return Rational(num, den);
}

// y^(1/n) for rational y >= 0, bracketed with directed rounding at `prec`
// bits.
Interval root_bracket(const Rational& y, unsigned long n, long prec) {
    if (sgn(y) == 0) {
        return Interval(Rational(0));
    }
    if (n == 1) {
        return Interval(y);
    }
    if (auto r = exact_root(y, n)) {
        return Interval(*r);
    }
    Mpfr yd(prec), yu(prec), rd(prec), ru(prec);
    mpfr_set_q(yd.get(), y.get_mpq_t(), MPFR_RNDD);
    mpfr_set_q(yu.get(), y.get_mpq_t(), MPFR_RNDU);
    mpfr_rootn_ui(rd.get(), yd.get(), n, MPFR_RNDD);
    mpfr_rootn_ui(ru.get(), yu.get(), n, MPFR_RNDU);
    return Interval(rd.to_rational(), ru.to_rational());
}

unsigned long to_ulong(const Integer& z) {
    if (!z.fits_ulong_p()) {
        throw Error("exponent component too large");
    }
    return z.get_ui();
}

// x^e for rational x >= 0 and rational e = a/b > 0: (x^a)^(1/b).
Interval pow_rational_bracket(const Rational& x, const Rational& e, long prec) {
    unsigned long a = to_ulong(e.get_num());
    unsigned long b = to_ulong(e.get_den());
    return root_bracket(pow_int(x, a), b, prec);
}

// x^e for x >= 0 where e ranges over the interval [e_lo, e_hi], e_lo > 0.
Interval pow_general_bracket(const Rational& x, const Interval& e, long prec) {
    if (sgn(x) == 0) {
        return Interval(Rational(0));
    }
    Mpfr xd(prec), xu(prec), el(prec), eh(prec), t(prec);
    mpfr_set_q(xd.get(), x.get_mpq_t(), MPFR_RNDD);
    mpfr_set_q(xu.get(), x.get_mpq_t(), MPFR_RNDU);
    mpfr_set_q(el.get(), e.lo().get_mpq_t(), MPFR_RNDD);
    mpfr_set_q(eh.get(), e.hi().get_mpq_t(), MPFR_RNDU);
    // t -> x^t is monotone, so the extremes sit at the exponent endpoints.
    mpfr_pow(t.get(), xd.get(), el.get(), MPFR_RNDD);
    Rational lo = t.to_rational();
    mpfr_pow(t.get(), xd.get(), eh.get(), MPFR_RNDD);
    lo = std::min(lo, t.to_rational());
    mpfr_pow(t.get(), xu.get(), el.get(), MPFR_RNDU);
    Rational hi = t.to_rational();
    mpfr_pow(t.get(), xu.get(), eh.get(), MPFR_RNDU);
    hi = std::max(hi, t.to_rational());
    return Interval(lo, hi);
}

// x^e where e is the exponent p scaled by `scale` (so p/2 for |z|^p from
// |z|^2, 1/p for roots).
enum class Power { kP, kHalfP, kInverseP };

Interval scaled_exponent(const Exponent& p, Power which, long prec) {
    Interval pe = p.refine(prec);
    switch (which) {
        case Power::kP:
            return pe;
        case Power::kHalfP:
            return Interval(pe.lo() / 2, pe.hi() / 2);
        case Power::kInverseP: {
            Rational lo = std::max(pe.lo(), Rational(1));
            Rational hi = std::max(pe.hi(), Rational(1));
            return Interval(1 / hi, 1 / lo);
        }
    }
    throw std::logic_error("unreachable");
}

Rational rational_scaled(const Rational& p, Power which) {
    switch (which) {
        case Power::kP:
            return p;
        case Power::kHalfP:
            return p / 2;
        case Power::kInverseP:
            return 1 / p;
    }
    throw std::logic_error("unreachable");
}

Interval power_bracket(const Rational& x, const Exponent& p, Power which, long prec) {
    if (sgn(x) == 0) {
        return Interval(Rational(0));
    }
    if (p.is_rational()) {
        return pow_rational_bracket(x, rational_scaled(p.value(), which), prec);
    }
    return pow_general_bracket(x, scaled_exponent(p, which, prec), prec);
}

// Applies a monotone increasing power map to an interval, refining working
// precision until the rounding contribution is at most 2^-k.
Interval monotone_power(const Interval& x, const Exponent& p, Power which, long k) {
    if (sgn(x.lo()) < 0) {
        throw NegativeInputError("power of an interval with negative lower end");
    }
    const Rational target = pow2(-k);
    for (long prec = k + 32 + bits_of(x.mag()); prec <= kPrecisionCap; prec *= 2) {
        Interval lo = power_bracket(x.lo(), p, which, prec);
        Interval hi = x.is_point() ? lo : power_bracket(x.hi(), p, which, prec);
        if (lo.width() + hi.width() <= target) {
            return Interval(lo.lo(), hi.hi());
        }
    }
    throw Error("power evaluation exceeded the precision cap");
}

}  // namespace

Interval refine_until(long k, const std::function<Interval(long)>& eval) {
    const Rational target = pow2(-k);
    for (long extra = 8; k + extra <= kPrecisionCap; extra *= 2) {
        Interval r = eval(k + extra);
        if (r.width() <= target) {
            return r;
        }
    }
    throw Error("enclosure refinement exceeded the precision cap");
}

// ---------------------------------------------------------------- Enclosure

Enclosure::Enclosure(Rational exact)
    : state_(std::make_shared<const State>(State{exact, [exact](long) { return Interval(exact); }})) {}

Enclosure Enclosure::from_generator(Generator g) {
    return Enclosure(std::make_shared<const State>(State{std::nullopt, std::move(g)}));
}

Interval Enclosure::refine(long k) const {
    if (state_->exact) {
        return Interval(*state_->exact);
    }
    Interval r = state_->generator(k);
    if (!r.width_at_most_pow2(k)) {
        throw Error("enclosure generator violated its width contract");
    }
    return r;
}

namespace {

// Tries increasing extra precision until the combination meets 2^-k.
Interval tighten(long k, const std::function<Interval(long extra)>& eval) {
    const Rational target = pow2(-k);
    for (long extra = 2; extra <= kPrecisionCap; extra *= 2) {
        Interval r = eval(extra);
        if (r.width() <= target) {
            return r;
        }
    }
    throw Error("enclosure arithmetic exceeded the precision cap");
}

}  // namespace

Enclosure operator+(const Enclosure& a, const Enclosure& b) {
    if (a.is_exact() && b.is_exact()) {
        return Enclosure(*a.exact() + *b.exact());
    }
    return Enclosure::from_generator([a, b](long k) {
        return tighten(k, [&](long extra) { return a.refine(k + extra) + b.refine(k + extra); });
    });
}

Enclosure operator-(const Enclosure& a) {
    if (a.is_exact()) {
        return Enclosure(-*a.exact());
    }
    return Enclosure::from_generator([a](long k) { return -a.refine(k); });
}

Enclosure operator-(const Enclosure& a, const Enclosure& b) { return a + (-b); }

Enclosure operator*(const Enclosure& a, const Enclosure& b) {
    if (a.is_exact() && b.is_exact()) {
        return Enclosure(*a.exact() * *b.exact());
    }
    return Enclosure::from_generator([a, b](long k) {
        const long ba = bits_of(a.refine(0).mag() + 1);
        const long bb = bits_of(b.refine(0).mag() + 1);
        return tighten(k, [&](long extra) {
            return a.refine(k + extra + bb) * b.refine(k + extra + ba);
        });
    });
}

Enclosure Enclosure::reciprocal() const {
    if (is_exact()) {
        if (sgn(*exact()) == 0) {
            throw std::domain_error("reciprocal of exact zero");
        }
        return Enclosure(1 / *exact());
    }
    Enclosure self = *this;
    return Enclosure::from_generator([self](long k) {
        long j = 0;
        Interval sep = self.refine(j);
        while (sep.contains_zero()) {
            if (++j > kPrecisionCap) {
                throw Error("reciprocal: could not separate value from zero");
            }
            sep = self.refine(j);
        }
        const Rational m = std::min(abs(sep.lo()), abs(sep.hi()));
        const long bm = bits_of(1 / m);
        return tighten(k, [&](long extra) {
            Interval x = self.refine(k + 2 * bm + extra);
            Interval clipped(std::max(x.lo(), sep.lo()), std::min(x.hi(), sep.hi()));
            return lpiso::reciprocal(clipped);
        });
    });
}

Enclosure Enclosure::pow(const Exponent& p) const {
    if (is_exact()) {
        Interval probe = pow_interval(Interval(*exact()), p, 0);
        if (probe.is_point()) {
            return Enclosure(probe.lo());
        }
    }
    Enclosure self = *this;
    return Enclosure::from_generator([self, p](long k) {
        const long grow = bits_of(self.refine(0).hi() + 1) * (1 + bits_of(p.refine(0).hi() + 1));
        return tighten(k, [&](long extra) {
            Interval x = self.refine(k + extra + grow);
            Interval clamped(std::max(x.lo(), Rational(0)), std::max(x.hi(), Rational(0)));
            return pow_interval(clamped, p, k + 1);
        });
    });
}

Enclosure Enclosure::root(const Exponent& p) const {
    if (is_exact()) {
        Interval probe = lpiso::root(Interval(*exact()), p, 0);
        if (probe.is_point()) {
            return Enclosure(probe.lo());
        }
    }
    Enclosure self = *this;
    return Enclosure::from_generator([self, p](long k) {
        const long pb = bits_of(p.refine(0).hi() + 1);
        return tighten(k, [&](long extra) {
            // Near zero the root is only Holder continuous, so the input
            // precision scales with p.
            Interval x = self.refine((k + extra) * (1L << pb));
            Interval clamped(std::max(x.lo(), Rational(0)), std::max(x.hi(), Rational(0)));
            return lpiso::root(clamped, p, k + 1);
        });
    });
}

// ----------------------------------------------------------------- Exponent

Exponent::Exponent(Rational p) : rational_(p), value_(p) {
    if (p < 1) {
        throw std::invalid_argument("exponent must satisfy p >= 1");
    }
}

Exponent::Exponent(Enclosure p) : value_(std::move(p)) {
    if (value_.is_exact()) {
        rational_ = *value_.exact();
        if (*rational_ < 1) {
            throw std::invalid_argument("exponent must satisfy p >= 1");
        }
    } else if (value_.refine(32).hi() < 1) {
        throw std::invalid_argument("exponent must satisfy p >= 1");
    }
}

const Rational& Exponent::value() const {
    if (!rational_) {
        throw std::logic_error("exponent is not an exact rational");
    }
    return *rational_;
}

Interval Exponent::refine(long k) const { return value_.refine(k); }

bool Exponent::is_integer() const { return rational_ && rational_->get_den() == 1; }

bool Exponent::certified_not_two(long max_k) const {
    if (rational_) {
        return *rational_ != 2;
    }
    for (long k = 0; k <= max_k; ++k) {
        if (!value_.refine(k).contains(Rational(2))) {
            return true;
        }
    }
    return false;
}

void Exponent::require_not_two() const {
    if (!certified_not_two()) {
        throw PEqualsTwoError("exponent p = " + to_string() + " is not certified different from 2");
    }
}

bool Exponent::same_as(const Exponent& other) const {
    if (rational_ && other.rational_) {
        return *rational_ == *other.rational_;
    }
    return false;
}

std::string Exponent::to_string() const {
    if (rational_) {
        return lpiso::to_string(*rational_);
    }
    Interval r = value_.refine(20);
    return "~" + std::to_string(to_double(r.mid()));
}

// ------------------------------------------------------------- evaluations

Interval pow_abs(const ComplexRational& z, const Exponent& p, long k) {
    const Rational a2 = z.abs2();
    if (sgn(a2) == 0) {
        return Interval(Rational(0));
    }
    if (p.is_integer()) {
        const unsigned long n = to_ulong(p.value().get_num());
        if (n % 2 == 0) {
            return Interval(pow_int(a2, n / 2));
        }
        if (auto r = exact_root(a2, 2)) {
            return Interval(pow_int(*r, n));
        }
    }
    const Rational target = pow2(-k);
    for (long prec = k + 32 + bits_of(a2) * (1 + bits_of(p.refine(0).hi())); prec <= kPrecisionCap;
         prec *= 2) {
        Interval r = power_bracket(a2, p, Power::kHalfP, prec);
        if (r.width() <= target) {
            return r;
        }
    }
    throw Error("pow_abs exceeded the precision cap");
}

Interval pow_interval(const Interval& x, const Exponent& p, long k) {
    return monotone_power(x, p, Power::kP, k);
}

Interval root(const Interval& x, const Exponent& p, long k) {
    if (sgn(x.lo()) < 0) {
        throw NegativeInputError("root of an interval with negative lower end " + to_string(x.lo()));
    }
    return monotone_power(x, p, Power::kInverseP, k);
}

Interval two_pow(const Exponent& p, long k) { return pow_interval(Interval(Rational(2)), p, k); }

Interval sigma_constant(const Exponent& p, long k) {
    p.require_not_two();
    return refine_until(k, [&](long j) {
        // (sqrt 2)^p = 2^(p/2)
        const Rational target = pow2(-j);
        Interval s;
        for (long prec = j + 16;; prec *= 2) {
            if (prec > kPrecisionCap) {
                throw Error("sigma_constant exceeded the precision cap");
            }
            s = power_bracket(Rational(2), p, Power::kHalfP, prec);
            if (s.width() <= target) {
                break;
            }
        }
        Interval d = abs(Interval(Rational(4)) - Rational(2) * s);
        if (d.contains_zero()) {
            // Too coarse to separate from p = 2; the caller retries finer.
            return Interval(Rational(0), pow2(j));
        }
        return reciprocal(d);
    });
}

}  // namespace lpiso
