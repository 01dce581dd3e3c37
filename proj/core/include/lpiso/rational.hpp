#pragma once

#include <gmpxx.h>

#include <compare>
#include <iosfwd>
#include <string>
#include <string_view>

namespace lpiso {

// Arbitrary precision rationals; gmpxx keeps arithmetic results in lowest
// terms with a positive denominator.
using Rational = mpq_class;
using Integer = mpz_class;

// Accepts "n", "n/d" and "-n/d". Throws ParseError on anything else or a zero
// denominator.
Rational parse_rational(std::string_view text);

// Canonical "num/den" form ("num" when the denominator is 1).
std::string to_string(const Rational& q);

// n/d in lowest terms (the two-argument mpq_class constructor does not
// canonicalise).
Rational ratio(long n, long d);

Rational pow_int(const Rational& base, unsigned long exponent);

// 2^e for any integer e.
Rational pow2(long e);

// floor(log2 |q|) for nonzero q.
long floor_log2(const Rational& q);

Rational floor_to_dyadic(const Rational& q, long bits);
Rational ceil_to_dyadic(const Rational& q, long bits);

double to_double(const Rational& q);

// Exact conversion of a finite double.
Rational from_double(double x);

/// Elements of Q(i).
struct ComplexRational {
    Rational re;
    Rational im;

    ComplexRational() = default;
    ComplexRational(Rational real) : re(std::move(real)) {}
    ComplexRational(Rational real, Rational imag) : re(std::move(real)), im(std::move(imag)) {}
    ComplexRational(int real) : re(real) {}

    bool is_zero() const { return sgn(re) == 0 && sgn(im) == 0; }

    /// |z|^2, which is always rational.
    Rational abs2() const { return re * re + im * im; }

    ComplexRational conj() const { return {re, -im}; }

    friend ComplexRational operator+(const ComplexRational& a, const ComplexRational& b) {
        return {a.re + b.re, a.im + b.im};
    }
    friend ComplexRational operator-(const ComplexRational& a, const ComplexRational& b) {
        return {a.re - b.re, a.im - b.im};
    }
    friend ComplexRational operator-(const ComplexRational& a) { return {-a.re, -a.im}; }
    friend ComplexRational operator*(const ComplexRational& a, const ComplexRational& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    // Division by zero is a precondition violation (std::domain_error).
    friend ComplexRational operator/(const ComplexRational& a, const ComplexRational& b);

    ComplexRational& operator+=(const ComplexRational& b) { return *this = *this + b; }
    ComplexRational& operator-=(const ComplexRational& b) { return *this = *this - b; }
    ComplexRational& operator*=(const ComplexRational& b) { return *this = *this * b; }

    friend bool operator==(const ComplexRational& a, const ComplexRational& b) {
        return a.re == b.re && a.im == b.im;
    }
};

// Lexicographic on (re, im); only used to give containers a deterministic order.
bool lex_less(const ComplexRational& a, const ComplexRational& b);

std::ostream& operator<<(std::ostream& os, const ComplexRational& z);

}  // namespace lpiso
