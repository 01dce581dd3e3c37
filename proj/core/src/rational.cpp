#include "lpiso/rational.hpp"

#include "lpiso/errors.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

namespace lpiso {

namespace {

bool is_integer_literal(std::string_view s) {
    if (s.empty()) {
        return false;
    }
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) {
        return false;
    }
    for (; i < s.size(); ++i) {
        if (s[i] < '0' || s[i] > '9') {
            return false;
        }
    }
    return true;
}

Integer parse_integer(std::string_view s) {
    if (!is_integer_literal(s)) {
        throw ParseError("malformed rational literal component '" + std::string(s) + "'");
    }
    if (s[0] == '+') {
        s.remove_prefix(1);
    }
    return Integer(std::string(s), 10);
}

}  // namespace

Rational parse_rational(std::string_view text) {
    auto slash = text.find('/');
    if (slash == std::string_view::npos) {
        return Rational(parse_integer(text));
    }
    Integer num = parse_integer(text.substr(0, slash));
    std::string_view den_text = text.substr(slash + 1);
    if (!den_text.empty() && den_text[0] == '-') {
        throw ParseError("rational literal with negative denominator: " + std::string(text));
    }
    Integer den = parse_integer(den_text);
    if (den == 0) {
        throw ParseError("rational literal with zero denominator: " + std::string(text));
    }
    Rational q(num, den);
    q.canonicalize();
    return q;
}

std::string to_string(const Rational& q) { return q.get_str(); }

Rational ratio(long n, long d) {
    Rational q(n, d);
    q.canonicalize();
    return q;
}

Rational pow_int(const Rational& base, unsigned long exponent) {
    Integer num;
    Integer den;
    mpz_pow_ui(num.get_mpz_t(), base.get_num_mpz_t(), exponent);
    mpz_pow_ui(den.get_mpz_t(), base.get_den_mpz_t(), exponent);
    return Rational(num, den);  // already coprime
}

Rational pow2(long e) {
    Integer one(1);
    Integer p;
    mpz_mul_2exp(p.get_mpz_t(), one.get_mpz_t(), static_cast<mp_bitcnt_t>(e >= 0 ? e : -e));
    return e >= 0 ? Rational(p) : Rational(one, p);
}

long floor_log2(const Rational& q) {
    if (sgn(q) == 0) {
        throw std::domain_error("floor_log2 of zero");
    }
    Rational a = abs(q);
    long e = static_cast<long>(mpz_sizeinbase(a.get_num_mpz_t(), 2)) -
             static_cast<long>(mpz_sizeinbase(a.get_den_mpz_t(), 2));
    // 2^(e-1) < a < 2^(e+1); settle the boundary exactly.
    if (a >= pow2(e)) {
        return e;
    }
    return e - 1;
}

Rational floor_to_dyadic(const Rational& q, long bits) {
    Rational scaled = q * pow2(bits);
    Integer f;
    mpz_fdiv_q(f.get_mpz_t(), scaled.get_num_mpz_t(), scaled.get_den_mpz_t());
    return Rational(f) * pow2(-bits);
}

Rational ceil_to_dyadic(const Rational& q, long bits) {
    Rational scaled = q * pow2(bits);
    Integer c;
    mpz_cdiv_q(c.get_mpz_t(), scaled.get_num_mpz_t(), scaled.get_den_mpz_t());
    return Rational(c) * pow2(-bits);
}

double to_double(const Rational& q) { return q.get_d(); }

Rational from_double(double x) {
    if (!std::isfinite(x)) {
        throw std::domain_error("from_double: non-finite value");
    }
    Rational q;
    mpq_set_d(q.get_mpq_t(), x);
    return q;
}

ComplexRational operator/(const ComplexRational& a, const ComplexRational& b) {
    Rational d = b.abs2();
    if (sgn(d) == 0) {
        throw std::domain_error("complex division by zero");
    }
    ComplexRational n = a * b.conj();
    return {n.re / d, n.im / d};
}

bool lex_less(const ComplexRational& a, const ComplexRational& b) {
    if (a.re != b.re) {
        return a.re < b.re;
    }
    return a.im < b.im;
}

std::ostream& operator<<(std::ostream& os, const ComplexRational& z) {
    os << to_string(z.re);
    if (sgn(z.im) != 0) {
        os << (sgn(z.im) > 0 ? "+" : "-") << to_string(abs(z.im)) << "i";
    }
    return os;
}

}  // namespace lpiso
