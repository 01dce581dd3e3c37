#pragma once

// Shared helpers for the test binaries: exact decimal constants, seeded random
// instances and a floating point brute-force oracle that never calls the
// library's norm code.

#include "lpiso/certificate.hpp"
#include "lpiso/isometry.hpp"
#include "lpiso/lattice.hpp"
#include "lpiso/presentation.hpp"
#include "lpiso/sigma.hpp"

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace lpiso::testing {

// Exact value of a decimal literal such as "0.8535533905932737622".
inline Rational dec(const std::string& s) {
    const auto dot = s.find('.');
    if (dot == std::string::npos) {
        return parse_rational(s);
    }
    std::string digits = s.substr(0, dot) + s.substr(dot + 1);
    const bool neg = !digits.empty() && digits[0] == '-';
    if (neg) {
        digits.erase(0, 1);
    }
    Integer num(digits, 10);
    Integer den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, s.size() - dot - 1);
    Rational q(num, den);
    q.canonicalize();
    return neg ? Rational(-q) : q;
}

// x lies in I up to the truncation error of a 40 digit oracle constant.
inline bool encloses(const Interval& I, const std::string& oracle) {
    const Rational x = dec(oracle);
    const Rational slack = dec("0.000000000000000000000000000000000001");
    return I.lo() - slack <= x && x <= I.hi() + slack;
}

inline StepFn chi(const Rational& lo, const Rational& hi) { return StepFn::indicator(lo, hi); }
inline StepFn chi(long a, long b, long d) { return StepFn::indicator(ratio(a, d), ratio(b, d)); }

class Rng {
public:
    explicit Rng(std::uint64_t seed) : g_(seed) {}
    std::uint64_t next() { return g_(); }
    long range(long lo, long hi) { return lo + static_cast<long>(g_() % (hi - lo + 1)); }
    bool coin() { return g_() & 1; }
    Rational rational(long span = 8, long den = 4) { return ratio(range(-span, span), den); }
    Rational nonzero_rational(long span = 8, long den = 4) {
        while (true) {
            Rational q = rational(span, den);
            if (sgn(q) != 0) {
                return q;
            }
        }
    }
    ComplexRational complex(long span = 8, long den = 4) {
        return {rational(span, den), coin() ? rational(span, den) : Rational(0)};
    }
    ComplexRational nonzero_complex(long span = 8, long den = 4) {
        while (true) {
            ComplexRational z = complex(span, den);
            if (!z.is_zero()) {
                return z;
            }
        }
    }

    // Random step function on the grid of width 1/cells over [lo, hi).
    StepFn step(const Rational& lo, const Rational& hi, long cells = 8, bool allow_zero = true) {
        std::vector<StepFn::Piece> pieces;
        const Rational w = (hi - lo) / cells;
        for (long c = 0; c < cells; ++c) {
            ComplexRational v = allow_zero && range(0, 3) == 0 ? ComplexRational() : nonzero_complex();
            pieces.push_back({lo + c * w, lo + (c + 1) * w, v});
        }
        return StepFn::from_pieces(pieces);
    }

    // A separating antitone map on a tree (root included when with_root) of
    // depth <= max_depth: each child restricts its parent to a fresh block of
    // the parent's support grid.
    NodeMap tree_map(int max_depth, std::size_t max_nodes, bool with_root = true,
                     bool indicators = false) {
        NodeMap m;
        const StepFn top = indicators ? chi(0, 1, 1) : step(0, 1, 16, false);
        std::vector<std::pair<Node, std::pair<Rational, Rational>>> frontier;
        if (with_root) {
            m[kRoot] = top;
            frontier.push_back({kRoot, {0, 1}});
        } else {
            const long tops = range(1, 3);
            const Rational w = ratio(1, tops);
            for (long i = 0; i < tops && m.size() < max_nodes; ++i) {
                const Rational lo = i * w;
                const Rational hi = (i + 1) * w;
                if (i > 0 && coin()) {
                    continue;
                }
                const Node nu{static_cast<std::uint32_t>(m.size())};
                m[nu] = top.restrict_to(DyadicSet::interval(lo, hi));
                if (m[nu].is_zero()) {
                    m.erase(nu);
                    continue;
                }
                frontier.push_back({nu, {lo, hi}});
            }
        }
        std::size_t at = 0;
        while (at < frontier.size() && m.size() < max_nodes) {
            const auto [nu, span] = frontier[at++];
            if (static_cast<int>(nu.size()) >= max_depth) {
                continue;
            }
            const Rational w = (span.second - span.first) / 4;
            std::uint32_t idx = 0;
            long q = 0;
            while (q < 4 && m.size() < max_nodes) {
                const long b = std::min(4L, q + range(1, 2));
                const Rational lo = span.first + q * w;
                const Rational hi = span.first + b * w;
                q = b;
                if (range(0, 2) == 0) {
                    continue;
                }
                StepFn v = m.at(nu).restrict_to(DyadicSet::interval(lo, hi));
                // Sometimes drop a tail so children are proper subvectors.
                if (!indicators && coin()) {
                    v = v.restrict_to(DyadicSet::interval(lo, lo + (hi - lo) * 3 / 4));
                }
                bool dup = v.is_zero();
                for (const auto& [mu, f] : m) {
                    dup = dup || f == v;
                }
                if (dup) {
                    continue;
                }
                const Node ch = child(nu, idx++);
                m[ch] = v;
                frontier.push_back({ch, {lo, hi}});
            }
        }
        return m;
    }

    Coefficients coefficients(const NodeMap& phi) {
        Coefficients g;
        for (const auto& [nu, f] : phi) {
            if (coin()) {
                g[nu] = complex();
            }
        }
        return g;
    }

private:
    std::mt19937_64 g_;
};

// Floating point evaluation of sum len |v|^p, straight from the pieces.
inline double mass_double(const StepFn& f, double p) {
    double s = 0;
    for (const auto& pc : f.pieces()) {
        const std::complex<double> z(to_double(pc.value.re), to_double(pc.value.im));
        s += to_double(pc.hi - pc.lo) * std::pow(std::abs(z), p);
    }
    return s;
}

// Brute-force minimum of ||v - sum b_i cols_i||_p over real b_i on the grid
// step * Z within [-radius, radius], by exhaustive enumeration. Works on the
// cell table so no library norm code is involved.
inline double grid_min_distance(const StepFn& v, const std::vector<StepFn>& cols, double p,
                                double step, double radius) {
    std::vector<Rational> br = v.breaks();
    for (const auto& c : cols) {
        br = merge_breaks(br, c.breaks());
    }
    const std::size_t cells = br.size() - 1;
    std::vector<double> len(cells);
    std::vector<std::complex<double>> target(cells);
    std::vector<std::vector<std::complex<double>>> basis(cols.size(), std::vector<std::complex<double>>(cells));
    for (std::size_t c = 0; c < cells; ++c) {
        len[c] = to_double(br[c + 1] - br[c]);
        const ComplexRational a = v.at(br[c]);
        target[c] = {to_double(a.re), to_double(a.im)};
        for (std::size_t i = 0; i < cols.size(); ++i) {
            const ComplexRational b = cols[i].at(br[c]);
            basis[i][c] = {to_double(b.re), to_double(b.im)};
        }
    }
    const long steps = static_cast<long>(std::llround(2 * radius / step));
    std::vector<long> idx(cols.size(), 0);
    double best = INFINITY;
    while (true) {
        double s = 0;
        for (std::size_t c = 0; c < cells; ++c) {
            std::complex<double> r = target[c];
            for (std::size_t i = 0; i < cols.size(); ++i) {
                r -= (-radius + step * idx[i]) * basis[i][c];
            }
            s += len[c] * std::pow(std::abs(r), p);
        }
        best = std::min(best, std::pow(s, 1.0 / p));
        std::size_t i = 0;
        while (i < idx.size() && ++idx[i] > steps) {
            idx[i++] = 0;
        }
        if (i == idx.size()) {
            break;
        }
    }
    return best;
}

// Exhaustive grids of shrinking step around the previous best point, for
// real data (the optimum over complex coefficients is then real). Each level
// enumerates (2 * half + 1)^n points; the last level has step `finest`.
inline double refined_grid_min(const StepFn& v, const std::vector<StepFn>& cols, double p,
                               double radius, double finest, long half = 8) {
    std::vector<Rational> br = v.breaks();
    for (const auto& c : cols) {
        br = merge_breaks(br, c.breaks());
    }
    const std::size_t cells = br.size() - 1;
    const std::size_t n = cols.size();
    std::vector<double> len(cells);
    std::vector<double> target(cells);
    std::vector<std::vector<double>> basis(n, std::vector<double>(cells));
    for (std::size_t c = 0; c < cells; ++c) {
        len[c] = to_double(br[c + 1] - br[c]);
        target[c] = to_double(v.at(br[c]).re);
        for (std::size_t i = 0; i < n; ++i) {
            basis[i][c] = to_double(cols[i].at(br[c]).re);
        }
    }
    auto objective = [&](const std::vector<double>& x) {
        double s = 0;
        for (std::size_t c = 0; c < cells; ++c) {
            double r = target[c];
            for (std::size_t i = 0; i < n; ++i) {
                r -= x[i] * basis[i][c];
            }
            s += len[c] * std::pow(std::abs(r), p);
        }
        return std::pow(s, 1.0 / p);
    };
    std::vector<double> center(n, 0.0);
    double best = objective(center);
    double step = radius / half;
    while (true) {
        std::vector<long> idx(n, -half);
        std::vector<double> best_x = center;
        std::vector<double> x(n);
        while (true) {
            for (std::size_t i = 0; i < n; ++i) {
                x[i] = center[i] + step * idx[i];
            }
            const double f = objective(x);
            if (f < best) {
                best = f;
                best_x = x;
            }
            std::size_t i = 0;
            while (i < n && ++idx[i] > half) {
                idx[i++] = -half;
            }
            if (i == n) {
                break;
            }
        }
        center = best_x;
        if (step <= finest) {
            return best;
        }
        step = std::max(finest, step / half);
    }
}

inline std::vector<StepFn> values_of(const NodeMap& m) {
    std::vector<StepFn> out;
    for (const auto& [nu, f] : m) {
        out.push_back(f);
    }
    return out;
}

}  // namespace lpiso::testing
