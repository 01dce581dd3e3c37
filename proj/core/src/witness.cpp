#include "lpiso/witness.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>

namespace lpiso {

namespace {

struct Table {
    std::vector<Rational> breaks;
    std::vector<ComplexRational> b;               // per cell
    std::vector<std::vector<ComplexRational>> a;  // per column, per cell
};

Table tabulate(const StepFn& v, const std::vector<StepFn>& cols) {
    Table t;
    t.breaks = v.breaks();
    for (const auto& c : cols) {
        t.breaks = merge_breaks(t.breaks, c.breaks());
    }
    t.b = v.values_on(t.breaks);
    for (const auto& c : cols) {
        t.a.push_back(c.values_on(t.breaks));
    }
    return t;
}

StepFn residual_fn(const StepFn& v, const std::vector<StepFn>& cols,
                   const std::vector<ComplexRational>& beta) {
    std::vector<std::pair<ComplexRational, StepFn>> terms;
    terms.emplace_back(ComplexRational(1), v);
    for (std::size_t i = 0; i < cols.size(); ++i) {
        if (!beta[i].is_zero()) {
            terms.emplace_back(-beta[i], cols[i]);
        }
    }
    return linear_combine(terms);
}

ComplexRational snap(const std::complex<double>& z, long bits) {
    auto one = [&](double x) -> Rational {
        if (!std::isfinite(x)) {
            return Rational(0);
        }
        const double scaled = std::round(std::ldexp(x, static_cast<int>(bits)));
        return Rational(from_double(scaled) * pow2(-bits));
    };
    return {one(z.real()), one(z.imag())};
}

// Nearest fraction with denominator <= maxden (Stern-Brocot via continued
// fractions of the double).
Rational small_fraction(double x, long maxden) {
    if (!std::isfinite(x)) {
        return 0;
    }
    const bool neg = x < 0;
    double y = std::fabs(x);
    long h0 = 0, h1 = 1, k0 = 1, k1 = 0;
    for (int it = 0; it < 40; ++it) {
        const double a = std::floor(y);
        const long ai = static_cast<long>(a);
        const long h2 = ai * h1 + h0;
        const long k2 = ai * k1 + k0;
        if (k2 > maxden || h2 > (1L << 40)) {
            break;
        }
        h0 = h1, h1 = h2, k0 = k1, k1 = k2;
        const double frac = y - a;
        if (frac < 1e-12) {
            break;
        }
        y = 1.0 / frac;
    }
    if (k1 == 0) {
        return 0;
    }
    Rational r(h1, k1);
    r.canonicalize();
    return neg ? Rational(-r) : r;
}

struct DoubleProblem {
    Eigen::MatrixXcd A;
    Eigen::VectorXcd b;
    Eigen::VectorXd len;
    double p = 1;

    double objective(const Eigen::VectorXcd& x) const {
        const Eigen::VectorXcd r = b - A * x;
        double s = 0;
        for (Eigen::Index c = 0; c < r.size(); ++c) {
            s += len(c) * std::pow(std::abs(r(c)), p);
        }
        return s;
    }
};

DoubleProblem to_double_problem(const Table& t, const Exponent& p) {
    const std::size_t m = t.b.size();
    const std::size_t n = t.a.size();
    DoubleProblem d;
    d.A.resize(m, n);
    d.b.resize(m);
    d.len.resize(m);
    for (std::size_t c = 0; c < m; ++c) {
        d.b(c) = {to_double(t.b[c].re), to_double(t.b[c].im)};
        d.len(c) = to_double(t.breaks[c + 1] - t.breaks[c]);
        for (std::size_t i = 0; i < n; ++i) {
            d.A(c, i) = {to_double(t.a[i][c].re), to_double(t.a[i][c].im)};
        }
    }
    d.p = to_double(p.refine(30).mid());
    return d;
}

// Smoothed IRLS on sum len (|r|^2 + eps^2)^(p/2). eps only shrinks once the
// smoothed problem stops improving; updates are damped for p > 2 where the
// plain fixed point iteration oscillates.
Eigen::VectorXcd irls(const DoubleProblem& d, int iterations) {
    const Eigen::Index m = d.b.size();
    const Eigen::Index n = d.A.cols();
    auto weighted_solve = [&](const Eigen::VectorXd& w) {
        const Eigen::VectorXd sw = w.cwiseSqrt();
        const Eigen::MatrixXcd WA = sw.asDiagonal() * d.A;
        const Eigen::VectorXcd Wb = sw.asDiagonal() * d.b;
        return Eigen::VectorXcd(WA.completeOrthogonalDecomposition().solve(Wb));
    };
    Eigen::VectorXcd x = weighted_solve(d.len);
    Eigen::VectorXcd best = x;
    double best_f = d.objective(x);
    if (std::fabs(d.p - 2.0) < 1e-12) {
        return x;
    }
    double eps = std::max((d.b - d.A * x).cwiseAbs().maxCoeff(), 1e-3);
    const double damp = d.p > 2 ? 1.0 / (d.p - 1.0) : 1.0;
    double prev = INFINITY;
    Eigen::VectorXd w(m);
    for (int it = 0; it < iterations; ++it) {
        const Eigen::VectorXcd r = d.b - d.A * x;
        for (Eigen::Index c = 0; c < m; ++c) {
            w(c) = d.len(c) * std::pow(std::norm(r(c)) + eps * eps, (d.p - 2.0) / 2.0);
        }
        x = x + damp * (weighted_solve(w) - x);
        const double f = d.objective(x);
        if (f < best_f) {
            best_f = f;
            best = x;
        }
        if (f > prev * (1 - 1e-6)) {
            eps = std::max(eps / 4, 1e-12);
        }
        prev = f;
    }
    (void)n;
    return best;
}

// Pattern search on the exact objective along coordinate and imaginary
// directions, then along the differences of coordinates (which moves along
// kinks of the p = 1 objective).
Eigen::VectorXcd polish(const DoubleProblem& d, Eigen::VectorXcd x) {
    const Eigen::Index n = x.size();
    double f = d.objective(x);
    double h = 1.0 / 16;
    std::vector<Eigen::VectorXcd> dirs;
    for (Eigen::Index i = 0; i < n; ++i) {
        Eigen::VectorXcd e = Eigen::VectorXcd::Zero(n);
        e(i) = 1;
        dirs.push_back(e);
        e(i) = std::complex<double>(0, 1);
        dirs.push_back(e);
    }
    for (Eigen::Index i = 0; i < n && n <= 8; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            Eigen::VectorXcd e = Eigen::VectorXcd::Zero(n);
            e(i) = 1;
            e(j) = 1;
            dirs.push_back(e);
            e(j) = -1;
            dirs.push_back(e);
        }
    }
    // Each evaluation costs O(cells * n); keep the total near a few million
    // flops.
    const long cost = static_cast<long>(d.b.size()) * std::max<Eigen::Index>(n, 1);
    const long max_evals = std::clamp(4000000L / std::max(cost, 1L), 200L, 20000L);
    long evals = 0;
    while (h > 1e-11 && evals < max_evals) {
        bool moved = false;
        for (const auto& e : dirs) {
            for (double s : {1.0, -1.0}) {
                const Eigen::VectorXcd y = x + (s * h) * e;
                const double fy = d.objective(y);
                ++evals;
                if (fy < f) {
                    f = fy;
                    x = y;
                    moved = true;
                }
            }
        }
        if (!moved) {
            h /= 2;
        }
    }
    return x;
}

std::vector<std::complex<double>> approximate_minimizer(const Table& t, const Exponent& p,
                                                        int iterations) {
    const DoubleProblem d = to_double_problem(t, p);
    const Eigen::VectorXcd x = polish(d, irls(d, iterations));
    return std::vector<std::complex<double>>(x.data(), x.data() + x.size());
}

// Rational Gaussian elimination on the cell equations.
std::optional<std::vector<ComplexRational>> gauss(const Table& t) {
    const std::size_t n = t.a.size();
    std::vector<std::vector<ComplexRational>> rows;
    for (std::size_t c = 0; c < t.b.size(); ++c) {
        std::vector<ComplexRational> row(n + 1);
        bool any = !t.b[c].is_zero();
        for (std::size_t i = 0; i < n; ++i) {
            row[i] = t.a[i][c];
            any = any || !row[i].is_zero();
        }
        row[n] = t.b[c];
        if (any) {
            rows.push_back(std::move(row));
        }
    }
    std::vector<long> pivot_col;
    std::size_t r = 0;
    for (std::size_t col = 0; col < n && r < rows.size(); ++col) {
        std::size_t piv = r;
        while (piv < rows.size() && rows[piv][col].is_zero()) {
            ++piv;
        }
        if (piv == rows.size()) {
            continue;
        }
        std::swap(rows[r], rows[piv]);
        const ComplexRational inv = ComplexRational(1) / rows[r][col];
        for (std::size_t j = col; j <= n; ++j) {
            rows[r][j] *= inv;
        }
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (i == r || rows[i][col].is_zero()) {
                continue;
            }
            const ComplexRational f = rows[i][col];
            for (std::size_t j = col; j <= n; ++j) {
                rows[i][j] -= f * rows[r][j];
            }
        }
        pivot_col.push_back(static_cast<long>(col));
        ++r;
    }
    for (std::size_t i = r; i < rows.size(); ++i) {
        if (!rows[i][n].is_zero()) {
            return std::nullopt;
        }
    }
    std::vector<ComplexRational> x(n);
    for (std::size_t i = 0; i < r; ++i) {
        x[static_cast<std::size_t>(pivot_col[i])] = rows[i][n];
    }
    return x;
}

}  // namespace

std::optional<std::vector<ComplexRational>> solve_exact(const StepFn& v,
                                                        const std::vector<StepFn>& cols) {
    return gauss(tabulate(v, cols));
}

std::vector<ComplexRational> best_coefficients(const StepFn& v, const std::vector<StepFn>& cols,
                                               const Exponent& p, long k,
                                               const WitnessOptions& opt) {
    const std::size_t n = cols.size();
    if (n == 0 || v.is_zero()) {
        return std::vector<ComplexRational>(n);
    }
    const Table t = tabulate(v, cols);
    if (auto x = gauss(t)) {
        return *x;
    }
    const auto approx = approximate_minimizer(t, p, opt.irls_iterations);
    std::vector<std::vector<ComplexRational>> candidates;
    candidates.emplace_back(n);  // beta = 0
    for (long bits : {6L, 12L, 20L, 30L, 40L}) {
        std::vector<ComplexRational> c(n);
        for (std::size_t i = 0; i < n; ++i) {
            c[i] = snap(approx[i], bits);
        }
        candidates.push_back(std::move(c));
    }
    for (long den : {8L, 64L, 1024L}) {
        std::vector<ComplexRational> c(n);
        for (std::size_t i = 0; i < n; ++i) {
            c[i] = {small_fraction(approx[i].real(), den), small_fraction(approx[i].imag(), den)};
        }
        candidates.push_back(std::move(c));
    }
    std::size_t best = 0;
    Rational best_hi;
    for (std::size_t c = 0; c < candidates.size(); ++c) {
        const Rational hi = residual_fn(v, cols, candidates[c]).norm(p, k).hi();
        if (c == 0 || hi < best_hi) {
            best = c;
            best_hi = hi;
        }
    }
    return candidates[best];
}

namespace {

// span(psi) = span of the remainders nabla(nu) = psi(nu) - sum of children.
// When the remainders are disjointly supported (separating antitone maps)
// the best approximation splits into one scalar problem per node, and the
// coefficients over psi follow by telescoping along parents.
std::optional<std::vector<ComplexRational>> nabla_coefficients(const StepFn& v,
                                                               const std::vector<Node>& nodes,
                                                               const NodeMap& psi,
                                                               const Exponent& p, long k,
                                                               const WitnessOptions& opt) {
    std::map<Node, StepFn> nab;
    Rational total = 0;
    DyadicSet all;
    for (const auto& [nu, f] : psi) {
        StepFn r = f;
        for (const auto& c : children_of(psi, nu)) {
            r -= psi.at(c);
        }
        const DyadicSet s = r.support();
        total += s.measure();
        all = all | s;
        nab.emplace(nu, std::move(r));
    }
    if (total != all.measure()) {
        return std::nullopt;
    }
    std::map<Node, ComplexRational> c;
    for (const auto& [nu, r] : nab) {
        if (r.is_zero()) {
            c[nu] = ComplexRational();
            continue;
        }
        c[nu] = best_coefficients(v.restrict_to(r.support()), {r}, p, k, opt)[0];
    }
    std::vector<ComplexRational> beta;
    for (const auto& nu : nodes) {
        ComplexRational b = c.at(nu);
        if (!nu.empty()) {
            auto it = c.find(parent(nu));
            if (it != c.end()) {
                b -= it->second;
            }
        }
        beta.push_back(b);
    }
    return beta;
}

}  // namespace

Witness best_witness(const StepFn& v, const NodeMap& psi, const Exponent& p, long k,
                     const WitnessOptions& opt) {
    std::vector<Node> nodes;
    std::vector<StepFn> cols;
    for (const auto& [nu, f] : psi) {
        nodes.push_back(nu);
        cols.push_back(f);
    }
    std::vector<std::vector<ComplexRational>> candidates;
    if (auto nb = nabla_coefficients(v, nodes, psi, p, k, opt)) {
        candidates.push_back(std::move(*nb));
    }
    // The dense solver is kept for small or non-separating families.
    if (candidates.empty() || cols.size() <= 8) {
        candidates.push_back(best_coefficients(v, cols, p, k, opt));
    }
    Witness w;
    std::size_t best = 0;
    for (std::size_t c = 0; c < candidates.size(); ++c) {
        const Interval r = residual_fn(v, cols, candidates[c]).norm(p, k);
        if (c == 0 || r.hi() < w.residual.hi()) {
            best = c;
            w.residual = r;
        }
    }
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (!candidates[best][i].is_zero()) {
            w.beta[nodes[i]] = candidates[best][i];
        }
    }
    return w;
}

std::optional<Witness> dist_to_span_witness(const StepFn& v, const NodeMap& psi, const Exponent& p,
                                            long N, const WitnessOptions& opt) {
    const Rational bound = pow2(-N);
    for (long extra : {4L, 12L, 28L}) {
        Witness w = best_witness(v, psi, p, N + extra, opt);
        if (w.residual.hi() < bound) {
            return w;
        }
        if (w.residual.lo() >= bound) {
            break;
        }
    }
    return std::nullopt;
}

std::vector<ComplexRational> pattern_search(
    std::size_t n, const std::function<Interval(const std::vector<ComplexRational>&, long)>& residual,
    long stop, std::size_t budget) {
    std::vector<ComplexRational> x(n);
    const long k = stop + 6;
    Rational best = residual(x, k).hi();
    const Rational target = pow2(-stop);
    std::size_t evals = 1;
    Rational h = 1;
    const Rational hmin = pow2(-(stop + 6));
    while (best >= target && h >= hmin && evals < budget) {
        bool improved = false;
        for (std::size_t i = 0; i < n && evals < budget; ++i) {
            for (int part = 0; part < 2; ++part) {
                for (int sign : {1, -1}) {
                    std::vector<ComplexRational> y = x;
                    if (part == 0) {
                        y[i].re += sign * h;
                    } else {
                        y[i].im += sign * h;
                    }
                    const Rational r = residual(y, k).hi();
                    ++evals;
                    if (r < best) {
                        best = r;
                        x = std::move(y);
                        improved = true;
                        break;
                    }
                }
            }
        }
        if (!improved) {
            h /= 2;
        }
    }
    return x;
}

std::optional<Witness> dist_to_span_witness(const Presentation& P, const RationalVector& v,
                                            const std::map<Node, RationalVector>& psi, long N,
                                            const WitnessOptions& opt) {
    if (P.is_white_box()) {
        NodeMap m;
        for (const auto& [nu, r] : psi) {
            m[nu] = P.materialize(r);
        }
        return dist_to_span_witness(P.materialize(v), m, P.p(), N, opt);
    }
    std::vector<Node> nodes;
    std::vector<const RationalVector*> cols;
    for (const auto& [nu, r] : psi) {
        nodes.push_back(nu);
        cols.push_back(&r);
    }
    auto combo = [&](const std::vector<ComplexRational>& beta) {
        RationalVector r = v;
        for (std::size_t i = 0; i < beta.size(); ++i) {
            r = r - beta[i] * *cols[i];
        }
        return r;
    };
    auto res = [&](const std::vector<ComplexRational>& beta, long k) {
        return P.norm(combo(beta), k);
    };
    const auto beta = pattern_search(nodes.size(), res, N, opt.oracle_budget);
    Witness w;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (!beta[i].is_zero()) {
            w.beta[nodes[i]] = beta[i];
        }
    }
    w.residual = res(beta, N + 8);
    if (w.residual.hi() < pow2(-N)) {
        return w;
    }
    return std::nullopt;
}

std::optional<Witness> dist_to_span_witness(const Presentation& P, const RationalVector& v,
                                            const NodeMap& psi, long N,
                                            const WitnessOptions& opt) {
    return dist_to_span_witness(P.materialize(v), psi, P.p(), N, opt);
}

}  // namespace lpiso
