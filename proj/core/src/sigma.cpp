#include "lpiso/sigma.hpp"

#include "lpiso/errors.hpp"

#include <algorithm>
#include <cmath>

namespace lpiso {

namespace {

long log2_ceil(std::size_t n) {
    long b = 0;
    while ((std::size_t{1} << b) < n) {
        ++b;
    }
    return b;
}

// C * |inner| with C the normalising constant; inner(j) must have width
// shrinking with j.
Interval scaled(const Exponent& p, long k, const std::function<Interval(long)>& inner) {
    p.require_not_two();
    return refine_until(k, [&](long j) {
        const Interval in = abs(inner(j + 4));
        const Interval c = sigma_constant(p, j + 4 + std::max(0L, floor_log2(in.hi() + 1) + 1));
        return c * in;
    });
}

}  // namespace

Interval sigma_inner(const ComplexRational& z, const ComplexRational& w, const Exponent& p,
                     long k) {
    const long j = k + 3;
    return 2 * (pow_abs(z, p, j + 1) + pow_abs(w, p, j + 1)) -
           (pow_abs(z - w, p, j) + pow_abs(z + w, p, j));
}

Interval sigma_scalar(const ComplexRational& z, const ComplexRational& w, const Exponent& p,
                      long k) {
    return scaled(p, k, [&](long j) { return sigma_inner(z, w, p, j); });
}

Interval sigma_vec(const StepFn& f, const StepFn& g, const Exponent& p, long k) {
    const StepFn d = f - g;
    const StepFn s = f + g;
    return scaled(p, k, [&](long j) {
        const long i = j + 3;
        return 2 * (f.mass(p, i + 1) + g.mass(p, i + 1)) - (d.mass(p, i) + s.mass(p, i));
    });
}

Interval sigma_vec(const Presentation& P, const RationalVector& a, const RationalVector& b,
                   long k) {
    const RationalVector d = a - b;
    const RationalVector s = a + b;
    const Exponent& p = P.p();
    // Norms are bounded by a crude sum of coefficient sizes times generator
    // norms; the p-th power's Lipschitz growth is absorbed by refine_until.
    auto pth = [&](const RationalVector& v, long j) {
        Interval n = P.norm(v, j);
        if (sgn(n.lo()) < 0) {
            n = Interval(Rational(0), n.hi());
        }
        return pow_interval(n, p, j);
    };
    return scaled(p, k, [&](long j) {
        const long i = j + 3;
        return 2 * (pth(a, i + 1) + pth(b, i + 1)) - (pth(d, i) + pth(s, i));
    });
}

Interval sigma_map(const NodeMap& psi, const Exponent& p, long k) {
    p.require_not_two();
    std::vector<std::pair<StepFn, StepFn>> pairs;
    for (auto i = psi.begin(); i != psi.end(); ++i) {
        for (auto j = std::next(i); j != psi.end(); ++j) {
            if (!comparable(i->first, j->first)) {
                pairs.emplace_back(i->second, j->second);
            } else {
                // i sorts first, so i is the prefix
                pairs.emplace_back(j->second - i->second, j->second);
            }
        }
    }
    if (pairs.empty()) {
        return Interval(Rational(0));
    }
    const long kk = k + log2_ceil(pairs.size()) + 1;
    Interval total(Rational(0));
    for (const auto& [a, b] : pairs) {
        total += sigma_vec(a, b, p, kk);
    }
    return total;
}

Interval sigma_map(const Presentation& P, const std::map<Node, RationalVector>& psi, long k) {
    P.p().require_not_two();
    std::vector<std::pair<RationalVector, RationalVector>> pairs;
    for (auto i = psi.begin(); i != psi.end(); ++i) {
        for (auto j = std::next(i); j != psi.end(); ++j) {
            if (!comparable(i->first, j->first)) {
                pairs.emplace_back(i->second, j->second);
            } else {
                pairs.emplace_back(j->second - i->second, j->second);
            }
        }
    }
    if (pairs.empty()) {
        return Interval(Rational(0));
    }
    const long kk = k + log2_ceil(pairs.size()) + 1;
    Interval total(Rational(0));
    for (const auto& [a, b] : pairs) {
        total += sigma_vec(P, a, b, kk);
    }
    return total;
}

bool is_separating_antitone_exact(const NodeMap& psi) {
    for (auto i = psi.begin(); i != psi.end(); ++i) {
        for (auto j = std::next(i); j != psi.end(); ++j) {
            if (!comparable(i->first, j->first)) {
                if (!disjointly_supported(i->second, j->second)) {
                    return false;
                }
            } else if (!subvector_le(j->second, i->second)) {
                return false;
            }
        }
    }
    return true;
}

bool is_partial_disintegration(const NodeMap& phi) {
    if (phi.empty()) {
        return true;
    }
    if (!is_orchard(domain(phi))) {
        return false;
    }
    for (auto i = phi.begin(); i != phi.end(); ++i) {
        if (i->second.is_zero()) {
            return false;
        }
        for (auto j = std::next(i); j != phi.end(); ++j) {
            if (i->second == j->second) {
                return false;
            }
        }
    }
    return is_separating_antitone_exact(phi);
}

Interval dist_bound(const NodeMap& psi, const Exponent& p, long k) {
    p.require_not_two();
    if (psi.size() < 2) {
        return Interval(Rational(0));
    }
    const long scale = static_cast<long>(std::ceil(to_double(p.refine(4).hi())));
    return refine_until(k, [&](long j) {
        Interval s = sigma_map(psi, p, scale * (j + 2) + 4);
        if (sgn(s.lo()) < 0) {
            s = Interval(Rational(0), s.hi());
        }
        return Rational(2) * root(s, p, j + 2);
    });
}

// ------------------------------------------------------------------ repair

namespace {

// Deepest prefix of nu inside S.
std::optional<Node> source_node(const NodeMap& phi, const Node& nu) {
    Node mu = nu;
    while (!mu.empty()) {
        mu.pop_back();
        if (phi.count(mu)) {
            return mu;
        }
    }
    return std::nullopt;
}

struct Table {
    std::vector<Rational> breaks;
    std::map<Node, std::vector<ComplexRational>> vals;  // psi_0 on the common breaks
};

Table common_table(const NodeMap& psi0) {
    Table t;
    t.breaks = {Rational(0), Rational(1)};
    for (const auto& [nu, f] : psi0) {
        t.breaks = merge_breaks(t.breaks, f.breaks());
    }
    for (const auto& [nu, f] : psi0) {
        t.vals[nu] = f.values_on(t.breaks);
    }
    return t;
}

PointwiseSigma pointwise_sigma(const Table& t, const Exponent& p, long k) {
    PointwiseSigma s;
    s.breaks = t.breaks;
    const std::size_t cells = t.breaks.size() - 1;
    s.values.assign(cells, Interval(Rational(0)));
    std::size_t pair_count = 0;
    for (auto i = t.vals.begin(); i != t.vals.end(); ++i) {
        pair_count += static_cast<std::size_t>(std::distance(std::next(i), t.vals.end()));
    }
    const long kk = k + log2_ceil(pair_count + 1) + 1;
    for (std::size_t c = 0; c < cells; ++c) {
        Interval total(Rational(0));
        for (auto i = t.vals.begin(); i != t.vals.end(); ++i) {
            for (auto j = std::next(i); j != t.vals.end(); ++j) {
                const ComplexRational& a = i->second[c];
                const ComplexRational& b = j->second[c];
                ComplexRational x = a;
                const ComplexRational& y = b;
                if (comparable(i->first, j->first)) {
                    x = b - a;
                }
                if (x.is_zero() || y.is_zero()) {
                    continue;
                }
                // Exact comparison of |x| and |y| picks the minimum.
                const ComplexRational& m = x.abs2() <= y.abs2() ? x : y;
                total += pow_abs(m, p, kk);
            }
        }
        s.values[c] = total;
    }
    return s;
}

Rational max_lo(const std::vector<Interval>& xs) {
    Rational m = 0;
    for (const auto& x : xs) {
        m = std::max(m, x.lo());
    }
    return m;
}

}  // namespace

RepairResult repair(const NodeMap& phi, const NodeMap& psi, const Exponent& p, long k) {
    p.require_not_two();
    NodeSet S = domain(phi);
    NodeSet Sp = domain(psi);
    for (const auto& nu : S) {
        if (!Sp.count(nu)) {
            throw DomainShapeError("repair: node " + to_string(nu) + " of phi missing from psi");
        }
    }
    if (!Sp.empty() && !is_orchard(Sp)) {
        throw DomainShapeError("repair: domain of psi is not an orchard");
    }
    std::vector<Node> delta;
    std::map<Node, Node> source;
    for (const auto& nu : Sp) {
        if (S.count(nu)) {
            continue;
        }
        auto src = source_node(phi, nu);
        if (!src) {
            throw DomainShapeError("repair: node " + to_string(nu) + " has no ancestor in phi");
        }
        delta.push_back(nu);
        source[nu] = *src;
    }

    NodeMap psi0 = phi;
    for (const auto& nu : delta) {
        psi0[nu] = psi.at(nu);
    }

    RepairResult res;
    const Table t = common_table(psi0);
    const std::size_t cells = t.breaks.size() - 1;
    const long kcmp = std::max(k, 40L);

    for (long kk = kcmp;; kk += 20) {
        res.repaired = phi;
        res.sigma_hat = pointwise_sigma(t, p, kk);
        const auto& sh = res.sigma_hat.values;

        // dominated[nu][c]: |psi(nu)|^p is not certified above sigma_hat on cell c.
        std::map<Node, std::vector<bool>> dominated;
        for (const auto& nu : delta) {
            auto& d = dominated[nu];
            d.resize(cells);
            const auto& v = t.vals.at(nu);
            for (std::size_t c = 0; c < cells; ++c) {
                const Interval a = v[c].is_zero() ? Interval(Rational(0)) : pow_abs(v[c], p, kk);
                d[c] = !(a.lo() > sh[c].hi());
            }
        }
        for (const auto& nu : delta) {
            const Node& src = source.at(nu);
            // Nullifiable set: dominated for some ancestor-or-self in delta.
            std::vector<bool> cut(cells, false);
            for (const auto& mu : delta) {
                if (is_prefix(mu, nu)) {
                    const auto& d = dominated.at(mu);
                    for (std::size_t c = 0; c < cells; ++c) {
                        cut[c] = cut[c] || d[c];
                    }
                }
            }
            // Supports of phi-nodes strictly below the source that branch away
            // from nu; without this cut nu can overlap such a node.
            for (const auto& [rho, f] : phi) {
                if (is_strict_prefix(src, rho) && !comparable(rho, nu)) {
                    const auto& fv = t.vals.at(rho);
                    for (std::size_t c = 0; c < cells; ++c) {
                        cut[c] = cut[c] || !fv[c].is_zero();
                    }
                }
            }
            const auto& base = t.vals.at(src);
            std::vector<ComplexRational> out(cells);
            for (std::size_t c = 0; c < cells; ++c) {
                out[c] = cut[c] ? ComplexRational() : base[c];
            }
            res.repaired[nu] = StepFn::on_breaks(t.breaks, std::move(out));
        }

        // Bound: nodes of S contribute exactly ||phi - psi||^p; nodes of delta
        // must stay below the right-hand side.
        const long kb = kk;
        std::vector<Interval> s_terms;
        for (const auto& [nu, f] : phi) {
            s_terms.push_back((f - psi.at(nu)).mass(p, kb));
        }
        std::vector<Interval> d_terms;
        for (const auto& nu : delta) {
            d_terms.push_back((res.repaired.at(nu) - psi.at(nu)).mass(p, kb));
        }
        Interval smax(Rational(0));
        for (const auto& x : s_terms) {
            smax = max(smax, x);
        }
        Interval lhs = smax;
        for (const auto& x : d_terms) {
            lhs = max(lhs, x);
        }
        Interval sig = sigma_map(psi0, p, kb);
        if (sgn(sig.lo()) < 0) {
            sig = Interval(Rational(0), sig.hi());
        }
        const Interval rhs = smax + two_pow(p, kb) * sig;
        res.lhs = lhs;
        res.rhs = rhs;
        res.precision = kb;
        // Each S-node term is bounded by smax by definition; only delta needs
        // a numerical comparison.
        const Rational rhs_lo = max_lo(s_terms) + (two_pow(p, kb) * sig).lo();
        res.bound_certified = std::all_of(d_terms.begin(), d_terms.end(), [&](const Interval& x) {
            return x.hi() <= rhs_lo || x == Interval(Rational(0));
        });
        if (res.bound_certified || kk >= kcmp + 40) {
            break;
        }
    }
    return res;
}

}  // namespace lpiso

namespace lpiso {

Interval dist_bound(const Presentation& P, const std::map<Node, RationalVector>& psi, long k) {
    P.p().require_not_two();
    if (psi.size() < 2) {
        return Interval(Rational(0));
    }
    // sigma^(1/p) loses a factor p in precision near zero.
    const long scale = static_cast<long>(std::ceil(to_double(P.p().refine(4).hi())));
    return refine_until(k, [&](long j) {
        Interval s = sigma_map(P, psi, scale * (j + 2) + 4);
        if (sgn(s.lo()) < 0) {
            s = Interval(Rational(0), s.hi());
        }
        return Rational(2) * root(s, P.p(), j + 2);
    });
}

}  // namespace lpiso
