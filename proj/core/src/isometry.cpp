#include "lpiso/isometry.hpp"

#include "lpiso/errors.hpp"
#include "lpiso/witness.hpp"

#include <random>
#include <stdexcept>

namespace lpiso {

StepFn nabla(const NodeMap& phi, const Node& nu) {
    StepFn d = phi.at(nu);
    for (const auto& c : children_of(phi, nu)) {
        d -= phi.at(c);
    }
    return d;
}

Coefficients expand_in_nabla(const NodeMap& phi, const Coefficients& gamma) {
    Coefficients out;
    for (const auto& [nu, f] : phi) {
        ComplexRational s;
        for (const auto& [mu, g] : gamma) {
            if (is_prefix(mu, nu)) {
                s += g;
            }
        }
        out[nu] = s;
    }
    return out;
}

StepFn combine(const NodeMap& phi, const Coefficients& gamma) {
    std::vector<std::pair<ComplexRational, StepFn>> terms;
    for (const auto& [nu, g] : gamma) {
        if (!g.is_zero()) {
            terms.emplace_back(g, phi.at(nu));
        }
    }
    return linear_combine(terms);
}

bool nabla_identity_holds(const NodeMap& phi, const Coefficients& gamma) {
    const Coefficients e = expand_in_nabla(phi, gamma);
    std::vector<std::pair<ComplexRational, StepFn>> terms;
    for (const auto& [nu, c] : e) {
        if (!c.is_zero()) {
            terms.emplace_back(c, nabla(phi, nu));
        }
    }
    return linear_combine(terms) == combine(phi, gamma);
}

Interval nabla_norm_pth(const NodeMap& phi, const Coefficients& gamma, const Exponent& p, long k) {
    const Coefficients e = expand_in_nabla(phi, gamma);
    long extra = 2;
    for (std::size_t s = e.size(); s > 0; s >>= 1) {
        ++extra;
    }
    return refine_until(k, [&](long j) {
        Interval total(Rational(0));
        for (const auto& [nu, c] : e) {
            if (c.is_zero()) {
                continue;
            }
            const Interval m = nabla(phi, nu).mass(p, j + extra);
            // |c|^p may be large; give it enough bits relative to the mass.
            const long mag = std::max(0L, floor_log2(m.hi() + 1) + 1);
            total += pow_abs(c, p, j + extra + mag) * m;
        }
        return total;
    });
}

bool verify_iso(const DisintegrationIso& iso, const NodeMap& phi1, const NodeMap& phi2,
                const Exponent& p, long k) {
    if (iso.f.size() != phi1.size() || phi1.size() != phi2.size()) {
        return false;
    }
    std::set<Node> image;
    for (const auto& [a, b] : iso.f) {
        if (!phi1.count(a) || !phi2.count(b) || !image.insert(b).second) {
            return false;
        }
    }
    for (const auto& [a1, b1] : iso.f) {
        for (const auto& [a2, b2] : iso.f) {
            if (is_prefix(a1, a2) != is_prefix(b1, b2)) {
                return false;
            }
        }
        if (!phi1.at(a1).norm(p, k).intersects(phi2.at(b1).norm(p, k))) {
            return false;
        }
    }
    return true;
}

IntervalValued interval_layout(const NodeSet& tree, const std::map<Node, Interval>& lengths,
                               long precision) {
    if (!tree.count(kRoot)) {
        throw DomainShapeError("interval layout needs a tree with a root");
    }
    IntervalValued out;
    std::map<Node, Rational> lo_err;
    out.intervals[kRoot] = Span{0, 1};
    out.endpoint_error[kRoot] = 0;
    lo_err[kRoot] = 0;
    for (const auto& nu : tree) {
        Rational cursor = out.intervals.at(nu).lo;
        Rational cursor_err = lo_err.at(nu);
        for (const auto& c : children_in(tree, nu)) {
            const Interval& len = lengths.at(c);
            Rational l;
            Rational l_err;
            if (len.is_point()) {
                l = len.lo();
            } else {
                out.exact = false;
                l = Rational(round_out(Interval(len.mid()), precision).lo());
                l_err = std::max(abs(l - len.lo()), abs(len.hi() - l));
            }
            out.intervals[c] = Span{cursor, cursor + l};
            lo_err[c] = cursor_err;
            out.endpoint_error[c] = 2 * cursor_err + l_err;
            cursor += l;
            cursor_err += l_err;
        }
    }
    for (const auto& [nu, s] : out.intervals) {
        out.psi[nu] = StepFn::indicator(s.lo, s.hi);
        out.iso.f[nu] = nu;
    }
    return out;
}

IntervalValued interval_valued(const NodeMap& phi, const Exponent& p, long k) {
    auto root = phi.find(kRoot);
    if (root == phi.end()) {
        throw DomainShapeError("interval_valued needs a value at the root");
    }
    const Interval n = root->second.norm(p, k);
    if (!n.contains(Rational(1))) {
        throw RootNormError("root norm " + to_string(n.lo()) + ".." + to_string(n.hi()) +
                            " excludes 1");
    }
    std::map<Node, Interval> lengths;
    for (const auto& [nu, f] : phi) {
        lengths[nu] = f.mass(p, k + 24);
    }
    return interval_layout(domain(phi), lengths, k + 24);
}

LiftResult lift_apply(const DisintegrationIso& iso, const NodeMap& phi1, const NodeMap& phi2,
                      const Coefficients& v, const Exponent& p, long k) {
    LiftResult r;
    for (const auto& [nu, a] : v) {
        auto it = iso.f.find(nu);
        if (it == iso.f.end()) {
            throw IsoCertificationError("node " + to_string(nu) + " is outside the isomorphism");
        }
        if (!a.is_zero()) {
            r.coeffs[it->second] = a;
        }
    }
    r.norm_source = combine(phi1, v).norm(p, k + 1);
    r.norm_target = combine(phi2, r.coeffs).norm(p, k + 1);
    if (!r.norm_source.intersects(r.norm_target)) {
        throw IsoCertificationError("lifted combination changes the norm");
    }
    return r;
}

// ---------------------------------------------------------- synthesis

namespace {

Rational modulus_bound(const ComplexRational& z) { return abs(z.re) + abs(z.im); }

// Upper bound of x^(1/p) for a rational x >= 0.
Rational root_hi(const Rational& x, const Exponent& p) {
    if (sgn(x) == 0) {
        return 0;
    }
    return root(Interval(x), p, 40).hi();
}

// One side of the pipeline: the stage map, its interval layout and the
// factors kappa with T(phi(nu)) = kappa(nu) chi_I(nu).
struct Side {
    NodeMap phi;                // orchard
    IntervalValued layout;      // over the rooted tree
    std::map<Node, Rational> kappa;
    std::map<Node, Rational> kappa_err;
    std::map<Node, Rational> rho;      // 1 / kappa
    std::map<Node, Rational> rho_err;
    NodeMap chi;                // chi_I(nu), orchard nodes only
};

std::pair<Rational, Rational> snap_interval(const Interval& x) {
    if (x.is_point()) {
        return {x.lo(), Rational(0)};
    }
    const Rational m = x.mid();
    return {m, Rational(x.hi() - m)};
}

Side build_side(const NodeMap& phi, const Exponent& p, long prec) {
    Side s;
    s.phi = phi;
    const RootedMap rooted = attach_root(phi, p, prec);
    const Interval total = rooted.psi.at(kRoot).mass(p, prec);
    if (!(total.lo() > 0)) {
        throw ZeroNormError("stage map has zero total mass");
    }
    const Interval inv_total = total.is_point() ? Interval(Rational(1) / total.lo())
                                                : reciprocal(total);
    std::map<Node, Interval> lengths;
    for (const auto& [nu, f] : rooted.psi) {
        if (!nu.empty()) {
            const Interval m = f.mass(p, prec);
            lengths[nu] = m.is_point() && inv_total.is_point() ? Interval(m.lo() * inv_total.lo())
                                                               : m * inv_total;
        }
    }
    s.layout = interval_layout(domain(rooted.psi), lengths, prec);
    for (const auto& [nu, f] : phi) {
        const Interval m = f.mass(p, prec);
        const Interval& len = lengths.at(nu);
        const Interval ratio = m.is_point() && len.is_point() ? Interval(m.lo() / len.lo())
                                                              : m * reciprocal(len);
        const Interval kap = root(ratio, p, prec);
        std::tie(s.kappa[nu], s.kappa_err[nu]) = snap_interval(kap);
        const Interval r = kap.is_point() ? Interval(Rational(1) / kap.lo()) : reciprocal(kap);
        std::tie(s.rho[nu], s.rho_err[nu]) = snap_interval(r);
        const Span& I = s.layout.intervals.at(nu);
        s.chi[nu] = StepFn::indicator(I.lo, I.hi);
    }
    return s;
}

struct Expressed {
    RationalVector coords;
    Rational residual;
};

// f as a rational vector over the first generators of B.
Expressed express_over_generators(const Presentation& B, const StepFn& f, long k) {
    std::vector<StepFn> cols;
    for (std::size_t G : {8u, 16u, 32u, 64u, 128u}) {
        while (cols.size() < G && B.has_generator(cols.size())) {
            cols.push_back(B.generator(cols.size()));
        }
        if (auto x = solve_exact(f, cols)) {
            Expressed e;
            for (std::size_t i = 0; i < x->size(); ++i) {
                e.coords.add(i, (*x)[i]);
            }
            e.residual = 0;
            return e;
        }
        if (cols.size() < G) {
            break;
        }
    }
    const auto beta = best_coefficients(f, cols, B.p(), k);
    Expressed e;
    std::vector<std::pair<ComplexRational, StepFn>> terms{{ComplexRational(1), f}};
    for (std::size_t i = 0; i < beta.size(); ++i) {
        e.coords.add(i, beta[i]);
        if (!beta[i].is_zero()) {
            terms.emplace_back(-beta[i], cols[i]);
        }
    }
    e.residual = linear_combine(terms).norm(B.p(), k).hi();
    return e;
}

}  // namespace

IsometryData synthesize_isometry(const Presentation& A, const Presentation& B, long k,
                                 std::size_t budget, const IsometryOptions& opt) {
    if (!A.p().same_as(B.p())) {
        throw ExponentMismatchError("presentations have different exponents " + A.p().to_string() +
                                    " and " + B.p().to_string());
    }
    const Exponent& p = A.p();
    p.require_not_two();
    if (!A.is_white_box() || !B.is_white_box()) {
        throw Error("isometry synthesis needs white-box presentations");
    }
    const long prec = k + 40;
    const Rational bound = pow2(-k);

    IsometryData data;
    data.p = p;
    data.source = A.name();
    data.target = B.name();
    data.source_descriptor = A.descriptor();
    data.target_descriptor = B.descriptor();
    data.precision = k;

    const std::vector<Stage> stagesA = synthesize_stages(A, budget, opt.synth);
    data.source_level = stagesA.back().n;
    const Side sa = build_side(stagesA.back().phi, p, prec);

    std::size_t count = budget;
    if (A.size()) {
        count = std::min(count, *A.size());
    }
    // Transported generators g_j = T_A(a_j) with the source-side error terms.
    std::vector<StepFn> g(count);
    std::vector<ResidualParts> parts(count);
    for (std::size_t j = 0; j < count; ++j) {
        const Witness w = best_witness(A.generator(j), sa.phi, p, prec);
        parts[j].source_span = w.residual.hi();
        std::vector<std::pair<ComplexRational, StepFn>> terms;
        Rational err = 0;
        for (const auto& [nu, b] : w.beta) {
            terms.emplace_back(b * ComplexRational(sa.kappa.at(nu)), sa.chi.at(nu));
            err += modulus_bound(b) *
                   (sa.kappa_err.at(nu) + sa.kappa.at(nu) *
                                              root_hi(sa.layout.endpoint_error.at(nu), p));
        }
        g[j] = linear_combine(terms);
        parts[j].rescaling = err;
    }

    std::vector<Stage> stagesB = synthesize_stages(B, budget, opt.synth);
    const std::size_t max_level = budget + opt.target_extra_levels;
    while (true) {
        const Side sb = build_side(stagesB.back().phi, p, prec);
        std::map<Node, Expressed> coords;
        std::vector<RationalVector> images(count);
        std::vector<ResidualParts> res = parts;
        bool ok = true;
        for (std::size_t j = 0; j < count && ok; ++j) {
            const Witness w = best_witness(g[j], sb.chi, p, prec);
            res[j].target_span = w.residual.hi();
            for (const auto& [nu, c] : w.beta) {
                auto it = coords.find(nu);
                if (it == coords.end()) {
                    it = coords.emplace(nu, express_over_generators(B, sb.phi.at(nu), prec)).first;
                }
                const ComplexRational scale = c * ComplexRational(sb.rho.at(nu));
                images[j] += scale * it->second.coords;
                const Rational cm = modulus_bound(c);
                res[j].rescaling +=
                    cm * (root_hi(sb.layout.endpoint_error.at(nu), p) +
                          sb.rho_err.at(nu) * sb.phi.at(nu).norm(p, 20).hi());
                res[j].target_coords += modulus_bound(scale) * it->second.residual;
            }
            ok = res[j].total() < bound;
        }
        if (ok) {
            data.target_level = stagesB.back().n;
            data.images = std::move(images);
            data.residuals = std::move(res);
            return data;
        }
        if (stagesB.back().n >= max_level) {
            throw BudgetExhaustedError("target stages up to level " + std::to_string(max_level) +
                                       " do not resolve the source intervals");
        }
        const Stage& last = stagesB.back();
        stagesB.push_back(advance_stage(B, last, last.k + 1, last.n + 1, opt.synth));
    }
}

RationalVector apply_isometry(const IsometryData& data, const RationalVector& v) {
    RationalVector out;
    for (const auto& [j, c] : v.terms()) {
        if (j >= data.images.size()) {
            throw std::out_of_range("probe uses generator " + std::to_string(j) +
                                    " beyond the synthesized images");
        }
        out += c * data.images[j];
    }
    return out;
}

VerificationReport verify_isometry(const Presentation& B, const IsometryData& data,
                                   const Presentation& A, const std::vector<RationalVector>& probes,
                                   long k) {
    VerificationReport rep;
    for (const auto& v : probes) {
        ProbeReport pr;
        pr.probe = v;
        pr.norm_source = A.norm(v, k + 4);
        pr.norm_target = B.norm(apply_isometry(data, v), k + 4);
        pr.norm_gap = std::max(Rational(pr.norm_target.hi() - pr.norm_source.lo()),
                               Rational(pr.norm_source.hi() - pr.norm_target.lo()));
        pr.predicted_gap = 0;
        for (const auto& [j, c] : v.terms()) {
            pr.predicted_gap += modulus_bound(c) * data.residuals.at(j).total();
        }
        rep.max_norm_gap = std::max(rep.max_norm_gap, pr.norm_gap);
        rep.probes.push_back(std::move(pr));
    }
    static const ComplexRational as[] = {ComplexRational(1), ComplexRational(ratio(1, 2), 1),
                                         ComplexRational(-3)};
    static const ComplexRational bs[] = {ComplexRational(1), ComplexRational(ratio(-2, 3)),
                                         ComplexRational(0, ratio(1, 4))};
    for (std::size_t i = 0; i + 1 < probes.size(); ++i) {
        LinearityReport lr;
        lr.first = i;
        lr.second = i + 1;
        lr.a = as[i % 3];
        lr.b = bs[i % 3];
        const RationalVector combined = lr.a * probes[i] + lr.b * probes[i + 1];
        const RationalVector diff = apply_isometry(data, combined) -
                                    lr.a * apply_isometry(data, probes[i]) -
                                    lr.b * apply_isometry(data, probes[i + 1]);
        lr.residual = B.norm(diff, k + 4);
        rep.max_linearity = std::max(rep.max_linearity, lr.residual.hi());
        rep.linearity.push_back(std::move(lr));
    }
    return rep;
}

std::vector<RationalVector> random_probes(std::size_t how_many, std::size_t count,
                                          std::uint64_t seed, std::size_t max_terms) {
    std::mt19937_64 rng(seed);
    std::vector<RationalVector> out;
    if (count == 0) {
        return out;
    }
    for (std::size_t i = 0; i < how_many; ++i) {
        RationalVector v;
        const std::size_t terms = 1 + rng() % max_terms;
        for (std::size_t t = 0; t < terms; ++t) {
            const std::size_t j = rng() % count;
            const long re = static_cast<long>(rng() % 9) - 4;
            const long im = static_cast<long>(rng() % 9) - 4;
            v.add(j, ComplexRational(ratio(re, 4), ratio(im, 8)));
        }
        out.push_back(std::move(v));
    }
    return out;
}

}  // namespace lpiso
