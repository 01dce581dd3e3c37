#include "lpiso/synth.hpp"

#include "lpiso/errors.hpp"
#include "lpiso/sigma.hpp"

#include <algorithm>
#include <stdexcept>

namespace lpiso {

std::string to_string(Strategy s) { return s == Strategy::WhiteBox ? "whitebox" : "dovetail"; }

Strategy parse_strategy(std::string_view text) {
    if (text == "whitebox") {
        return Strategy::WhiteBox;
    }
    if (text == "dovetail") {
        return Strategy::Dovetail;
    }
    throw ParseError("unknown strategy '" + std::string(text) + "'");
}

namespace {

// Norm of a difference (or a single value when b is null) in whichever form
// the stage uses.
struct Values {
    const Presentation& P;
    const Stage& s;

    std::vector<Node> nodes() const {
        std::vector<Node> out;
        if (s.vector_form) {
            for (const auto& [nu, v] : s.coords) {
                out.push_back(nu);
            }
        } else {
            for (const auto& [nu, v] : s.phi) {
                out.push_back(nu);
            }
        }
        return out;
    }

    Interval norm(const Node& a, const Node* b, long k) const {
        if (s.vector_form) {
            RationalVector v = s.coords.at(a);
            if (b) {
                v = v - s.coords.at(*b);
            }
            return P.norm(v, k);
        }
        StepFn f = s.phi.at(a);
        if (b) {
            f -= s.phi.at(*b);
        }
        return f.norm(P.p(), k);
    }
};

long exponent_below(const Rational& slack) {
    if (sgn(slack) <= 0) {
        throw Error("stage has no positive slack");
    }
    return std::max(0L, 1 - floor_log2(slack));
}

Rational modulus_bound(const ComplexRational& z) { return abs(z.re) + abs(z.im); }

Stage make_seed(const Presentation& P, std::size_t j0, bool vector_form) {
    Stage s;
    s.n = 0;
    s.vector_form = vector_form;
    const Node top{0};
    if (vector_form) {
        s.coords[top] = RationalVector::unit(j0);
        if (P.is_white_box()) {
            s.phi[top] = P.generator(j0);
        }
        s.cert = *success_certify(P, s.coords, 0);
    } else {
        s.phi[top] = P.generator(j0);
        s.cert = *success_certify(P, s.phi, 0);
    }
    s.k = stage_margin(P, s);
    return s;
}

// Adds the remainder psi(nu) - sum of children as a new last child wherever
// it is nonzero, making every nonterminal node exactly summative.
NodeMap summative_completion(NodeMap psi) {
    for (const auto& nu : nonterminal_nodes(psi)) {
        const StepFn d = summativity_defect(psi, nu);
        if (!d.is_zero()) {
            const long t = max_child_index(domain(psi), nu);
            psi[child(nu, static_cast<std::uint32_t>(t + 1))] = d;
        }
    }
    return psi;
}

Stage finish(const Presentation& P, Stage s, long k) {
    s.k = std::max(stage_margin(P, s), k);
    return s;
}

Stage advance_whitebox(const Presentation& P, const Stage& s, long k, std::size_t n,
                       const SynthOptions& opt) {
    if (s.vector_form) {
        throw std::invalid_argument("white-box strategy needs a step-function stage");
    }
    std::vector<StepFn> targets;
    for (std::size_t j = 0; j < n && P.has_generator(j); ++j) {
        targets.push_back(P.generator(j));
    }
    DenseExtensionOptions dopt;
    dopt.max_rounds = opt.max_rounds;
    dopt.witness = opt.witness;
    const long N = static_cast<long>(n);
    DenseExtension ext =
        extend_dense(s.phi, targets, N, default_dense_sequence(s.phi, targets), P.p(), dopt);
    NodeMap psi = summative_completion(std::move(ext.psi));
    if (!is_partial_disintegration(psi)) {
        throw std::logic_error("white-box stage is not a partial disintegration");
    }
    auto cert = success_certify(P, psi, N, opt.witness);
    if (!cert) {
        throw BudgetExhaustedError("white-box stage " + std::to_string(n) + " did not certify");
    }
    Stage out;
    out.n = n;
    out.phi = std::move(psi);
    out.cert = std::move(*cert);
    return finish(P, std::move(out), k);
}

struct Addition {
    Node parent;  // kRoot means a new top-level node
    std::size_t vec;
};

Stage advance_dovetail(const Presentation& P, const Stage& s, long k, std::size_t n,
                       const SynthOptions& opt) {
    if (!s.vector_form) {
        throw std::invalid_argument("dovetail strategy needs a vector-form stage");
    }
    std::size_t J = n + 1;
    if (P.size()) {
        J = std::min(J, *P.size());
    }
    std::vector<RationalVector> pool;
    for (std::size_t j = 0; j < J; ++j) {
        pool.push_back(RationalVector::unit(j));
    }
    for (std::size_t i = 0; i < J; ++i) {
        for (std::size_t j = 0; j < J; ++j) {
            if (i != j) {
                pool.push_back(RationalVector::unit(i) - RationalVector::unit(j));
            }
        }
    }
    const long N = static_cast<long>(n);
    const Rational slack = pow2(-k);
    std::size_t examined = 0;

    auto accept = [&](const std::map<Node, RationalVector>& m) -> std::optional<Stage> {
        ++examined;
        std::vector<const RationalVector*> vals;
        for (const auto& [nu, v] : m) {
            if (!(P.norm(v, N + 8).lo() > 0)) {
                return std::nullopt;
            }
            for (const auto* w : vals) {
                if (!(P.norm(v - *w, N + 8).lo() > 0)) {
                    return std::nullopt;
                }
            }
            vals.push_back(&v);
        }
        auto cert = success_certify(P, m, N, opt.witness);
        if (!cert) {
            return std::nullopt;
        }
        if (!(dist_bound(P, m, k + 1).hi() < slack)) {
            return std::nullopt;
        }
        Stage out;
        out.n = n;
        out.vector_form = true;
        out.coords = m;
        if (P.is_white_box()) {
            for (const auto& [nu, v] : m) {
                out.phi[nu] = P.materialize(v);
            }
        }
        out.cert = std::move(*cert);
        return out;
    };

    // Breadth-first over the number of added nodes; within a layer the
    // enumeration order is fixed, so the first accepted map is deterministic.
    std::vector<std::map<Node, RationalVector>> layer{s.coords};
    for (std::size_t depth = 0; depth <= opt.max_new_nodes; ++depth) {
        std::vector<std::map<Node, RationalVector>> next;
        for (const auto& m : layer) {
            if (examined >= opt.candidate_budget) {
                throw BudgetExhaustedError("dovetail search exhausted its candidate budget");
            }
            if (auto st = accept(m)) {
                return finish(P, std::move(*st), k);
            }
            if (depth == opt.max_new_nodes) {
                continue;
            }
            const NodeSet dom = [&] {
                NodeSet d;
                for (const auto& [nu, v] : m) {
                    d.insert(nu);
                }
                return d;
            }();
            std::vector<Node> slots;
            slots.push_back(Node{static_cast<std::uint32_t>(max_top_index(dom) + 1)});
            for (const auto& nu : dom) {
                slots.push_back(child(nu, static_cast<std::uint32_t>(max_child_index(dom, nu) + 1)));
            }
            for (const auto& slot : slots) {
                for (const auto& v : pool) {
                    auto m2 = m;
                    m2[slot] = v;
                    next.push_back(std::move(m2));
                }
            }
        }
        layer = std::move(next);
    }
    throw BudgetExhaustedError("dovetail search found no stage for level " + std::to_string(n));
}

}  // namespace

long stage_margin(const Presentation& P, const Stage& s) {
    const Values vals{P, s};
    const auto nodes = vals.nodes();
    const long kq = static_cast<long>(s.n) + 16;
    std::optional<Rational> slack;
    auto consider = [&](const Rational& x) {
        if (!slack || x < *slack) {
            slack = x;
        }
    };
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        consider(vals.norm(nodes[i], nullptr, kq).lo());
        for (std::size_t j = i + 1; j < nodes.size(); ++j) {
            consider(vals.norm(nodes[i], &nodes[j], kq).lo() / 2);
        }
    }
    const Rational level = pow2(-static_cast<long>(s.cert.level));
    for (std::size_t j = 0; j < s.cert.residuals.size(); ++j) {
        Rational total = 1;
        for (const auto& [nu, b] : s.cert.betas[j]) {
            total += modulus_bound(b);
        }
        consider((level - s.cert.residuals[j].hi()) / total);
    }
    for (const auto& [nu, d] : s.cert.defects) {
        const std::size_t kids = s.vector_form ? children_of(s.coords, nu).size()
                                               : children_of(s.phi, nu).size();
        consider((level - d.hi()) / Rational(static_cast<long>(kids + 1)));
    }
    if (!slack) {
        return 0;
    }
    return exponent_below(*slack);
}

Stage seed_stage(const Presentation& P, const SynthOptions& opt) {
    const bool vector_form = opt.strategy == Strategy::Dovetail || !P.is_white_box();
    for (std::size_t j = 0; j < opt.seed_scan && P.has_generator(j); ++j) {
        for (long k = 4; k <= 40; k += 12) {
            const Interval nrm = P.norm(RationalVector::unit(j), k);
            if (nrm.lo() > 0) {
                return make_seed(P, j, vector_form);
            }
            if (nrm.hi() < pow2(-40)) {
                break;
            }
        }
    }
    throw BudgetExhaustedError("seed_stage: no generator with certified nonzero norm among the "
                               "first " + std::to_string(opt.seed_scan));
}

Stage advance_stage(const Presentation& P, const Stage& s, long k, std::size_t n,
                    const SynthOptions& opt) {
    if (s.n >= n) {
        return s;
    }
    if (k < s.k + 1) {
        throw std::invalid_argument("advance_stage needs k >= k_n + 1");
    }
    if (s.vector_form || opt.strategy == Strategy::Dovetail) {
        return advance_dovetail(P, s, k, n, opt);
    }
    return advance_whitebox(P, s, k, n, opt);
}

std::vector<Stage> synthesize_stages(const Presentation& P, std::size_t n, const SynthOptions& opt) {
    std::vector<Stage> stages{seed_stage(P, opt)};
    for (std::size_t level = 1; level <= n; ++level) {
        const Stage& last = stages.back();
        stages.push_back(advance_stage(P, last, last.k + 1, level, opt));
    }
    return stages;
}

void check_chain(const Presentation& P, const std::vector<Stage>& stages) {
    for (std::size_t t = 0; t + 1 < stages.size(); ++t) {
        const Stage& a = stages[t];
        const Stage& b = stages[t + 1];
        const Rational bound = pow2(-(a.k + 1));
        const Values va{P, a};
        for (const auto& nu : va.nodes()) {
            Interval d;
            if (a.vector_form) {
                auto it = b.coords.find(nu);
                if (it == b.coords.end()) {
                    throw ChainViolationError("node " + to_string(nu) + " dropped after stage " +
                                              std::to_string(t));
                }
                d = P.norm(it->second - a.coords.at(nu), a.k + 8);
            } else {
                auto it = b.phi.find(nu);
                if (it == b.phi.end()) {
                    throw ChainViolationError("node " + to_string(nu) + " dropped after stage " +
                                              std::to_string(t));
                }
                d = (it->second - a.phi.at(nu)).norm(P.p(), a.k + 8);
            }
            if (!(d.hi() < bound)) {
                throw ChainViolationError("stage " + std::to_string(t + 1) + " moves node " +
                                          to_string(nu) + " by 2^-(k+1) or more");
            }
        }
        if (b.k < a.k) {
            throw ChainViolationError("margin exponents decrease after stage " +
                                      std::to_string(t));
        }
    }
}

StageApproximant stage_limit(const Presentation& P, const std::vector<Stage>& stages,
                             const Node& nu, long k) {
    check_chain(P, stages);
    bool seen = false;
    for (std::size_t t = 0; t < stages.size(); ++t) {
        const Stage& s = stages[t];
        const bool has = s.vector_form ? s.coords.count(nu) > 0 : s.phi.count(nu) > 0;
        seen = seen || has;
        if (!has || s.k < k) {
            continue;
        }
        StageApproximant a;
        a.stage = t;
        if (s.phi.count(nu)) {
            a.value = s.phi.at(nu);
        }
        if (s.coords.count(nu)) {
            a.coords = s.coords.at(nu);
        }
        a.tail_bound = pow2(-s.k);
        return a;
    }
    if (!seen) {
        throw DomainShapeError("node " + to_string(nu) + " is in no stage domain");
    }
    throw BudgetExhaustedError("no stage has margin exponent >= " + std::to_string(k));
}

RootedMap attach_root(const NodeMap& phi, const Exponent& p, long precision) {
    RootedMap out;
    for (const auto& [nu, f] : phi) {
        if (nu.empty()) {
            throw DomainShapeError("attach_root expects an orchard without the root");
        }
        if (nu.size() != 1) {
            continue;
        }
        const std::uint32_t i = nu[0];
        const Interval nrm = f.norm(p, precision);
        if (!(nrm.lo() > 0)) {
            throw ZeroNormError("level-1 value at " + to_string(nu) + " has no certified norm");
        }
        const Rational two = pow2(-static_cast<long>(i));
        if (nrm.is_point()) {
            out.scale[i] = two / nrm.lo();
            out.scale_exact[i] = true;
        } else {
            const Interval c = two * reciprocal(nrm);
            out.scale[i] = c.mid();
            out.scale_exact[i] = false;
        }
    }
    StepFn root;
    for (const auto& [nu, f] : phi) {
        auto it = out.scale.find(nu[0]);
        if (it == out.scale.end()) {
            throw DomainShapeError("node " + to_string(nu) + " has no level-1 ancestor");
        }
        out.psi[nu] = ComplexRational(it->second) * f;
        if (nu.size() == 1) {
            root += out.psi[nu];
        }
    }
    out.psi[kRoot] = root;
    return out;
}

}  // namespace lpiso
