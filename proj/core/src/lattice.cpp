#include "lpiso/lattice.hpp"

#include "lpiso/errors.hpp"
#include "lpiso/presentation.hpp"

#include <algorithm>

namespace lpiso {

SetSemilattice::SetSemilattice(std::set<DyadicSet> members) : members_(std::move(members)) {
    std::erase_if(members_, [](const DyadicSet& s) { return s.empty(); });
}

bool SetSemilattice::is_simple() const {
    for (auto i = members_.begin(); i != members_.end(); ++i) {
        for (auto j = std::next(i); j != members_.end(); ++j) {
            if (!i->subset_of(*j) && !j->subset_of(*i) && i->intersects(*j)) {
                return false;
            }
        }
    }
    return true;
}

bool SetSemilattice::is_meet_closed() const {
    for (auto i = members_.begin(); i != members_.end(); ++i) {
        for (auto j = std::next(i); j != members_.end(); ++j) {
            const DyadicSet m = *i & *j;
            if (!m.empty() && !members_.count(m)) {
                return false;
            }
        }
    }
    return true;
}

bool SetSemilattice::generates(const DyadicSet& a) const {
    DyadicSet u;
    for (const auto& y : members_) {
        if (y.subset_of(a)) {
            u = u | y;
        }
    }
    return u == a;
}

DyadicSet SetSemilattice::remnant(const DyadicSet& y) const {
    DyadicSet r = y;
    for (const auto& z : members_) {
        if (!(z == y) && z.subset_of(y)) {
            r = r - z;
        }
    }
    return r;
}

DyadicSet SetSemilattice::union_all() const {
    DyadicSet u;
    for (const auto& y : members_) {
        u = u | y;
    }
    return u;
}

SetSemilattice adjoin_set(const SetSemilattice& d, const DyadicSet& a) {
    if (d.generates(a)) {
        return d;
    }
    std::set<DyadicSet> out = d.members();
    for (const auto& y : d.members()) {
        out.insert(d.remnant(y) & a);
    }
    out.insert(a - d.union_all());
    return SetSemilattice(std::move(out));
}

SetSemilattice support_semilattice(const NodeMap& phi) {
    std::set<DyadicSet> s;
    for (const auto& [nu, f] : phi) {
        s.insert(f.support());
    }
    return SetSemilattice(std::move(s));
}

NodeMap extend_to_orchard(const NodeMap& phi, const StepFn& newvec) {
    if (newvec.is_zero()) {
        throw SimplicityViolationError("cannot adjoin the zero vector");
    }
    std::vector<Node> above;
    for (const auto& [nu, g] : phi) {
        if (g == newvec) {
            throw SimplicityViolationError("vector already in the range at " + to_string(nu));
        }
        if (subvector_le(g, newvec)) {
            throw SimplicityViolationError("new vector lies above the value at " + to_string(nu));
        }
        if (subvector_le(newvec, g)) {
            above.push_back(nu);
        } else if (!disjointly_supported(newvec, g)) {
            throw SimplicityViolationError("new vector meets the value at " + to_string(nu) +
                                           " without being comparable");
        }
    }
    NodeMap out = phi;
    const NodeSet dom = domain(phi);
    if (above.empty()) {
        out[Node{static_cast<std::uint32_t>(max_top_index(dom) + 1)}] = newvec;
        return out;
    }
    std::vector<Node> minimal;
    for (const auto& nu : above) {
        const bool is_min = std::none_of(above.begin(), above.end(), [&](const Node& mu) {
            return !(mu == nu) && subvector_le(phi.at(mu), phi.at(nu));
        });
        if (is_min) {
            minimal.push_back(nu);
        }
    }
    if (minimal.size() != 1) {
        throw SimplicityViolationError("no unique smallest value above the new vector");
    }
    const Node& g = minimal.front();
    out[child(g, static_cast<std::uint32_t>(max_child_index(dom, g) + 1))] = newvec;
    return out;
}

StepFn join_values(const NodeMap& phi) {
    StepFn h;
    for (const auto& [nu, f] : phi) {
        // Compatible family: add only the part of f not yet covered.
        h += f.restrict_to(f.support() - h.support());
    }
    return h;
}

std::function<DyadicSet(std::size_t)> default_dense_sequence(const NodeMap& phi,
                                                             const std::vector<StepFn>& targets) {
    std::vector<Rational> br{Rational(0), Rational(1)};
    for (const auto& [nu, f] : phi) {
        br = merge_breaks(br, f.breaks());
    }
    for (const auto& f : targets) {
        br = merge_breaks(br, f.breaks());
    }
    std::vector<DyadicSet> cells;
    if (!targets.empty()) {
        for (std::size_t j = 0; j + 1 < br.size(); ++j) {
            cells.push_back(DyadicSet::interval(br[j], br[j + 1]));
        }
    }
    return [cells = std::move(cells)](std::size_t n) {
        if (n < cells.size()) {
            return cells[n];
        }
        return dyadic_interval(n - cells.size());
    };
}

namespace {

bool certify_all(const NodeMap& psi, const std::vector<StepFn>& targets, long k, const Exponent& p,
                 const WitnessOptions& opt, std::vector<Witness>& out) {
    out.clear();
    for (const auto& f : targets) {
        auto w = dist_to_span_witness(f, psi, p, k, opt);
        if (!w) {
            return false;
        }
        out.push_back(std::move(*w));
    }
    return true;
}

}  // namespace

DenseExtension extend_dense(const NodeMap& phi, const std::vector<StepFn>& targets, long k,
                            const std::function<DyadicSet(std::size_t)>& dense, const Exponent& p,
                            const DenseExtensionOptions& opt) {
    DenseExtension res;
    res.psi = phi;
    if (certify_all(res.psi, targets, k, p, opt.witness, res.witnesses)) {
        return res;
    }
    std::size_t next_check = 1;
    for (std::size_t n = 0; n < opt.max_rounds; ++n) {
        const DyadicSet rn = dense(n);
        res.rounds = n + 1;
        const SetSemilattice f = support_semilattice(res.psi);
        const SetSemilattice f2 = adjoin_set(f, rn);
        if (f2 == f) {
            continue;
        }
        const StepFn h1 = join_values(res.psi);
        const StepFn h = h1 + StepFn::indicator(rn - h1.support());
        std::vector<DyadicSet> fresh;
        for (const auto& s : f2.members()) {
            if (!f.contains(s)) {
                fresh.push_back(s);
            }
        }
        std::stable_sort(fresh.begin(), fresh.end(), [](const DyadicSet& a, const DyadicSet& b) {
            return a.measure() > b.measure();
        });
        for (const auto& s : fresh) {
            res.psi = extend_to_orchard(res.psi, h.restrict_to(s));
        }
        // Witness searches dominate the cost, so they run on a doubling
        // schedule of rounds (and on the last one).
        if (res.rounds < next_check && res.rounds < opt.max_rounds) {
            continue;
        }
        next_check = 2 * res.rounds;
        if (certify_all(res.psi, targets, k, p, opt.witness, res.witnesses)) {
            return res;
        }
    }
    throw BudgetExhaustedError("extend_dense: no certificate within " +
                               std::to_string(opt.max_rounds) + " rounds");
}

}  // namespace lpiso
