#pragma once

#include "lpiso/enclosure.hpp"
#include "lpiso/node.hpp"
#include "lpiso/presentation.hpp"
#include "lpiso/stepfn.hpp"

#include <map>
#include <vector>

namespace lpiso {

/// 2(|z|^p + |w|^p) - (|z - w|^p + |z + w|^p), without the normalising
/// constant. Nonnegative for p < 2 and nonpositive for p > 2.
Interval sigma_inner(const ComplexRational& z, const ComplexRational& w, const Exponent& p, long k);

/// sigma(z, w) = |4 - 2 sqrt2^p|^-1 |2(|z|^p + |w|^p) - (|z - w|^p + |z + w|^p)|.
Interval sigma_scalar(const ComplexRational& z, const ComplexRational& w, const Exponent& p,
                      long k);

/// sigma(f, g) computed from p-th powers of the norms of f, g, f - g, f + g.
Interval sigma_vec(const StepFn& f, const StepFn& g, const Exponent& p, long k);

/// The same functional using only norm-oracle queries on a, b, a - b, a + b.
Interval sigma_vec(const Presentation& P, const RationalVector& a, const RationalVector& b, long k);

/// Sum of sigma over unordered incomparable pairs plus sigma(psi(nu') - psi(nu),
/// psi(nu')) over strict descendants nu' of nu.
Interval sigma_map(const NodeMap& psi, const Exponent& p, long k);
Interval sigma_map(const Presentation& P, const std::map<Node, RationalVector>& psi, long k);

/// Incomparable nodes have disjointly supported values and psi(nu') is a
/// subvector of psi(nu) whenever nu is a prefix of nu'.
bool is_separating_antitone_exact(const NodeMap& psi);

/// Separating antitone, injective, never zero, on an orchard.
bool is_partial_disintegration(const NodeMap& phi);

/// 2 sigma(psi)^(1/p).
Interval dist_bound(const NodeMap& psi, const Exponent& p, long k);

/// The pointwise min-term integrand on a breakpoint list.
struct PointwiseSigma {
    std::vector<Rational> breaks;
    std::vector<Interval> values;  // one enclosure per cell
};

struct RepairResult {
    NodeMap repaired;
    PointwiseSigma sigma_hat;
    // sup_nu ||psi'(nu) - psi(nu)||^p over S'
    Interval lhs;
    // sup_{nu in S} ||phi(nu) - psi(nu)||^p + 2^p sigma(phi | psi on S' - S)
    Interval rhs;
    bool bound_certified = false;
    long precision = 0;  // precision at which the bound was certified
};

/// Turns psi on S' (agreeing approximately with the partial disintegration
/// phi on S) into a separating antitone map that equals phi on S. Each node of
/// S' - S keeps the value of its deepest ancestor in S, cut down to the set
/// where it is not dominated by the min-term integrand. Throws
/// DomainShapeError if S' is not an orchard containing S or a new node has no
/// ancestor in S.
RepairResult repair(const NodeMap& phi, const NodeMap& psi, const Exponent& p, long k = 20);

}  // namespace lpiso

namespace lpiso {

/// Oracle form of dist_bound for maps given as rational vectors over P.
Interval dist_bound(const Presentation& P, const std::map<Node, RationalVector>& psi, long k);

}  // namespace lpiso
