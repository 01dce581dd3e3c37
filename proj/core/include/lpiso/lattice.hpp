#pragma once

#include "lpiso/node.hpp"
#include "lpiso/stepfn.hpp"
#include "lpiso/witness.hpp"

#include <cstddef>
#include <functional>
#include <set>
#include <vector>

namespace lpiso {

/// A finite family of nonempty sets. Simple when incomparable members are
/// disjoint; a lower semilattice when closed under intersection (empty
/// intersections count as the bottom element and are not stored).
class SetSemilattice {
public:
    SetSemilattice() = default;
    explicit SetSemilattice(std::set<DyadicSet> members);

    const std::set<DyadicSet>& members() const { return members_; }
    bool empty() const { return members_.empty(); }
    std::size_t size() const { return members_.size(); }
    bool contains(const DyadicSet& s) const { return members_.count(s) > 0; }

    bool is_simple() const;
    bool is_meet_closed() const;
    /// A is a union of members (the empty set always is).
    bool generates(const DyadicSet& a) const;
    /// Y minus the union of the members strictly inside Y.
    DyadicSet remnant(const DyadicSet& y) const;
    DyadicSet union_all() const;

    friend bool operator==(const SetSemilattice&, const SetSemilattice&) = default;

private:
    std::set<DyadicSet> members_;
};

/// Adds the pieces of A cut out by the remnants of D together with the part of
/// A outside every member. The result is simple, contains D, and generates A.
/// Returns D unchanged when D already generates A.
SetSemilattice adjoin_set(const SetSemilattice& d, const DyadicSet& a);

/// Supports of the values of a map.
SetSemilattice support_semilattice(const NodeMap& phi);

/// Adds newvec to the range of the partial disintegration phi: as a new top
/// node when it is incomparable with every value, otherwise as a new last
/// child of the node carrying the smallest value above it. Throws
/// SimplicityViolationError when the range plus newvec is not a simple
/// family of nonzero vectors properly extending the range.
NodeMap extend_to_orchard(const NodeMap& phi, const StepFn& newvec);

/// The pointwise join of a simple family of compatible vectors.
StepFn join_values(const NodeMap& phi);

struct DenseExtensionOptions {
    std::size_t max_rounds = 4096;
    WitnessOptions witness;
};

struct DenseExtension {
    NodeMap psi;
    std::vector<Witness> witnesses;  // one per target, residual < 2^-k
    std::size_t rounds = 0;
};

/// Cells of the common refinement of the range and the targets, then the
/// dyadic intervals in canonical order.
std::function<DyadicSet(std::size_t)> default_dense_sequence(const NodeMap& phi,
                                                             const std::vector<StepFn>& targets);

/// Extends phi to a partial disintegration whose span is within 2^-k of each
/// target by adjoining the sets dense(0), dense(1), ... one round at a time.
/// Throws BudgetExhaustedError when max_rounds rounds do not suffice.
DenseExtension extend_dense(const NodeMap& phi, const std::vector<StepFn>& targets, long k,
                            const std::function<DyadicSet(std::size_t)>& dense, const Exponent& p,
                            const DenseExtensionOptions& opt = {});

}  // namespace lpiso
