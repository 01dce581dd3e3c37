#pragma once

#include "lpiso/node.hpp"
#include "lpiso/presentation.hpp"
#include "lpiso/synth.hpp"

#include <map>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

namespace lpiso {

using Coefficients = std::map<Node, ComplexRational>;

/// phi(nu) minus the sum of its children's values.
StepFn nabla(const NodeMap& phi, const Node& nu);

/// nu -> sum of gamma over the prefixes of nu in the domain, so that
/// sum gamma(nu) phi(nu) = sum expand(nu) nabla(nu).
Coefficients expand_in_nabla(const NodeMap& phi, const Coefficients& gamma);

StepFn combine(const NodeMap& phi, const Coefficients& gamma);

/// Exact check of the expansion identity.
bool nabla_identity_holds(const NodeMap& phi, const Coefficients& gamma);

/// sum |expand(nu)|^p ||nabla(nu)||_p^p, the p-th power of the norm of the
/// combination for separating antitone phi.
Interval nabla_norm_pth(const NodeMap& phi, const Coefficients& gamma, const Exponent& p, long k);

/// A node bijection between two domains.
struct DisintegrationIso {
    std::map<Node, Node> f;
};

/// Monotone, injective, onto dom(phi2), and norm preserving up to enclosure
/// overlap at precision k.
bool verify_iso(const DisintegrationIso& iso, const NodeMap& phi1, const NodeMap& phi2,
                const Exponent& p, long k);

/// Interval layout of a tree map: I(root) = [0,1] and the children of each
/// node take consecutive subintervals of length ||phi(child)||_p^p in
/// lexicographic order. Lengths that are not exact rationals are rounded to
/// the grid 2^-precision; err records the total endpoint displacement.
struct IntervalValued {
    NodeMap psi;                  // chi of I(nu)
    std::map<Node, Span> intervals;
    std::map<Node, Rational> endpoint_error;
    DisintegrationIso iso;        // identity node map
    bool exact = true;
};

/// Throws RootNormError if ||phi(root)||_p is certified != 1 at precision k.
IntervalValued interval_valued(const NodeMap& phi, const Exponent& p, long k = 40);

/// Layout from given node lengths (root excluded; I(root) = [0,1]).
IntervalValued interval_layout(const NodeSet& tree, const std::map<Node, Interval>& lengths,
                               long precision);

struct LiftResult {
    Coefficients coeffs;  // over dom(phi2)
    Interval norm_source;
    Interval norm_target;
};

/// Transports coefficients along the node bijection and certifies that the
/// two combinations have overlapping norm enclosures at precision k.
/// Throws IsoCertificationError otherwise.
LiftResult lift_apply(const DisintegrationIso& iso, const NodeMap& phi1, const NodeMap& phi2,
                      const Coefficients& v, const Exponent& p, long k);

struct ResidualParts {
    Rational source_span;   // distance of the generator to the source stage's span
    Rational rescaling;     // rounding of scale factors and interval endpoints
    Rational target_span;   // distance of the transported function to the target intervals
    Rational target_coords; // expressing target stage values over target generators
    Rational total() const { return source_span + rescaling + target_span + target_coords; }
};

/// Images of the first `count` source generators as rational vectors over the
/// target presentation, each with a certified residual bound.
struct IsometryData {
    Exponent p{Rational(1)};
    std::string source;
    std::string target;
    nlohmann::json source_descriptor;
    nlohmann::json target_descriptor;
    long precision = 0;
    std::size_t source_level = 0;
    std::size_t target_level = 0;
    std::vector<RationalVector> images;
    std::vector<ResidualParts> residuals;
};

struct IsometryOptions {
    SynthOptions synth;
    // Extra target levels tried beyond the source level.
    std::size_t target_extra_levels = 24;
};

/// Builds stage disintegrations of both presentations, lays them out as
/// interval maps, composes the interval isomorphisms and lifts. Both
/// presentations must be white-box with a shared exponent p != 2.
IsometryData synthesize_isometry(const Presentation& A, const Presentation& B, long k,
                                 std::size_t budget, const IsometryOptions& opt = {});

/// T applied to a rational vector over A by linearity.
RationalVector apply_isometry(const IsometryData& data, const RationalVector& v);

struct ProbeReport {
    RationalVector probe;
    Interval norm_source;
    Interval norm_target;
    Rational norm_gap;        // certified upper bound of | ||Tv|| - ||v|| |
    Rational predicted_gap;   // sum |v_j| residual_j
};

struct LinearityReport {
    std::size_t first = 0;
    std::size_t second = 0;
    ComplexRational a;
    ComplexRational b;
    Interval residual;  // ||T(av + bw) - aTv - bTw||_B
};

struct VerificationReport {
    std::vector<ProbeReport> probes;
    std::vector<LinearityReport> linearity;
    Rational max_norm_gap = 0;
    Rational max_linearity = 0;
};

VerificationReport verify_isometry(const Presentation& B, const IsometryData& data,
                                   const Presentation& A, const std::vector<RationalVector>& probes,
                                   long k);

/// Deterministic random probe vectors over the first `count` generators.
std::vector<RationalVector> random_probes(std::size_t how_many, std::size_t count,
                                          std::uint64_t seed, std::size_t max_terms = 4);

}  // namespace lpiso
