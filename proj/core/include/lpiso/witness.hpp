#pragma once

#include "lpiso/node.hpp"
#include "lpiso/presentation.hpp"

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <vector>

namespace lpiso {

/// Coefficients beta with a certified enclosure of ||v - sum beta(nu) psi(nu)||_p.
struct Witness {
    std::map<Node, ComplexRational> beta;
    Interval residual;
};

struct WitnessOptions {
    int irls_iterations = 80;
    // Evaluations allowed to the oracle pattern search.
    std::size_t oracle_budget = 4000;
};

/// Solves sum beta_i cols_i = v exactly over Q(i); nullopt when v is not in
/// the span. Free coefficients are set to zero.
std::optional<std::vector<ComplexRational>> solve_exact(const StepFn& v,
                                                        const std::vector<StepFn>& cols);

/// Best residual found for v against the span of the columns: exact solve,
/// then iteratively reweighted least squares snapped to rationals. The
/// residual enclosure has width <= 2^-k.
std::vector<ComplexRational> best_coefficients(const StepFn& v, const std::vector<StepFn>& cols,
                                               const Exponent& p, long k,
                                               const WitnessOptions& opt = {});

Witness best_witness(const StepFn& v, const NodeMap& psi, const Exponent& p, long k,
                     const WitnessOptions& opt = {});

/// A witness with residual upper bound < 2^-N, or nullopt when the search
/// found none (which never proves the distance is >= 2^-N).
std::optional<Witness> dist_to_span_witness(const StepFn& v, const NodeMap& psi, const Exponent& p,
                                            long N, const WitnessOptions& opt = {});

/// Presentation form: v and the values of psi are rational vectors over P.
/// White-box presentations are materialised; oracle presentations are
/// searched with a coordinate pattern search on a shrinking Q(i) grid that
/// only queries the norm oracle.
std::optional<Witness> dist_to_span_witness(const Presentation& P, const RationalVector& v,
                                            const std::map<Node, RationalVector>& psi, long N,
                                            const WitnessOptions& opt = {});

std::optional<Witness> dist_to_span_witness(const Presentation& P, const RationalVector& v,
                                            const NodeMap& psi, long N,
                                            const WitnessOptions& opt = {});

/// Norm-oracle pattern search minimising residual(beta) over Q(i)^n.
/// residual(beta, k) must return an enclosure of width <= 2^-k. Stops early
/// once the upper bound drops below 2^-stop.
std::vector<ComplexRational> pattern_search(
    std::size_t n, const std::function<Interval(const std::vector<ComplexRational>&, long)>& residual,
    long stop, std::size_t budget);

}  // namespace lpiso
