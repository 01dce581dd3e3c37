#pragma once

#include "lpiso/certificate.hpp"
#include "lpiso/lattice.hpp"
#include "lpiso/node.hpp"
#include "lpiso/presentation.hpp"

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace lpiso {

enum class Strategy { WhiteBox, Dovetail };

std::string to_string(Strategy s);
Strategy parse_strategy(std::string_view text);  // ParseError on anything else

struct SynthOptions {
    Strategy strategy = Strategy::WhiteBox;
    // Generators scanned by seed_stage before giving up.
    std::size_t seed_scan = 64;
    // Rounds of set adjoining per white-box stage.
    std::size_t max_rounds = 4096;
    // Dovetail: nodes added per stage and candidate maps examined.
    std::size_t max_new_nodes = 3;
    std::size_t candidate_budget = 20000;
    WitnessOptions witness;
};

/// One finite stage of the construction. White-box stages carry step-function
/// values in `phi`; dovetail stages carry rational vectors over the
/// presentation in `coords` (and step functions too when the presentation is
/// white-box).
struct Stage {
    std::size_t n = 0;
    NodeMap phi;
    std::map<Node, RationalVector> coords;
    bool vector_form = false;
    // Every map within 2^-k of this one (in sup norm over the domain) stays
    // injective, nonzero, and certifies level n.
    long k = 0;
    SuccessCertificate cert;
};

/// Level 0 stage {(0) -> R(j0)} for the first generator with a certified
/// nonzero norm. Throws BudgetExhaustedError when none is found.
Stage seed_stage(const Presentation& P, const SynthOptions& opt = {});

/// A stage certifying level n whose restriction to the old domain is within
/// 2^-k of s. Requires k >= s.k + 1. Returns s unchanged when it already
/// certifies level n. Throws BudgetExhaustedError when the search fails.
Stage advance_stage(const Presentation& P, const Stage& s, long k, std::size_t n,
                    const SynthOptions& opt = {});

/// Seed plus advances to levels 1..n with k increasing by at least one per
/// changed stage.
std::vector<Stage> synthesize_stages(const Presentation& P, std::size_t n,
                                     const SynthOptions& opt = {});

/// Margin exponent: smallest k >= 0 such that 2^-k is below the slack of the
/// stage's certificate, value norms and pairwise separations.
long stage_margin(const Presentation& P, const Stage& s);

/// Checks ||phi_{t+1}|_{S_t} - phi_t|| < 2^-(k_t + 1) for consecutive stages.
/// Throws ChainViolationError on failure.
void check_chain(const Presentation& P, const std::vector<Stage>& stages);

struct StageApproximant {
    StepFn value;
    RationalVector coords;
    std::size_t stage = 0;
    Rational tail_bound;  // distance to the limit is below this
};

/// Value at nu within 2^-k of the limit map: the first stage with k_t >= k
/// containing nu. Throws ChainViolationError if the chain is broken,
/// DomainShapeError if nu is in no stage, BudgetExhaustedError if no stage
/// is deep enough.
StageApproximant stage_limit(const Presentation& P, const std::vector<Stage>& stages,
                             const Node& nu, long k);

/// psi(nu) = c_{nu(0)} phi(nu) with c_i = 2^-i / ||phi((i))||_p, plus the
/// root psi(lambda) = sum of the level-1 values. When ||phi((i))||_p is
/// irrational c_i is a rational within 2^-precision of the exact constant.
struct RootedMap {
    NodeMap psi;                             // includes kRoot
    std::map<std::uint32_t, Rational> scale;  // c_i
    std::map<std::uint32_t, bool> scale_exact;
};

RootedMap attach_root(const NodeMap& phi, const Exponent& p, long precision = 64);

}  // namespace lpiso
