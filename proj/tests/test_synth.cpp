#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lpiso/certificate.hpp"
#include "lpiso/errors.hpp"
#include "lpiso/json_io.hpp"
#include "lpiso/sigma.hpp"
#include "lpiso/synth.hpp"
#include "support.hpp"

using namespace lpiso;
using lpiso::testing::chi;

namespace {

const Exponent p1(Rational(1));
const Exponent p3(Rational(3));

bool within(const StepFn& a, const StepFn& b, const Exponent& p, long k) {
    return (a - b).norm(p, k + 8).hi() < pow2(-k);
}

}  // namespace

TEST_CASE("seed_stage examples") {
    const Presentation D = standard_dyadic(p1);
    const Stage s = seed_stage(D);
    CHECK(s.n == 0);
    CHECK(s.phi.size() == 1);
    CHECK(s.phi.at(Node{0}) == chi(0, 1, 1));
    CHECK(verify_certificate(s.cert, D).ok);

    const Presentation Z = from_generators(p1, {StepFn(), chi(0, 1, 2), chi(1, 2, 2)}, "zero-first");
    CHECK(seed_stage(Z).phi.at(Node{0}) == chi(0, 1, 2));

    const Presentation Z2 = from_generators(p1, {StepFn(), StepFn()}, "all-zero");
    CHECK_THROWS_AS(seed_stage(Z2), BudgetExhaustedError);
}

TEST_CASE("seed_stage through a norm oracle uses vector form") {
    const Presentation O = oracle_only(from_generators(p1, {StepFn(), chi(0, 1, 2)}, "toy"));
    const Stage s = seed_stage(O);
    CHECK(s.vector_form);
    CHECK(s.coords.at(Node{0}) == RationalVector::unit(1));
    CHECK(verify_certificate(s.cert, O).ok);
}

TEST_CASE("advance_stage on the standard dyadic presentation") {
    for (const Exponent& p : {p1, p3}) {
        const Presentation D = standard_dyadic(p);
        const Stage s0 = seed_stage(D);
        const Stage s1 = advance_stage(D, s0, s0.k + 1, 1);
        CHECK(s1.n == 1);
        CHECK(s1.cert.level >= 1);
        CHECK(verify_certificate(s1.cert, D).ok);
        CHECK(is_partial_disintegration(s1.phi));
        CHECK(s1.cert.residuals.at(0).hi() < ratio(1, 2));
        CHECK(within(s1.phi.at(Node{0}), s0.phi.at(Node{0}), p, s0.k + 1));
        CHECK(s1.k >= s0.k + 1);
        CHECK_THROWS_AS(advance_stage(D, s0, s0.k, 1), std::invalid_argument);
    }
}

TEST_CASE("advance_stage accepts a stage that already meets the level") {
    const Presentation D = standard_dyadic(p1);
    const Stage s0 = seed_stage(D);
    const Stage s1 = advance_stage(D, s0, s0.k + 1, 1);
    const Stage again = advance_stage(D, s1, s1.k + 1, 1);
    CHECK(again.phi == s1.phi);
    CHECK(again.k == s1.k);
    CHECK(advance_stage(D, s0, s0.k + 1, 0).phi == s0.phi);
}

TEST_CASE("dovetail search on an oracle-only two-generator presentation") {
    const Presentation O = oracle_only(from_generators(p1, {chi(0, 1, 2), chi(1, 2, 2)}, "halves"));
    SynthOptions opt;
    opt.strategy = Strategy::Dovetail;
    const auto stages = synthesize_stages(O, 2, opt);
    REQUIRE(stages.size() == 3);
    for (const auto& s : stages) {
        CHECK(s.vector_form);
        CHECK(s.phi.empty());
        CHECK(verify_certificate(s.cert, O).ok);
        CHECK(s.cert.level >= static_cast<long>(s.n));
    }
    CHECK_NOTHROW(check_chain(O, stages));
}

TEST_CASE("dovetail on a white-box presentation keeps step values") {
    const Presentation D = standard_dyadic(p1);
    SynthOptions opt;
    opt.strategy = Strategy::Dovetail;
    const auto stages = synthesize_stages(D, 1, opt);
    for (const auto& s : stages) {
        CHECK(s.vector_form);
        for (const auto& [nu, v] : s.coords) {
            CHECK(s.phi.at(nu) == D.materialize(v));
        }
    }
}

TEST_CASE("synthesize_stages forms a certified chain") {
    for (const Exponent& p : {p1, p3}) {
        const Presentation D = standard_dyadic(p);
        const auto stages = synthesize_stages(D, 3);
        REQUIRE(stages.size() == 4);
        CHECK_NOTHROW(check_chain(D, stages));
        for (std::size_t t = 0; t < stages.size(); ++t) {
            CHECK(stages[t].n == t);
            CHECK(is_partial_disintegration(stages[t].phi));
            CHECK(verify_certificate(stages[t].cert).ok);
            CHECK(verify_certificate(certificate_from_json(to_json(stages[t].cert))).ok);
            if (t > 0) {
                CHECK(stages[t].k > stages[t - 1].k);
            }
        }
    }
}

TEST_CASE("stage_margin is positive and grows with the level") {
    const Presentation D = standard_dyadic(p1);
    const auto stages = synthesize_stages(D, 2);
    for (const auto& s : stages) {
        CHECK(stage_margin(D, s) >= 0);
        CHECK(s.k >= stage_margin(D, s));
    }
}

TEST_CASE("check_chain detects broken chains") {
    const Presentation D = standard_dyadic(p1);
    auto stages = synthesize_stages(D, 2);
    auto moved = stages;
    moved[1].phi[Node{0}] = chi(0, 1, 4);
    CHECK_THROWS_AS(check_chain(D, moved), ChainViolationError);
    auto dropped = stages;
    dropped[2].phi.erase(Node{0});
    CHECK_THROWS_AS(check_chain(D, dropped), ChainViolationError);
}

TEST_CASE("stage_limit examples") {
    const Presentation D = standard_dyadic(p1);
    const Stage s0 = seed_stage(D);

    // A constant chain returns the stage value itself.
    Stage s0b = s0;
    s0b.k = s0.k + 1;
    const auto a = stage_limit(D, {s0, s0b}, Node{0}, s0.k);
    CHECK(a.value == s0.phi.at(Node{0}));
    CHECK(a.stage == 0);
    CHECK(a.tail_bound == pow2(-s0.k));

    const auto stages = synthesize_stages(D, 2);
    const auto deep = stage_limit(D, stages, Node{0}, stages.back().k);
    CHECK(deep.stage == stages.size() - 1);
    CHECK(deep.tail_bound <= pow2(-stages.back().k));
    // The tail sum of 2^-(k_t + 1) stays below 2^-k_n.
    Rational tail = 0;
    for (std::size_t t = 1; t < stages.size(); ++t) {
        tail += pow2(-(stages[t].k + 1));
    }
    CHECK(tail < pow2(-stages.front().k));

    CHECK_THROWS_AS(stage_limit(D, stages, Node{7, 7}, 1), DomainShapeError);
    CHECK_THROWS_AS(stage_limit(D, stages, Node{0}, stages.back().k + 1), BudgetExhaustedError);
    auto broken = stages;
    broken[1].phi[Node{0}] = chi(0, 1, 4);
    CHECK_THROWS_AS(stage_limit(D, broken, Node{0}, 1), ChainViolationError);
}

TEST_CASE("attach_root examples") {
    NodeMap phi{{Node{0}, chi(0, 1, 2)}, {Node{1}, chi(1, 2, 2)}};
    const RootedMap r = attach_root(phi, p1);
    CHECK(r.psi.at(Node{0}) == ComplexRational(2) * chi(0, 1, 2));
    CHECK(r.psi.at(Node{1}) == chi(1, 2, 2));
    CHECK(r.psi.at(kRoot) == ComplexRational(2) * chi(0, 1, 2) + chi(1, 2, 2));
    CHECK(r.scale.at(0) == 2);
    CHECK(r.scale.at(1) == 1);
    CHECK(r.scale_exact.at(0));

    const StepFn unit = ComplexRational(2) * chi(0, 1, 2);
    const RootedMap single = attach_root({{Node{0}, unit}}, p1);
    CHECK(single.psi.at(Node{0}) == unit);
    CHECK(single.psi.at(kRoot) == unit);

    CHECK_THROWS_AS(attach_root({{Node{0}, StepFn()}}, p1), ZeroNormError);
}

TEST_CASE("attach_root with an irrational norm rounds the scale") {
    const NodeMap phi{{Node{0}, chi(0, 1, 2)}};
    const RootedMap r = attach_root(phi, p3, 64);
    CHECK_FALSE(r.scale_exact.at(0));
    // The exact constant is 2^(1/3).
    const Rational c = r.scale.at(0);
    CHECK(abs(c * c * c - 2) < pow2(-60));
}

TEST_CASE("property: attach_root keeps order patterns and separation") {
    lpiso::testing::Rng rng(0x51);
    for (int trial = 0; trial < 80; ++trial) {
        const NodeMap phi = rng.tree_map(3, 9, false);
        REQUIRE(is_separating_antitone_exact(phi));
        const Exponent& p = trial % 2 ? p3 : p1;
        const RootedMap r = attach_root(phi, p, 48);
        CHECK(is_separating_antitone_exact(r.psi));
        for (const auto& [a, fa] : phi) {
            for (const auto& [b, fb] : phi) {
                if (a[0] == b[0]) {
                    CHECK(subvector_le(fa, fb) == subvector_le(r.psi.at(a), r.psi.at(b)));
                }
            }
        }
        StepFn root;
        for (const auto& [nu, f] : r.psi) {
            if (nu.size() == 1) {
                root += f;
            }
        }
        CHECK(root == r.psi.at(kRoot));
    }
}

TEST_CASE("strategy names") {
    CHECK(parse_strategy("whitebox") == Strategy::WhiteBox);
    CHECK(parse_strategy("dovetail") == Strategy::Dovetail);
    CHECK(to_string(Strategy::Dovetail) == "dovetail");
    CHECK_THROWS_AS(parse_strategy("greedy"), ParseError);
}
