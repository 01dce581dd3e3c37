#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lpiso/errors.hpp"
#include "lpiso/sigma.hpp"
#include "support.hpp"

using namespace lpiso;
using lpiso::testing::chi;
using lpiso::testing::encloses;

namespace {

const Exponent p1(Rational(1));
const Exponent p3(Rational(3));
const Exponent p4(Rational(4));

NodeMap scaled_violation() { return {{{0}, chi(0, 1, 2)}, {{0, 0}, 2 * chi(0, 1, 2)}}; }

}  // namespace

TEST_CASE("sigma_scalar examples") {
    const Interval z0 = sigma_scalar(ComplexRational(3, -2), ComplexRational(0), p3, 30);
    CHECK(z0.contains_zero());
    CHECK(z0.width_at_most_pow2(30));
    CHECK(encloses(sigma_scalar(1, 1, p1, 40), "1.707106781186547524400844362104849039285"));
    CHECK(sigma_scalar(1, 1, p4, 20).contains(Rational(3)));
    CHECK(encloses(sigma_scalar(ComplexRational(1, 1), ComplexRational(2, -1), Exponent(ratio(3, 2)), 40),
                   "2.374451156458962838582771340818148181737"));
    CHECK_THROWS_AS(sigma_scalar(1, 1, Exponent(Rational(2)), 10), PEqualsTwoError);
}

TEST_CASE("sigma_inner sign") {
    CHECK(sigma_inner(1, 1, p1, 20).lo() > 0);
    CHECK(sigma_inner(1, 1, p3, 20).hi() < 0);
    CHECK(sigma_inner(1, 0, p3, 20).contains_zero());
}

TEST_CASE("sigma_vec examples") {
    const Interval d = sigma_vec(chi(0, 1, 2), 3 * chi(1, 2, 2), p3, 30);
    CHECK(d.contains_zero());
    CHECK(d.width_at_most_pow2(30));
    CHECK(encloses(sigma_vec(chi(0, 1, 2), chi(0, 1, 2), p1, 40),
                   "0.8535533905932737622004221810524245196424"));
    CHECK(sigma_vec(chi(0, 3, 4), StepFn(), p3, 30).contains_zero());
    // overlap on [1/2, 3/4)
    CHECK(encloses(sigma_vec(chi(0, 3, 4), chi(1, 2, 2), p3, 40),
                   "0.6035533905932737622004221810524245196424"));
}

TEST_CASE("sigma_vec through a norm oracle only") {
    const Presentation O = oracle_only(standard_dyadic(p1));
    const Interval s = sigma_vec(O, RationalVector::unit(1), RationalVector::unit(1), 40);
    CHECK(encloses(s, "0.8535533905932737622004221810524245196424"));
    CHECK(sigma_vec(O, RationalVector::unit(1), RationalVector::unit(2), 30).contains_zero());
}

TEST_CASE("sigma_map examples") {
    const NodeMap sep{{{0}, chi(0, 1, 2)}, {{1}, chi(1, 2, 2)}};
    CHECK(sigma_map(sep, p3, 30).contains_zero());
    const Interval v1 = sigma_map(scaled_violation(), p1, 40);
    CHECK(v1.lo() > 0);
    CHECK(encloses(v1, "0.8535533905932737622004221810524245196424"));
    CHECK(encloses(sigma_map(scaled_violation(), p3, 40), "3.017766952966368811002110905262122598212"));
    CHECK(sigma_map(NodeMap{}, p3, 10) == Interval(Rational(0)));
}

TEST_CASE("sigma_map in oracle form") {
    const Presentation P = standard_dyadic(p3);
    std::map<Node, RationalVector> m{{{0}, RationalVector::unit(1)}, {{1}, RationalVector::unit(2)}};
    CHECK(sigma_map(P, m, 30).contains_zero());
    m[{0, 0}] = RationalVector::unit(1, 2);
    CHECK(encloses(sigma_map(P, m, 40), "3.017766952966368811002110905262122598212"));
    CHECK(encloses(dist_bound(P, m, 40), "2.89018224301961442671716839992471465483"));
}

TEST_CASE("exact separation test") {
    CHECK(is_separating_antitone_exact({{{0}, chi(0, 1, 2)}}));
    CHECK_FALSE(is_separating_antitone_exact({{{0}, chi(0, 1, 2)}, {{1}, chi(1, 3, 4)}}));
    CHECK(is_separating_antitone_exact({{{0}, chi(0, 1, 2)}, {{0, 0}, chi(0, 1, 4)}}));
    CHECK_FALSE(is_separating_antitone_exact(scaled_violation()));
    CHECK(is_partial_disintegration({{{0}, chi(0, 1, 2)}, {{0, 0}, chi(0, 1, 4)}}));
    // repeated value, zero value, missing parent
    CHECK_FALSE(is_partial_disintegration({{{0}, chi(0, 1, 2)}, {{0, 0}, chi(0, 1, 2)}}));
    CHECK_FALSE(is_partial_disintegration({{{0}, StepFn()}}));
    CHECK_FALSE(is_partial_disintegration({{{0, 0}, chi(0, 1, 2)}}));
}

TEST_CASE("dist_bound examples") {
    CHECK(dist_bound({{{0}, chi(0, 1, 2)}, {{1}, chi(1, 2, 2)}}, p3, 30).contains_zero());
    CHECK(encloses(dist_bound(scaled_violation(), p1, 40), "1.707106781186547524400844362104849039285"));
    CHECK(encloses(dist_bound(scaled_violation(), p3, 40), "2.89018224301961442671716839992471465483"));
    CHECK(dist_bound(NodeMap{}, p3, 10) == Interval(Rational(0)));
}

TEST_CASE("repair examples") {
    const NodeMap phi{{{0}, chi(0, 1, 1)}};
    {
        const RepairResult r = repair(phi, phi, p3);
        CHECK(r.repaired == phi);
        CHECK(r.bound_certified);
    }
    {
        const NodeMap psi{{{0}, chi(0, 1, 1)}, {{0, 0}, chi(0, 1, 2)}};
        const RepairResult r = repair(phi, psi, p1);
        CHECK(r.repaired.at({0, 0}) == chi(0, 1, 2));
        CHECK(r.repaired.at({0}) == chi(0, 1, 1));
        CHECK(r.bound_certified);
        for (const auto& v : r.sigma_hat.values) {
            CHECK(v.contains_zero());
        }
    }
    {
        const NodeMap phi2{{{0}, chi(0, 3, 4)}};
        const StepFn stray = chi(0, 1, 2) + ComplexRational(ratio(1, 64)) * chi(3, 4, 4);
        const NodeMap psi{{{0}, chi(0, 3, 4)}, {{0, 0}, stray}};
        for (const Exponent& p : {p1, p3}) {
            const RepairResult r = repair(phi2, psi, p);
            CHECK(is_separating_antitone_exact(r.repaired));
            CHECK(r.repaired.at({0, 0}) == chi(0, 1, 2));
            CHECK(r.bound_certified);
            CHECK(r.lhs.hi() <= r.rhs.hi());
        }
    }
}

TEST_CASE("repair domain errors") {
    const NodeMap phi{{{0}, chi(0, 1, 1)}};
    CHECK_THROWS_AS(repair(phi, {{{1}, chi(0, 1, 2)}}, p3), DomainShapeError);
    CHECK_THROWS_AS(repair(phi, {{{0}, chi(0, 1, 1)}, {{1}, chi(0, 1, 2)}}, p3), DomainShapeError);
    CHECK_THROWS_AS(repair(phi, {{{0}, chi(0, 1, 1)}, {{0, 0, 0}, chi(0, 1, 2)}}, p3),
                    DomainShapeError);
}

TEST_CASE("repair cuts across branches below the source") {
    // The new node (0,2) sources from (0); whatever overlaps its siblings
    // (0,0) and (0,1) has to go.
    const NodeMap phi{{{0}, chi(0, 1, 1)}, {{0, 0}, chi(0, 1, 2)}, {{0, 1}, chi(1, 2, 2)}};
    NodeMap psi = phi;
    psi[{0, 2}] = chi(1, 4, 4);
    const RepairResult r = repair(phi, psi, p3);
    CHECK(is_separating_antitone_exact(r.repaired));
    const StepFn v = r.repaired.at({0, 2});
    CHECK(v.support().subset_of(DyadicSet::interval(ratio(3, 4), 1)));
}

TEST_CASE("property: exact separation agrees with sigma containing zero") {
    testing::Rng rng(23);
    for (int i = 0; i < 60; ++i) {
        NodeMap m = rng.tree_map(3, 7, false);
        if (rng.coin() && m.size() >= 2) {
            // break it: overwrite a random value with an overlapping one
            auto it = std::next(m.begin(), rng.range(0, static_cast<long>(m.size()) - 1));
            it->second = it->second + chi(0, 1, 1);
        }
        const bool exact = is_separating_antitone_exact(m);
        for (const Exponent& p : {p1, p3}) {
            const Interval s = sigma_map(m, p, 40);
            CHECK(s.contains_zero() == exact);
        }
    }
}
