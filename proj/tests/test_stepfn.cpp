#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lpiso/stepfn.hpp"
#include "support.hpp"

using namespace lpiso;
using lpiso::testing::chi;
using lpiso::testing::encloses;

TEST_CASE("canonical form") {
    const StepFn f = chi(0, 1, 2) + chi(1, 2, 2);
    CHECK(f == chi(0, 1, 1));
    CHECK(f.cells() == 1);
    CHECK(StepFn().is_zero());
    CHECK(StepFn::from_pieces({{ratio(1, 4), ratio(1, 2), ComplexRational(2)}}) ==
          2 * chi(1, 2, 4));
    CHECK_THROWS(StepFn::on_breaks({0, ratio(1, 2)}, {ComplexRational(1)}));
}

TEST_CASE("refine_common") {
    auto [a, b] = refine_common(chi(0, 1, 1), chi(0, 1, 1));
    CHECK(a == chi(0, 1, 1));
    CHECK(b == chi(0, 1, 1));
    auto [c, d] = refine_common(chi(0, 1, 2), chi(1, 3, 4));
    const std::vector<Rational> expect{0, ratio(1, 4), ratio(1, 2), ratio(3, 4), 1};
    CHECK(c.breaks() == expect);
    CHECK(d.breaks() == expect);
    CHECK(c == chi(0, 1, 2));
    CHECK(d == chi(1, 3, 4));
}

TEST_CASE("linear_combine") {
    const StepFn f = 3 * chi(1, 3, 8);
    CHECK(linear_combine({{ComplexRational(1), f}}) == f);
    CHECK(linear_combine({{ComplexRational(1), chi(0, 1, 2)}, {ComplexRational(1), chi(1, 2, 2)}}) ==
          chi(0, 1, 1));
    CHECK(linear_combine({{ComplexRational(2), chi(0, 1, 2)}, {ComplexRational(-2), chi(0, 1, 2)}})
              .is_zero());
}

TEST_CASE("support") {
    CHECK(StepFn().support().empty());
    CHECK(chi(0, 1, 2).support() == DyadicSet::interval(0, ratio(1, 2)));
    const StepFn f = 2 * chi(0, 1, 4) - chi(1, 2, 2);
    CHECK(f.support() == DyadicSet({{0, ratio(1, 4)}, {ratio(1, 2), 1}}));
    CHECK(f.support().measure() == ratio(3, 4));
}

TEST_CASE("norm_p") {
    const Exponent p1(Rational(1));
    const Exponent p3(Rational(3));
    CHECK(StepFn().norm(p1, 10) == Interval(Rational(0)));
    CHECK(chi(0, 1, 2).norm(p1, 10) == Interval(ratio(1, 2)));
    const Interval n = chi(0, 1, 2).norm(p3, 12);
    CHECK(n.width_at_most_pow2(12));
    CHECK(encloses(n, "0.7937005259840997373758528196361541301957"));
    // (1+2i) on [0,1/3), -1/2 on [1/3,1), p = 3/2
    const StepFn g = StepFn::from_pieces({{0, ratio(1, 3), ComplexRational(1, 2)},
                                          {ratio(1, 3), 1, ComplexRational(ratio(-1, 2))}});
    CHECK(encloses(g.norm(Exponent(ratio(3, 2)), 40), "1.22165044652369148138525158166628841663"));
}

TEST_CASE("subvector order") {
    CHECK(subvector_le(chi(0, 1, 4), chi(0, 1, 2)));
    CHECK_FALSE(subvector_le(chi(0, 1, 2), 2 * chi(0, 1, 2)));
    CHECK(subvector_le(StepFn(), 5 * chi(1, 3, 4)));
    CHECK_FALSE(subvector_le(chi(0, 1, 1), chi(0, 1, 2)));
}

TEST_CASE("meet") {
    const StepFn f = 3 * chi(1, 3, 8) - chi(0, 1, 8);
    CHECK(meet(f, f) == f);
    CHECK(meet(chi(0, 1, 2), chi(1, 3, 4)) == chi(1, 2, 4));
    CHECK(meet(chi(0, 1, 2), 2 * chi(0, 1, 2)).is_zero());
}

TEST_CASE("reciprocal_witness") {
    CHECK(reciprocal_witness(2 * chi(0, 1, 2)) == ComplexRational(ratio(1, 2)) * chi(0, 1, 2));
    CHECK(reciprocal_witness(StepFn()).is_zero());
    CHECK(reciprocal_witness(ComplexRational(1, 1) * chi(0, 1, 4)) ==
          ComplexRational(ratio(1, 2), ratio(-1, 2)) * chi(0, 1, 4));
}

TEST_CASE("dyadic sets") {
    const DyadicSet a = DyadicSet::interval(0, ratio(1, 2));
    const DyadicSet b = DyadicSet::interval(ratio(1, 4), ratio(3, 4));
    CHECK((a | b) == DyadicSet::interval(0, ratio(3, 4)));
    CHECK((a & b) == DyadicSet::interval(ratio(1, 4), ratio(1, 2)));
    CHECK((a - b) == DyadicSet::interval(0, ratio(1, 4)));
    CHECK(a.complement() == DyadicSet::interval(ratio(1, 2), 1));
    CHECK(DyadicSet({{0, ratio(1, 4)}, {ratio(1, 4), ratio(1, 2)}}) == a);
    CHECK(a.contains(0));
    CHECK_FALSE(a.contains(ratio(1, 2)));
    CHECK((a & a.complement()).empty());
}

TEST_CASE("property: stepfn invariants on random functions") {
    testing::Rng rng(11);
    const Exponent p(ratio(3, 2));
    for (int i = 0; i < 300; ++i) {
        const StepFn f = rng.step(0, 1, rng.range(1, 8));
        const StepFn g = rng.step(0, 1, rng.range(1, 8));
        // subvector <=> g - f and f disjoint
        CHECK(subvector_le(f, g) == (support(g - f) & support(f)).empty());
        // meet is the infimum
        const StepFn m = meet(f, g);
        CHECK(subvector_le(m, f));
        CHECK(subvector_le(m, g));
        const StepFn h = f.restrict_to(support(m) & DyadicSet::interval(0, ratio(rng.range(0, 4), 4)));
        CHECK(subvector_le(h, m));
        CHECK(reciprocal_witness(f) * f == StepFn::indicator(support(f)));
        // disjoint pieces add in p-th power
        const StepFn a = f.restrict_to(DyadicSet::interval(0, ratio(1, 2)));
        const StepFn b = g.restrict_to(DyadicSet::interval(ratio(1, 2), 1));
        CHECK((a + b).mass(p, 30).intersects(a.mass(p, 32) + b.mass(p, 32)));
        auto [x, y] = refine_common(f, g);
        CHECK(x.breaks() == y.breaks());
        CHECK(x == f);
        CHECK(y == g);
        CHECK((f - g) + g == f);
    }
}
