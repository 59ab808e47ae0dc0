#include <doctest.h>

#include <vector>

#include "progeny/errors.hpp"
#include "progeny/laws.hpp"
#include "progeny/rational.hpp"
#include "progeny/sibuya.hpp"

using namespace gw;

TEST_CASE("geometric offspring law") {
    OffspringLaw p = OffspringLaw::geometric(make_rational(1, 2), 10);
    for (int n = 0; n <= 10; ++n)
        CHECK(p.mass(static_cast<std::uint64_t>(n)) == pow_int(make_rational(1, 2), n + 1));
    CHECK(p.pmf().tail == pow_int(make_rational(1, 2), 11));
    MeanBound m = p.mean();
    CHECK(m.exact);
    CHECK(m.lower == Rational(1)); // alpha/(1-alpha) at alpha = 1/2

    CHECK(p.gf_value(Rational(1)) == Rational(1));
    CHECK(p.gf_value(make_rational(3, 2)) == Rational(2)); // (1/2)/(1-3/4)
    CHECK_THROWS_AS(p.gf_value(Rational(2)), TiltOutOfRange); // at the radius
    CHECK(p.gf_derivative_value(Rational(1)) == Rational(1));
}

TEST_CASE("critical h_b offspring law, frozen prefix at b = 3/2") {
    OffspringLaw p = OffspringLaw::sibuya_offspring(make_rational(3, 2), 6);
    std::vector<Rational> want{make_rational(2, 3),    make_rational(1, 6),
                               make_rational(5, 72),   make_rational(5, 144),
                               make_rational(67, 3456), make_rational(3, 256),
                               make_rational(625, 82944)};
    for (std::uint64_t n = 0; n <= 6; ++n)
        CHECK(p.mass(n) == want[static_cast<std::size_t>(n)]);
    MeanBound m = p.mean();
    CHECK(m.exact);
    CHECK(m.lower == Rational(1)); // critical by construction
    // closed-form values off the stored prefix
    CHECK(p.gf_value(Rational(0)) == make_rational(2, 3)); // 1/b
    CHECK(p.gf_value(Rational(1)) == Rational(1));
    CHECK(p.gf_derivative_value(Rational(1)) == Rational(1));
}

TEST_CASE("h_b factory enforces the positivity window") {
    CHECK_THROWS_AS(OffspringLaw::sibuya_offspring(make_rational(5, 2), 10), InvalidParams);
    CHECK_THROWS_AS(OffspringLaw::sibuya_offspring(Rational(1), 10), InvalidParams);
    CHECK_NOTHROW(OffspringLaw::sibuya_offspring(Rational(2), 10));
}

TEST_CASE("delta laws") {
    OffspringLaw d0 = OffspringLaw::delta0();
    CHECK(d0.mass(0) == Rational(1));
    CHECK(d0.mean().lower == Rational(0));
    CHECK(d0.gf_value(make_rational(1, 2)) == Rational(1));
    CHECK_THROWS_AS(d0.gf_value(make_rational(7, 2)), TiltOutOfRange); // untagged: [0,1] only
    ProgenyLaw d1 = ProgenyLaw::delta1();
    CHECK(d1.mass(1) == Rational(1));
    CHECK(d1.gf_value(make_rational(1, 3)) == make_rational(1, 3));
}

TEST_CASE("pmf validation is exact") {
    CHECK_THROWS_AS(OffspringLaw::from_pmf({make_rational(1, 2), make_rational(-1, 4)}),
                    InvalidParams);
    CHECK_THROWS_AS(OffspringLaw::from_pmf({make_rational(1, 2), make_rational(2, 3)}),
                    InvalidParams);
    CHECK_THROWS_AS(
        OffspringLaw::from_pmf({make_rational(1, 2)}, make_rational(1, 3)), // sum != 1
        InvalidParams);
    OffspringLaw ok = OffspringLaw::from_pmf({make_rational(1, 2), make_rational(1, 4)});
    CHECK(ok.pmf().tail == make_rational(1, 4));
}

TEST_CASE("untagged laws bound the mean from below") {
    OffspringLaw p = OffspringLaw::from_pmf({make_rational(1, 2), make_rational(1, 4)});
    MeanBound m = p.mean();
    CHECK_FALSE(m.exact);
    CHECK(m.lower == make_rational(1, 4)); // 0*(1/2) + 1*(1/4), tail unknown
    OffspringLaw full = OffspringLaw::from_pmf({make_rational(1, 2), make_rational(1, 2)});
    MeanBound mf = full.mean();
    CHECK(mf.exact); // tail-free
    CHECK(mf.lower == make_rational(1, 2));
}

TEST_CASE("gf truncation stops at the stored prefix") {
    OffspringLaw p = OffspringLaw::geometric(make_rational(1, 3), 5);
    series::PowerSeries f = p.gf(5);
    CHECK(f[0] == make_rational(2, 3));
    CHECK_THROWS_AS(p.gf(6), InsufficientOrder);
}

TEST_CASE("progeny law of the heavy-tailed family") {
    ProgenyLaw q = ProgenyLaw::sibuya(make_rational(1, 2), 10);
    sibuya::SibuyaParams sp;
    sp.a = make_rational(1, 2);
    for (std::uint64_t n = 1; n <= 10; ++n)
        CHECK(q.mass(n) == sibuya::pmf(sp, n));
    CHECK(q.gf(10)[0] == Rational(0));
    CHECK(q.gf_value(make_rational(3, 4)) == make_rational(1, 2));
    CHECK_THROWS_AS(q.gf_value(make_rational(1, 3)), InvalidParams); // irrational root
}

TEST_CASE("tilted progeny law renormalizes") {
    ProgenyLaw q = ProgenyLaw::sibuya_tilted(make_rational(1, 2), make_rational(3, 4), 8);
    CHECK(q.mass(1) == make_rational(3, 4));
    CHECK(q.mass(2) == make_rational(9, 64));
    CHECK(q.gf_value(Rational(1)) == Rational(1));
}

TEST_CASE("truncated_gf_value is the Horner value of the prefix") {
    Pmf pmf;
    pmf.support_start = 0;
    pmf.mass = {make_rational(1, 2), make_rational(1, 4), make_rational(1, 8)};
    pmf.tail = make_rational(1, 8);
    CHECK(truncated_gf_value(pmf, make_rational(1, 2)) ==
          make_rational(1, 2) + make_rational(1, 8) + make_rational(1, 32));
    Pmf shifted;
    shifted.support_start = 1;
    shifted.mass = {make_rational(1, 2), make_rational(1, 2)};
    shifted.tail = Rational(0);
    CHECK(truncated_gf_value(shifted, make_rational(1, 2)) ==
          make_rational(1, 4) + make_rational(1, 8));
}

TEST_CASE("laws reject inconsistent exact mass") {
    Pmf bad;
    bad.support_start = 0;
    bad.mass = {make_rational(1, 2)};
    bad.tail = make_rational(1, 3); // sum 5/6 != 1
    CHECK_THROWS_AS(OffspringLaw{bad}, InvalidParams);
}
