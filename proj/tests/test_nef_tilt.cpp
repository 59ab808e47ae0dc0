#include <doctest.h>

#include <variant>

#include "progeny/errors.hpp"
#include "progeny/laws.hpp"
#include "progeny/nef_tilt.hpp"
#include "progeny/progeny_map.hpp"
#include "progeny/rational.hpp"

using namespace gw;

TEST_CASE("tilting a geometric law stays geometric") {
    OffspringLaw p = OffspringLaw::geometric(make_rational(1, 2), 10);
    OffspringLaw tilted = tilt::tilt_offspring(p, make_rational(1, 2));
    REQUIRE(std::holds_alternative<GeometricFamily>(tilted.family()));
    CHECK(std::get<GeometricFamily>(tilted.family()).alpha == make_rational(1, 4));
    for (int n = 0; n <= 10; ++n)
        CHECK(tilted.mass(static_cast<std::uint64_t>(n)) ==
              make_rational(3, 4) * pow_int(make_rational(1, 4), n));
}

TEST_CASE("tilting the critical b=2 law gives the same (3/4)(1/4)^n prefix") {
    OffspringLaw p = OffspringLaw::sibuya_offspring(Rational(2), 10);
    OffspringLaw tilted = tilt::tilt_offspring(p, make_rational(1, 2));
    for (int n = 0; n <= 10; ++n)
        CHECK(tilted.mass(static_cast<std::uint64_t>(n)) ==
              make_rational(3, 4) * pow_int(make_rational(1, 4), n));
}

TEST_CASE("supercritical tilts are refused") {
    OffspringLaw p = OffspringLaw::geometric(make_rational(1, 2), 10);
    CHECK_THROWS_AS(tilt::tilt_offspring(p, make_rational(3, 2)), SupercriticalTilt);
}

TEST_CASE("tilt domain errors") {
    OffspringLaw p = OffspringLaw::geometric(make_rational(1, 2), 10);
    CHECK_THROWS_AS(tilt::tilt_offspring(p, Rational(0)), TiltOutOfRange);
    CHECK_THROWS_AS(tilt::tilt_offspring(p, Rational(2)), TiltOutOfRange); // at the radius
    OffspringLaw untagged = OffspringLaw::from_pmf({make_rational(1, 2), make_rational(1, 4)});
    CHECK_THROWS_AS(tilt::tilt_offspring(untagged, make_rational(3, 2)), TiltOutOfRange);
    ProgenyLaw q = ProgenyLaw::sibuya(make_rational(1, 2), 10);
    CHECK_THROWS_AS(tilt::tilt_progeny(q, Rational(0)), TiltOutOfRange);
    CHECK_THROWS_AS(tilt::tilt_progeny(q, make_rational(5, 4)), TiltOutOfRange);
}

TEST_CASE("tilting a progeny law composes the tag") {
    ProgenyLaw q = ProgenyLaw::sibuya(make_rational(1, 2), 10);
    ProgenyLaw tilted = tilt::tilt_progeny(q, make_rational(3, 4));
    REQUIRE(std::holds_alternative<SibuyaFamily>(tilted.family()));
    const auto& fam = std::get<SibuyaFamily>(tilted.family());
    CHECK(fam.a == make_rational(1, 2));
    CHECK(fam.rho == make_rational(3, 4));
    CHECK(tilted.mass(1) == make_rational(3, 4));
    CHECK(tilted.mass(2) == make_rational(9, 64));

    // second tilt picked so the composed normalizer stays rational:
    // 1 - (3/4)(20/27) = 4/9, a perfect square
    ProgenyLaw twice = tilt::tilt_progeny(tilted, make_rational(20, 27));
    REQUIRE(std::holds_alternative<SibuyaFamily>(twice.family()));
    CHECK(std::get<SibuyaFamily>(twice.family()).rho == make_rational(5, 9));
    CHECK(twice.mass(1) == make_rational(5, 6));
}

TEST_CASE("tilted mean closed forms") {
    OffspringLaw p = OffspringLaw::geometric(make_rational(1, 2), 10);
    tilt::MeanReport m = tilt::tilted_mean(p, make_rational(3, 4));
    CHECK(m.exact);
    CHECK(m.value == make_rational(3, 5));
    tilt::MeanReport at_one = tilt::tilted_mean(p, Rational(1));
    CHECK(at_one.value == Rational(1));

    OffspringLaw tail_free =
        OffspringLaw::from_pmf({make_rational(1, 2), make_rational(1, 2)});
    tilt::MeanReport mt = tilt::tilted_mean(tail_free, make_rational(1, 2));
    CHECK(mt.exact);
    CHECK(mt.value == make_rational(1, 3)); // (1/2 * 1/2) / (1/2 + 1/4)

    OffspringLaw with_tail =
        OffspringLaw::from_pmf({make_rational(1, 2), make_rational(1, 4)});
    tilt::MeanReport ml = tilt::tilted_mean(with_tail, make_rational(1, 2));
    CHECK_FALSE(ml.exact);
    CHECK_THROWS_AS(tilt::tilted_mean(with_tail, make_rational(3, 2)), TiltOutOfRange);
}

TEST_CASE("solve_rho closed forms are exact") {
    OffspringLaw geo = OffspringLaw::geometric(make_rational(1, 2), 20);
    ProgenyLaw geo_q = progeny_of(geo, 20);
    tilt::RhoResult r1 = tilt::solve_rho(geo_q, make_rational(3, 4));
    CHECK(r1.exact);
    CHECK(r1.value == make_rational(15, 16));

    ProgenyLaw sib = ProgenyLaw::sibuya(make_rational(1, 2), 20);
    tilt::RhoResult r2 = tilt::solve_rho(sib, make_rational(1, 2));
    CHECK(r2.exact);
    CHECK(r2.value == make_rational(3, 4));

    // pre-tilted family: rho0 = 21/25 normalizes the gf by 3/5; inverting
    // a = 1/2 squares, so every rational target solves exactly
    ProgenyLaw pre = ProgenyLaw::sibuya_tilted(make_rational(1, 2), make_rational(21, 25), 20);
    tilt::RhoResult r3 = tilt::solve_rho(pre, make_rational(25, 27));
    CHECK(r3.exact);
    CHECK(r3.value == make_rational(1625, 1701));
}

TEST_CASE("solve_rho bisection handles untagged laws") {
    ProgenyLaw sib = ProgenyLaw::sibuya(make_rational(1, 2), 30);
    ProgenyLaw untagged = ProgenyLaw::from_pmf(sib.pmf().mass);
    Rational target = truncated_gf_value(untagged.pmf(), make_rational(1, 2));
    tilt::RhoResult res = tilt::solve_rho(untagged, target);
    CHECK(res.value == make_rational(1, 2)); // first midpoint hits
    CHECK_FALSE(res.exact);                  // the stored prefix has tail mass

    // a target the dyadic midpoints never hit exactly: answer within tol
    Rational off_target = truncated_gf_value(untagged.pmf(), make_rational(1, 3));
    tilt::RhoResult approx = tilt::solve_rho(untagged, off_target);
    CHECK_FALSE(approx.exact);
    Rational err = approx.value - make_rational(1, 3);
    if (err < 0)
        err = -err;
    CHECK(err <= tilt::BisectOptions::default_tol());
}

TEST_CASE("solve_rho range errors") {
    ProgenyLaw sib = ProgenyLaw::sibuya(make_rational(1, 2), 10);
    CHECK_THROWS_AS(tilt::solve_rho(sib, Rational(0)), OutOfRange);
    CHECK_THROWS_AS(tilt::solve_rho(sib, Rational(2)), OutOfRange);
}

TEST_CASE("tilted-pair residual vanishes for consistent pairs") {
    OffspringLaw geo = OffspringLaw::geometric(make_rational(1, 2), 25);
    ProgenyLaw geo_q = progeny_of(geo, 25);
    CHECK(tilt::tilted_pair_residual(geo, geo_q, make_rational(3, 4), 20).is_zero());

    OffspringLaw hb = OffspringLaw::sibuya_offspring(Rational(2), 25);
    ProgenyLaw sib = ProgenyLaw::sibuya(make_rational(1, 2), 25);
    CHECK(tilt::tilted_pair_residual(hb, sib, make_rational(1, 2), 20).is_zero());
}

TEST_CASE("the supercritical check precedes the rho solve") {
    OffspringLaw geo = OffspringLaw::geometric(make_rational(1, 2), 25);
    ProgenyLaw geo_q = progeny_of(geo, 25);
    CHECK_THROWS_AS(tilt::tilted_pair_residual(geo, geo_q, make_rational(3, 2), 20),
                    SupercriticalTilt);
}
