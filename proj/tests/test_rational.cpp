#include <doctest.h>

#include "progeny/errors.hpp"
#include "progeny/rational.hpp"

using namespace gw;

TEST_CASE("make_rational canonicalizes") {
    CHECK(make_rational(2, 4) == make_rational(1, 2));
    CHECK(make_rational(-2, -4) == make_rational(1, 2));
    CHECK(make_rational(2, -4) == make_rational(-1, 2));
    CHECK(to_string(make_rational(2, -4)) == "-1/2");
    CHECK_THROWS_AS(make_rational(1, 0), ParseError);
}

TEST_CASE("parse_rational accepts num/den and integers") {
    CHECK(parse_rational("3/4") == make_rational(3, 4));
    CHECK(parse_rational("-3/4") == make_rational(-3, 4));
    CHECK(parse_rational("6/8") == make_rational(3, 4));
    CHECK(parse_rational("42") == Rational(42));
    CHECK(parse_rational("  7/2 ") == make_rational(7, 2));
    CHECK(parse_rational("2000000001/1000000000") ==
          make_rational(2000000001L, 1000000000L));
}

TEST_CASE("parse_rational rejects junk and division by zero") {
    CHECK_THROWS_AS(parse_rational(""), ParseError);
    CHECK_THROWS_AS(parse_rational("abc"), ParseError);
    CHECK_THROWS_AS(parse_rational("1/0"), ParseError);
    CHECK_THROWS_AS(parse_rational("1/2/3"), ParseError);
    CHECK_THROWS_AS(parse_rational("1e3"), ParseError);
}

TEST_CASE("parse_rational rejects decimals but names the exact equivalent") {
    try {
        parse_rational("0.3");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("3/10") != std::string::npos);
    }
    try {
        parse_rational("2.5");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("5/2") != std::string::npos);
    }
}

TEST_CASE("to_string always carries the denominator") {
    CHECK(to_string(Rational(3)) == "3/1");
    CHECK(to_string(make_rational(-1, 27)) == "-1/27");
}

TEST_CASE("pow_int covers negative exponents") {
    CHECK(pow_int(make_rational(2, 3), 3) == make_rational(8, 27));
    CHECK(pow_int(make_rational(2, 3), -2) == make_rational(9, 4));
    CHECK(pow_int(make_rational(5, 7), 0) == Rational(1));
    CHECK_THROWS_AS(pow_int(Rational(0), -1), Error);
}

TEST_CASE("pochhammer and factorial") {
    CHECK(pochhammer(make_rational(1, 2), 3) == make_rational(15, 8)); // 1/2 * 3/2 * 5/2
    CHECK(pochhammer(Rational(1), 5) == Rational(120));
    CHECK(pochhammer(Rational(-2), 4) == Rational(0)); // hits zero
    CHECK(pochhammer(make_rational(5, 4), 0) == Rational(1));
    CHECK(factorial(0) == Rational(1));
    CHECK(factorial(6) == Rational(720));
}

TEST_CASE("rational_root and rational_pow") {
    CHECK(rational_root(make_rational(4, 9), 2) == make_rational(2, 3));
    CHECK(rational_root(make_rational(27, 8), 3) == make_rational(3, 2));
    CHECK_FALSE(rational_root(make_rational(1, 2), 2).has_value());
    CHECK(rational_pow(make_rational(4, 9), make_rational(1, 2)) == make_rational(2, 3));
    CHECK(rational_pow(make_rational(8, 27), make_rational(2, 3)) == make_rational(4, 9));
    CHECK_FALSE(rational_pow(make_rational(1, 2), make_rational(1, 2)).has_value());
    CHECK(rational_pow(make_rational(9, 4), make_rational(-1, 2)) == make_rational(2, 3));
}
