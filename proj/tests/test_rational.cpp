#include "doctest.h"

#include "gram/core/rational.h"

using gram::Rational;

TEST_CASE("rational arithmetic normalizes") {
    CHECK(Rational(1, 2) + Rational(1, 3) == Rational(5, 6));
    CHECK(Rational(2, 4) == Rational(1, 2));
    CHECK(Rational(3, 2) * Rational(2, 3) == Rational(1));
    CHECK(Rational(1) - Rational(3, 2) == Rational(-1, 2));
    CHECK(Rational(-1, -2) == Rational(1, 2));
}

TEST_CASE("rational parses decimal notation exactly") {
    CHECK(Rational::from_decimal("0.5") == Rational(1, 2));
    CHECK(Rational::from_decimal("1") == Rational(1));
    CHECK(Rational::from_decimal("-2.25") == Rational(-9, 4));
    CHECK(Rational::from_decimal("0.125") == Rational(1, 8));
}

TEST_CASE("rational ordering") {
    CHECK(Rational(1, 3) < Rational(1, 2));
    CHECK(Rational(-1, 2) < Rational(0));
    CHECK(gram::abs(Rational(-3, 4)) == Rational(3, 4));
}
