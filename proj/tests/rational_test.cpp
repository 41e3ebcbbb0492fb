#include "graphgrade/rational.hpp"

#include <gtest/gtest.h>

#include <random>

using graphgrade::Rational;
using graphgrade::RationalOverflow;

TEST(RationalTest, NormalizesSignAndTerms)
{
    const Rational r(6, -8);
    EXPECT_EQ(r.num(), -3);
    EXPECT_EQ(r.den(), 4);
    EXPECT_EQ(Rational(0, 5), Rational(0));
    EXPECT_THROW(Rational(1, 0), std::domain_error);
}

TEST(RationalTest, FloorCeilRound)
{
    EXPECT_EQ(Rational(-27, 10).floor(), -3);
    EXPECT_EQ(Rational(-27, 10).ceil(), -2);
    EXPECT_EQ(Rational(27, 10).floor(), 2);
    EXPECT_EQ(Rational(47, 10).ceil(), 5);
    EXPECT_EQ(Rational(5, 2).round_half_up(), 3);
    EXPECT_EQ(Rational(-5, 2).round_half_up(), -2);
    EXPECT_EQ(Rational(-46, 10).round_half_up(), -5);
}

TEST(RationalTest, ExactDecimalArithmetic)
{
    EXPECT_EQ(Rational(1, 10) + Rational(2, 10), Rational(3, 10));
    EXPECT_LT(Rational(-2375, 100), Rational(-235, 10));
}

TEST(RationalTest, DecimalStrings)
{
    EXPECT_EQ(to_decimal_string(Rational(2625, 100)), "26.25");
    EXPECT_EQ(to_decimal_string(Rational(-30)), "-30");
    EXPECT_EQ(to_decimal_string(Rational(-1, 8)), "-0.125");
    EXPECT_EQ(to_decimal_string(Rational(1, 3)), "1/3");
}

TEST(RationalTest, OverflowIsReported)
{
    const Rational big(std::numeric_limits<std::int64_t>::max());
    EXPECT_THROW(big * Rational(2), RationalOverflow);
    EXPECT_THROW(big + Rational(1), RationalOverflow);
}

TEST(RationalTest, OrderingMatchesCrossMultiplication)
{
    std::mt19937 rng(7);
    std::uniform_int_distribution<int> num(-1000, 1000), den(1, 1000);
    for (int i = 0; i < 5000; ++i) {
        const int a = num(rng), b = den(rng), c = num(rng), d = den(rng);
        const long lhs = static_cast<long>(a) * d, rhs = static_cast<long>(c) * b;
        EXPECT_EQ(Rational(a, b) < Rational(c, d), lhs < rhs);
        EXPECT_EQ(Rational(a, b) == Rational(c, d), lhs == rhs);
    }
}
