#include <random>

#include <gtest/gtest.h>

#include <drep/series.hpp>

#include "support/random_series.hpp"

using namespace drep;

namespace
{

Series t(int power = 1)
{
    return Series::variable(1, 1, power);
}

Series one1()
{
    return Series::one(1);
}

} // namespace

TEST(Series, PolynomialProductIsExact)
{
    const Series p = (one1() + t()) * (one1() - t());
    EXPECT_TRUE(p.exact());
    EXPECT_EQ(p, one1() - t(2));
    EXPECT_EQ(t(-1) * t(), one1());
}

TEST(Series, ProductTracksPrecision)
{
    const Series a = one1() + Series::big_oh(1, 3);
    const Series p = a * t();
    EXPECT_EQ(p.hi(), 4);
    EXPECT_EQ(to_string(p), "t1 + O(t1^4)");
}

TEST(Series, InvertGeometric)
{
    working_precision() = 32;
    const Series b = invert(one1() - t());
    EXPECT_EQ(b.hi(), 32);
    for (int k = 0; k < 32; ++k) {
        EXPECT_EQ(b.coefficient(k).scalar(), 1);
    }
    EXPECT_TRUE(equal_up_to_precision(b * (one1() - t()), one1()));
}

TEST(Series, InvertValuation)
{
    const Series b = invert(t(2) * (one1() + t()));
    EXPECT_EQ(b.valuation(), -2);
    EXPECT_THROW(invert(Series::zero(1)), ZeroDivision);
    EXPECT_THROW(invert(Series::big_oh(1, 4)), UndeterminedLeadingTerm);
}

TEST(Series, InvertMonomialStaysExact)
{
    const Series b = invert(Rational(2) * Series::monomial(2, {1, -3}));
    EXPECT_TRUE(b.exact());
    EXPECT_EQ(b, make_rational(1, 2) * Series::monomial(2, {-1, 3}));
}

TEST(Series, Derivations)
{
    for (int m = -3; m <= 3; ++m) {
        EXPECT_EQ(derive(t(m), 1), Rational(m) * (m == 0 ? Series::zero(1) : t(m - 1)));
    }
    EXPECT_TRUE(derive(Series::constant(2, 7), 1).is_exact_zero());
    // d/dt1 of t1^2 t2^5 acts on the t2-coefficient
    EXPECT_EQ(derive(Series::monomial(2, {2, 5}), 1), Rational(2) * Series::monomial(2, {1, 5}));
    EXPECT_EQ(derive(Series::monomial(2, {2, 5}), 2), Rational(5) * Series::monomial(2, {2, 4}));
    EXPECT_THROW(derive(t(), 2), IndexOutOfRange);
}

TEST(Series, DeriveShrinksWindow)
{
    const Series a = t(-1) + Series::big_oh(1, 5);
    EXPECT_EQ(derive(a, 1).hi(), 4);
}

TEST(Series, Residues)
{
    EXPECT_EQ(residue(t(-1)), 1);
    for (int k = -4; k <= 4; ++k) {
        if (k != -1) {
            EXPECT_EQ(residue(t(k)), 0);
        }
    }
    EXPECT_EQ(residue(Series::monomial(2, {-1, -1})), 1);
    EXPECT_EQ(residue(Series::monomial(2, {-1, 0})), 0);
    EXPECT_THROW(residue(Series::big_oh(1, -1)), InsufficientPrecision);
}

TEST(Series, LevelMismatch)
{
    EXPECT_THROW(Series::one(1) * Series::one(2), LevelMismatch);
}

TEST(Series, TextForm)
{
    EXPECT_EQ(to_string(one1() - t(2)), "1 - t1^2");
    EXPECT_EQ(to_string(Series::monomial(2, {-1, 2}, make_rational(-3, 2))), "-3/2*t1^(-1)*t2^2");
    EXPECT_EQ(to_string(Series::zero(2)), "0");
}

TEST(SeriesProperties, RingAxioms)
{
    std::mt19937 rng(11);
    for (int level = 1; level <= 2; ++level) {
        for (int trial = 0; trial < 60; ++trial) {
            const bool trunc = trial % 2 == 1;
            const Series a = test_support::random_series(rng, level, -2, 3, 4, trunc);
            const Series b = test_support::random_series(rng, level, -2, 3, 4, trunc);
            const Series c = test_support::random_series(rng, level, -2, 3, 4, trunc);
            EXPECT_TRUE(equal_up_to_precision((a * b) * c, a * (b * c)));
            EXPECT_TRUE(equal_up_to_precision(a * (b + c), a * b + a * c));
            EXPECT_TRUE(equal_up_to_precision(a * b, b * a));
        }
    }
}

TEST(SeriesProperties, InverseIsTwoSided)
{
    std::mt19937 rng(5);
    working_precision() = 12;
    for (int trial = 0; trial < 200; ++trial) {
        const int level = trial % 3 == 2 ? 2 : 1;
        const Series a = test_support::random_nonzero_series(rng, level, -2, 3, trial % 2 == 1);
        const Series b = invert(a);
        EXPECT_EQ(b.valuation(), -a.valuation());
        EXPECT_TRUE(equal_up_to_precision(a * b, Series::one(level)));
        EXPECT_TRUE(equal_up_to_precision(b * a, Series::one(level)));
    }
    working_precision() = 32;
}

TEST(SeriesProperties, LeibnizAndSchwarz)
{
    std::mt19937 rng(7);
    for (int trial = 0; trial < 60; ++trial) {
        const Series a = test_support::random_series(rng, 2, -3, 3, 4, trial % 2 == 1);
        const Series b = test_support::random_series(rng, 2, -3, 3, 4, trial % 3 == 1);
        for (int i = 1; i <= 2; ++i) {
            EXPECT_TRUE(equal_up_to_precision(derive(a * b, i), derive(a, i) * b + a * derive(b, i)));
        }
        EXPECT_TRUE(equal_up_to_precision(derive(derive(a, 1), 2), derive(derive(a, 2), 1)));
    }
}

TEST(SeriesProperties, ResidueOfDerivativeVanishes)
{
    std::mt19937 rng(13);
    for (int trial = 0; trial < 100; ++trial) {
        const int level = 1 + trial % 2;
        const Series f = test_support::random_series(rng, level, -4, 3, 5);
        EXPECT_EQ(residue(derive(f, level)), 0);
        EXPECT_EQ(residue(derive(f, 1)), 0);
    }
}
