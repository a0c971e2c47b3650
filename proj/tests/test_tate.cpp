#include <gtest/gtest.h>

#include <drep/connection.hpp>
#include <drep/dmodule.hpp>
#include <drep/tate.hpp>

using namespace drep;

namespace
{

Series t(int p = 1)
{
    return Series::variable(1, 1, p);
}

Series c(const Rational &q)
{
    return Series::constant(1, q);
}

DiffOperator d_plus(const Series &a)
{
    return DiffOperator::covariant(1, 1, SeriesMatrix(1, 1, a));
}

DiffOperator theta_plus(const Rational &alpha)
{
    return {1, {SeriesMatrix(1, 1, t())}, SeriesMatrix(1, 1, c(alpha))};
}

Connection rank1(const Series &a)
{
    Connection conn = Connection::trivial(TowerField::standard(1), 1);
    conn.a[0](0, 0) = a;
    return conn;
}

} // namespace

TEST(OperatorIndex, Derivative)
{
    const auto r = operator_index(d_plus(Series::zero(1)));
    EXPECT_TRUE(r.stabilized());
    EXPECT_EQ(r.ker_dim, 1);
    EXPECT_EQ(r.coker_dim, 1);
    EXPECT_EQ(r.index, 0);
    ASSERT_EQ(r.ker_basis.size(), 1u);
    EXPECT_EQ(r.ker_basis[0][0].coefficients().size(), 1u);
    EXPECT_EQ(r.ker_basis[0][0].coefficient(0), Series::one(0));
}

TEST(OperatorIndex, ThetaWithNonIntegralShift)
{
    const auto r = operator_index(theta_plus(Rational(1, 3)));
    EXPECT_TRUE(r.stabilized());
    EXPECT_EQ(r.ker_dim, 0);
    EXPECT_EQ(r.coker_dim, 0);
}

TEST(OperatorIndex, ThetaWithIntegralShiftHasMonomialKernel)
{
    // theta - 3 kills t^3.
    const auto r = operator_index(theta_plus(Rational(-3)));
    EXPECT_EQ(r.ker_dim, 1);
    EXPECT_EQ(r.coker_dim, 1);
    EXPECT_EQ(r.index, 0);
}

TEST(OperatorIndex, IrregularRankOne)
{
    IndexOptions o;
    o.predicted_index = -1;
    const auto r = operator_index(d_plus(-t(-2)), o);
    EXPECT_TRUE(r.stabilized());
    EXPECT_EQ(r.ker_dim, 0);
    EXPECT_EQ(r.coker_dim, 1);
    EXPECT_EQ(r.index, -1);
    EXPECT_TRUE(r.agrees_with_prediction());
}

TEST(OperatorIndex, ExponentialSolutionIsInKernel)
{
    // d - 1 has kernel exp(t).
    const auto r = operator_index(d_plus(c(-1)));
    EXPECT_EQ(r.ker_dim, 1);
    EXPECT_EQ(r.index, 0);
    ASSERT_EQ(r.ker_basis.size(), 1u);
    const Series &e = r.ker_basis[0][0];
    const Rational c0 = e.coefficient(0).scalar();
    EXPECT_EQ(e.coefficient(3).scalar(), c0 / 6);
}

TEST(OperatorIndex, EulerCharacteristicIsMinusIrregularity)
{
    std::vector<Connection> catalog{rank1(Series::zero(1)), rank1(c(Rational(1, 2)) * t(-1)),
                                    rank1(c(Rational(-3, 4)) * t(-1)), rank1(c(2) * t(-1))};
    for (int m = 1; m <= 3; ++m) {
        catalog.push_back(rank1(c(-m) * t(-m - 1)));
    }
    Connection ext = Connection::trivial(TowerField::standard(1), 2);
    ext.a[0](0, 0) = c(-2) * t(-3);
    ext.a[0](0, 1) = t(-1);
    catalog.push_back(ext);
    catalog.push_back(direct_sum(rank1(c(-1) * t(-2)), rank1(c(Rational(1, 2)) * t(-1))));
    for (const auto &conn : catalog) {
        const int irr = irregularity(conn);
        const auto r = operator_index(conn.covariant(1));
        ASSERT_TRUE(r.stabilized());
        EXPECT_EQ(r.ker_dim - r.coker_dim, -irr);
        EXPECT_LE(r.ker_dim, conn.rank);
    }
}

TEST(OperatorIndex, Additivity)
{
    const Connection x = rank1(c(-2) * t(-3));
    const Connection y = rank1(Series::zero(1));
    const auto ix = operator_index(x.covariant(1));
    const auto iy = operator_index(y.covariant(1));
    const auto is = operator_index(direct_sum(x, y).covariant(1));
    EXPECT_EQ(is.index, ix.index + iy.index);
    EXPECT_EQ(is.ker_dim, ix.ker_dim + iy.ker_dim);
}

TEST(OperatorIndex, StableUnderFurtherEnlargement)
{
    IndexOptions big;
    big.schedule = {8, 12, 16, 24, 32, 40, 48};
    big.max_window = 48;
    for (const auto &op : {d_plus(-t(-2)), theta_plus(Rational(2, 5)), d_plus(Series::zero(1))}) {
        const auto r = operator_index(op);
        ASSERT_TRUE(r.stabilized());
        IndexOptions later = big;
        later.schedule = {*r.stabilized_at + 8, *r.stabilized_at + 16};
        const auto r2 = operator_index(op, later);
        EXPECT_EQ(r2.ker_dim, r.ker_dim);
        EXPECT_EQ(r2.coker_dim, r.coker_dim);
    }
}

TEST(CalkinIso, Examples)
{
    const auto mult = calkin_iso_check(DiffOperator::multiplication(1, SeriesMatrix(1, 1, c(1))));
    EXPECT_TRUE(mult.iso);
    EXPECT_EQ(mult.report.ker_dim, 0);
    EXPECT_EQ(mult.report.coker_dim, 0);

    const auto d = calkin_iso_check(d_plus(Series::zero(1)));
    EXPECT_TRUE(d.iso);
    EXPECT_EQ(d.report.ker_dim, 1);
    EXPECT_EQ(d.report.coker_dim, 1);

    const auto z = calkin_iso_check(DiffOperator::zero(1, 1, 1));
    EXPECT_FALSE(z.iso);
    ASSERT_GE(z.report.history.size(), 2u);
    EXPECT_GT(z.report.history.back().ker, z.report.history.front().ker);
    EXPECT_THROW(require_stabilized(z.report), Unstabilized);
}

TEST(OperatorIndex, MeromorphicGaugeKeepsKernelAndIndex)
{
    // A unipotent gauge with poles gives a nilpotent leading coefficient.
    Connection ext = Connection::trivial(TowerField::standard(1), 2);
    ext.a[0](0, 0) = c(Rational(-3, 4)) * t(-1);
    ext.a[0](0, 1) = t(-1);
    ext.a[0](1, 1) = c(2) * t(-1);
    SeriesMatrix u = identity_matrix(2, 1), l = identity_matrix(2, 1);
    u(0, 1) = c(2) * t(-2);
    l(1, 0) = c(-1) * t(-2);
    const auto before = operator_index(ext.covariant(1));
    const auto after = operator_index(gauge(ext, u * l).covariant(1));
    ASSERT_TRUE(after.stabilized());
    EXPECT_EQ(after.ker_dim, before.ker_dim);
    EXPECT_EQ(after.index, before.index);
    EXPECT_LE(after.ker_dim, 2);
}
