#include <gtest/gtest.h>

#include <drep/derham.hpp>
#include <drep/dmodule.hpp>

using namespace drep;

namespace
{

Series v2(int i, int p = 1)
{
    return Series::variable(2, i, p);
}

Series k2(const Rational &q)
{
    return Series::constant(2, q);
}

OneForm form2(const Series &a, const Series &b)
{
    OneForm w;
    w.components = {a, b};
    return w;
}

Connection rank1_2(const Series &a1, const Series &a2)
{
    Connection c = Connection::trivial(TowerField::standard(2), 1);
    c.a[0](0, 0) = a1;
    c.a[1](0, 0) = a2;
    return c;
}

Connection rank1_1(const Series &a)
{
    Connection c = Connection::trivial(TowerField::standard(1), 1);
    c.a[0](0, 0) = a;
    return c;
}

std::vector<FormTuple> acceptance_tuples()
{
    const Series one = k2(1), zero = Series::zero(2);
    return {FormTuple{{form2(one, zero), form2(zero, one)}}, FormTuple{{form2(v2(1, -1), zero), form2(zero, one)}},
            FormTuple{{form2(one, zero), form2(zero, v2(2, -1))}}};
}

} // namespace

TEST(FormTuple, Validation)
{
    const Series one = k2(1), zero = Series::zero(2);
    EXPECT_NO_THROW(FormTuple::standard(2).validate());
    EXPECT_THROW((FormTuple{{form2(one, zero), form2(v2(2), zero)}}).validate(), NotIndependent);
    EXPECT_THROW((FormTuple{{form2(v2(2), zero), form2(zero, one)}}).validate(), NotClosed);
    for (const auto &t : acceptance_tuples()) {
        EXPECT_NO_THROW(t.validate());
        EXPECT_TRUE(t.diagonal());
    }
}

TEST(FormTuple, DualFrame)
{
    const auto f = acceptance_tuples()[1].dual_frame();
    // nu_1 = dt1/t1 -> V_1 = t1 d/dt1.
    EXPECT_EQ(f[0][0], v2(1));
    EXPECT_TRUE(f[0][1].is_zero());
    EXPECT_EQ(f[1][1], k2(1));
}

TEST(Multicomplex, ShapeForRankOneOnF2)
{
    const auto b = build_multicomplex(Connection::trivial(TowerField::standard(2), 1), FormTuple::standard(2));
    EXPECT_EQ(b.object_count(), 4u);
    EXPECT_EQ(b.edges.size(), 8u);
    EXPECT_EQ(b.edge(1, 2, true).sign, -1);
    EXPECT_EQ(b.edge(2, 1, true).sign, 1);
    EXPECT_EQ(b.edge(2, 1, false).sign, -1);
    EXPECT_EQ(b.edge(0, 1, false).op.multiplier()(0, 0), k2(1));
}

TEST(Multicomplex, OneVariableIsABinaryComplexOfLengthTwo)
{
    const auto b = build_multicomplex(rank1_1(-Series::variable(1, 1, -2)), FormTuple::standard(1));
    EXPECT_EQ(b.object_count(), 2u);
    EXPECT_EQ(b.edges.size(), 2u);
    const auto rep = check_multicomplex(b);
    EXPECT_TRUE(rep.squares_ok);
    EXPECT_TRUE(rep.acyclic);
}

TEST(Multicomplex, CatalogSquaresAndAcyclicity)
{
    std::vector<Connection> catalog{Connection::trivial(TowerField::standard(2), 1),
                                    rank1_2(Rational(1, 2) * v2(1, -1), Rational(-1, 3) * v2(2, -1)),
                                    rank1_2(-v2(1, -2), Series::zero(2)), rank1_2(Series::zero(2), -v2(2, -2))};
    catalog.push_back(direct_sum(catalog[1], catalog[3]));
    for (const auto &c : catalog) {
        for (const auto &nu : acceptance_tuples()) {
            const auto rep = check_multicomplex(build_multicomplex(c, nu));
            EXPECT_TRUE(rep.squares_ok);
            EXPECT_TRUE(rep.acyclic) << (rep.acyclicity_failures.empty() ? "" : rep.acyclicity_failures.front());
        }
    }
}

TEST(Multicomplex, RejectsNonClosedTuple)
{
    const FormTuple bad{{form2(v2(2), Series::zero(2)), form2(Series::zero(2), k2(1))}};
    EXPECT_THROW(build_multicomplex(Connection::trivial(TowerField::standard(2), 1), bad), NotClosed);
}

TEST(Multicomplex, SabotagedDifferentialIsDetected)
{
    auto b = build_multicomplex(Connection::trivial(TowerField::standard(2), 1), FormTuple::standard(2));
    b.edge(1, 2, true).op = DiffOperator::zero(2, 1, 1);
    const auto rep = check_multicomplex(b);
    EXPECT_FALSE(rep.squares_ok);
    EXPECT_FALSE(rep.acyclic);
    ASSERT_FALSE(rep.acyclicity_failures.empty());
    EXPECT_NE(rep.acyclicity_failures.front().find("kernel grows"), std::string::npos);
}

TEST(DirectionalProfile, Examples)
{
    const Connection trivial = Connection::trivial(TowerField::standard(2), 1);
    const auto p = directional_kernel_profile(trivial, {Series::zero(2), k2(1)});
    EXPECT_TRUE(p.bounded());
    EXPECT_EQ(p.report.ker_dim, 1);
    EXPECT_EQ(p.ker_lo, 0);
    EXPECT_EQ(p.ker_hi, 1);

    const auto q = directional_kernel_profile(trivial, {Series::zero(2), v2(2)});
    EXPECT_TRUE(q.bounded());
    EXPECT_EQ(q.ker_lo, 0);
    EXPECT_EQ(q.ker_hi, 1);

    const auto r = directional_kernel_profile(rank1_2(Series::zero(2), -v2(2, -2)), {Series::zero(2), k2(1)});
    EXPECT_TRUE(r.bounded());
    EXPECT_EQ(r.report.ker_dim, 0);
    EXPECT_EQ(r.report.coker_dim, 1);
    EXPECT_EQ(r.defect_width, 1);

    const auto s = directional_kernel_profile(trivial, {k2(1), Series::zero(2)});
    EXPECT_TRUE(s.bounded());
    EXPECT_EQ(s.direction, 1);
    EXPECT_EQ(s.report.ker_dim, 1);
}

TEST(Cohomology, OneVariable)
{
    const auto t = cohomology_dims(rank1_1(Series::zero(1)));
    EXPECT_EQ(t.dims, (std::vector<int>{1, 1}));
    const auto a = cohomology_dims(rank1_1(Rational(1, 3) * Series::variable(1, 1, -1)));
    EXPECT_EQ(a.dims, (std::vector<int>{0, 0}));
    const auto irr = cohomology_dims(rank1_1(-Series::variable(1, 1, -2)));
    EXPECT_EQ(irr.dims, (std::vector<int>{0, 1}));
}

TEST(Cohomology, TwoVariablesTrivial)
{
    const auto r = cohomology_dims(Connection::trivial(TowerField::standard(2), 1));
    EXPECT_EQ(r.dims, (std::vector<int>{1, 2, 1}));
    EXPECT_EQ(r.e2, (std::vector<std::vector<int>>{{1, 1}, {1, 1}}));
    ASSERT_TRUE(r.h0_cross_check);
    EXPECT_EQ(*r.h0_cross_check, 1);
    EXPECT_EQ(r.euler(), r.e2_euler());
}

TEST(Cohomology, TwoVariablesProducts)
{
    // Kunneth-type values for exterior products of rank-one models.
    const auto nonres = cohomology_dims(rank1_2(Rational(1, 2) * v2(1, -1), Rational(1, 3) * v2(2, -1)));
    EXPECT_EQ(nonres.dims, (std::vector<int>{0, 0, 0}));
    const auto irr2 = cohomology_dims(rank1_2(Series::zero(2), -v2(2, -2)));
    EXPECT_EQ(irr2.dims, (std::vector<int>{0, 1, 1}));
    const auto irr1 = cohomology_dims(rank1_2(-v2(1, -2), Series::zero(2)));
    EXPECT_EQ(irr1.dims, (std::vector<int>{0, 1, 1}));
    const auto both = cohomology_dims(rank1_2(-v2(1, -2), -v2(2, -2)));
    EXPECT_EQ(both.dims, (std::vector<int>{0, 0, 1}));
    const auto log = cohomology_dims(rank1_2(k2(2) * v2(1, -1), k2(-1) * v2(2, -1)));
    EXPECT_EQ(log.dims, (std::vector<int>{1, 2, 1}));
    EXPECT_EQ(*log.h0_cross_check, 1);
}

TEST(Cohomology, GaugeInvariance)
{
    const Connection c = direct_sum(rank1_2(Series::zero(2), -v2(2, -2)), rank1_2(Rational(1, 2) * v2(1, -1), Series::zero(2)));
    SeriesMatrix g = identity_matrix(2, 2);
    g(0, 1) = k2(3);
    g(1, 0) = k2(1);
    g(1, 1) = k2(4);
    const auto a = cohomology_dims(c);
    const auto b = cohomology_dims(gauge(c, g));
    EXPECT_EQ(a.dims, b.dims);

    Connection one = Connection::trivial(TowerField::standard(1), 2);
    one.a[0](0, 0) = -Series::variable(1, 1, -2);
    SeriesMatrix h = identity_matrix(2, 1);
    h(0, 1) = Series::variable(1, 1);
    EXPECT_EQ(cohomology_dims(one).dims, cohomology_dims(gauge(one, h)).dims);
}

TEST(Cohomology, DualityOfDimensions)
{
    std::vector<Connection> regular{rank1_1(Series::zero(1)), rank1_1(Rational(1, 2) * Series::variable(1, 1, -1)),
                                    rank1_1(Rational(2) * Series::variable(1, 1, -1))};
    for (const auto &c : regular) {
        EXPECT_EQ(cohomology_dims(c).dims[0], cohomology_dims(dual(c)).dims[1]);
    }
    for (int m = 1; m <= 3; ++m) {
        const Connection c = rank1_1(Rational(-m) * Series::variable(1, 1, -m - 1));
        EXPECT_EQ(cohomology_dims(dual(c)).dims[1], cohomology_dims(c).dims[0] + irregularity(c));
    }
}
