#include <random>

#include <gtest/gtest.h>

#include <drep/epsilon.hpp>

#include "support/random_series.hpp"

using namespace drep;

namespace
{

Series t(int p = 1)
{
    return Series::variable(1, 1, p);
}

Connection rank1(const Series &a)
{
    Connection c = Connection::trivial(TowerField::standard(1), 1);
    c.a[0](0, 0) = a;
    return c;
}

FormTuple nu1(const Series &f)
{
    OneForm w;
    w.components = {f};
    return FormTuple{{w}};
}

FormTuple dt()
{
    return nu1(Series::one(1));
}

Series v2(int i, int p = 1)
{
    return Series::variable(2, i, p);
}

Connection rank1_2(const Series &a1, const Series &a2)
{
    Connection c = Connection::trivial(TowerField::standard(2), 1);
    c.a[0](0, 0) = a1;
    c.a[1](0, 0) = a2;
    return c;
}

} // namespace

TEST(Epsilon, DegreeExamples)
{
    EXPECT_EQ(epsilon_degree(rank1(Series::zero(1)), dt()).line.degree, 0);
    EXPECT_EQ(epsilon_degree(rank1(-t(-2)), dt()).line.degree, -1);
    EXPECT_EQ(epsilon_degree(rank1(Rational(1, 3) * t(-1)), nu1(t(-1))).line.degree, 0);
    EXPECT_EQ(epsilon_degree(rank1(Rational(-3) * t(-4)), dt()).line.degree, -3);
}

TEST(Epsilon, DegreeDoesNotDependOnTheFormScale)
{
    const Connection c = rank1(-t(-3) + Rational(1, 2) * t(-1));
    const int d = epsilon_degree(c, dt()).line.degree;
    EXPECT_EQ(epsilon_degree(c, nu1(t(-1))).line.degree, d);
    EXPECT_EQ(epsilon_degree(c, nu1(Series::constant(1, Rational(5)) * t(2))).line.degree, d);
}

TEST(Epsilon, TwoVariablesIsMultiplicativeOnProducts)
{
    const FormTuple std2 = FormTuple::standard(2);
    EXPECT_EQ(epsilon_degree(Connection::trivial(TowerField::standard(2), 1), std2).line.degree, 0);
    EXPECT_EQ(epsilon_degree(rank1_2(-v2(1, -2), -v2(2, -2)), std2).line.degree, 1);
    EXPECT_EQ(epsilon_degree(rank1_2(Series::zero(2), -v2(2, -2)), std2).line.degree, 0);
    EXPECT_EQ(epsilon_degree(rank1_2(Rational(-2) * v2(1, -3), -v2(2, -2)), std2).line.degree, 2);
    OneForm a;
    a.components = {v2(1, -1), Series::zero(2)};
    EXPECT_THROW(epsilon_degree(Connection::trivial(TowerField::standard(2), 1),
                                FormTuple{{a, OneForm{{v2(2), Series::one(2)}}}}),
                 error);
}

TEST(Epsilon, AdditivityAndExtensions)
{
    const Connection x = rank1(-t(-2));
    const Connection y = rank1(Rational(1, 2) * t(-1));
    const Connection z = rank1(Rational(-2) * t(-3));
    const int dx = epsilon_degree(x, dt()).line.degree;
    const int dy = epsilon_degree(y, dt()).line.degree;
    const int dz = epsilon_degree(z, dt()).line.degree;
    EXPECT_EQ(epsilon_degree(direct_sum(x, y), dt()).line.degree, dx + dy);
    EXPECT_EQ(epsilon_degree(direct_sum(x, z), dt()).line.degree, dx + dz);
    const Connection ext = extension(x, z, {SeriesMatrix(1, 1, t(-1))});
    EXPECT_EQ(epsilon_degree(ext, dt()).line.degree, dx + dz);
}

TEST(Epsilon, GaugeInvariance)
{
    const Connection c = direct_sum(rank1(-t(-2)), rank1(Rational(2) * t(-1)));
    const int d = epsilon_degree(c, dt()).line.degree;
    std::mt19937 rng(17);
    std::uniform_int_distribution<int> small(-3, 3);
    for (int trial = 0; trial < 5; ++trial) {
        SeriesMatrix g = identity_matrix(2, 1);
        g(0, 1) = Series::constant(1, Rational(small(rng))) * t(trial % 3);
        EXPECT_EQ(epsilon_degree(gauge(c, g), dt()).line.degree, d);
    }
}

TEST(EpsilonDet, Examples)
{
    const Connection d = rank1(Series::zero(1));
    const auto same = epsilon_det_rel(d, d, dt());
    EXPECT_EQ(same.status, DetStatus::stabilized);
    EXPECT_EQ(same.ratio, 1);

    const Rational alpha(1, 2);
    const auto rel = epsilon_det_rel(rank1(alpha * t(-1)), d, nu1(t(-1)));
    EXPECT_EQ(rel.status, DetStatus::non_stabilizing);
    ASSERT_FALSE(rel.trace.empty());
    // Window 8: prod_{i=-8}^{7} (i + 1/2) / prod_{i != 0} i.
    Rational num = 1, den = 1;
    for (int i = -8; i < 8; ++i) {
        num *= Rational(i) + alpha;
        if (i != 0) {
            den *= i;
        }
    }
    EXPECT_EQ(rel.trace.front().first, 8);
    EXPECT_EQ(rel.trace.front().second, num / den);

    const auto scaled = epsilon_det_rel(d, d, nu1(Series::constant(1, Rational(3))));
    EXPECT_EQ(scaled.ratio, 1);
    EXPECT_EQ(scaled.status, DetStatus::stabilized);

    EXPECT_THROW(epsilon_det_rel(rank1(-t(-2)), d, dt()), DegreeMismatch);
}

TEST(Induction, Examples)
{
    for (int e : {1, 2, 3}) {
        const auto triv = verify_induction(rank1(Series::zero(1)), {e}, dt());
        EXPECT_TRUE(triv.ok);
        EXPECT_EQ(triv.upstairs, 0);
        const auto irr = verify_induction(rank1(-t(-2)), {e}, dt());
        EXPECT_TRUE(irr.ok) << e << ": " << irr.upstairs << " vs " << irr.downstairs;
        EXPECT_EQ(irr.upstairs, -1);
        const auto reg = verify_induction(rank1(Rational(1, 3) * t(-1)), {e}, dt());
        EXPECT_TRUE(reg.ok);
    }
}

TEST(Duality, SigmaIsPlusOne)
{
    const Connection irr = rank1(-t(-2));
    EXPECT_TRUE(verify_duality(rank1(Series::zero(1)), dt(), 1).ok);
    EXPECT_TRUE(verify_duality(rank1(Series::zero(1)), dt(), -1).ok);
    const auto r = verify_duality(irr, dt(), 1);
    EXPECT_TRUE(r.ok);
    EXPECT_EQ(r.dual_side, -1);
    EXPECT_FALSE(verify_duality(irr, dt(), -1).ok);
    EXPECT_TRUE(verify_duality(direct_sum(irr, rank1(Series::zero(1))), dt(), 1).ok);
}

TEST(Duality, ResidueAdjunction)
{
    std::mt19937 rng(21);
    const Connection c = direct_sum(rank1(-t(-2)), rank1(Rational(1, 2) * t(-1)));
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<Series> s, u;
        for (int i = 0; i < 2; ++i) {
            s.push_back(test_support::random_series(rng, 1, -3, 3, 3));
            u.push_back(test_support::random_series(rng, 1, -3, 3, 3));
        }
        EXPECT_EQ(residue_adjunction_defect(c, s, u, 1), 0);
    }
    // Without the dual connection the identity fails in general.
    const std::vector<Series> s{Series::one(1)}, u{Series::one(1)};
    const Connection single = rank1(t(-1));
    EXPECT_EQ(residue(pairing(single.covariant(1)(s), u) + pairing(s, single.covariant(1)(u))), 2);
}
