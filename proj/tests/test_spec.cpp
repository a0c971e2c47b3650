#include <gtest/gtest.h>

#include <drep/spec.hpp>

using namespace drep;

namespace
{

const char *const kRank1 = R"([field]
n = 1

[connection]
rank = 1
A1 = [["1/t1"]]

[task]
command = epsilon
)";

SyntaxError syntax_error_of(const std::string &text)
{
    try {
        parse_spec(text);
    } catch (const SyntaxError &e) {
        return e;
    }
    ADD_FAILURE() << "no syntax error";
    return SyntaxError("none", 0, 0);
}

} // namespace

TEST(Expression, PrecedenceAndAssociativity)
{
    const TowerField f = TowerField::standard(1);
    const Series t = Series::variable(1, 1);
    EXPECT_EQ(evaluate(parse_expression("1 - 2 - 3"), f), Series::constant(1, Rational(-4)));
    EXPECT_EQ(evaluate(parse_expression("12/2/3"), f), Series::constant(1, Rational(2)));
    EXPECT_EQ(evaluate(parse_expression("-t1^2"), f), -(t * t));
    EXPECT_EQ(evaluate(parse_expression("2*t1^(-2) + 1/2"), f),
              Rational(2) * Series::variable(1, 1, -2) + Series::constant(1, Rational(1, 2)));
    EXPECT_EQ(evaluate(parse_expression("t1^-1"), f), Series::variable(1, 1, -1));
}

TEST(Expression, DivisionByNonMonomialIsASeries)
{
    const Series s = evaluate(parse_expression("1/(1 - t1)"), TowerField::standard(1));
    EXPECT_FALSE(s.exact());
    EXPECT_EQ(s.coefficient(5).scalar(), 1);
    EXPECT_THROW(evaluate(parse_expression("1/(t1 - t1)"), TowerField::standard(1)), ZeroDivision);
}

TEST(Expression, PrintingRoundTrips)
{
    for (const char *src : {"1 - (2 - 3)", "(1 + t1)*t2", "-(t1^2)^3", "t1/(t2*3)", "-t1^(-2)", "2*-t1", "(-t1)^2",
                            "1/2 + 3/4*t1"}) {
        const Expr e = parse_expression(src);
        EXPECT_EQ(parse_expression(to_string(e)), e) << src << " -> " << to_string(e);
    }
}

TEST(Expression, SyntaxErrorPositions)
{
    try {
        parse_expression("1/(");
        FAIL();
    } catch (const SyntaxError &e) {
        EXPECT_EQ(e.column(), 3);
    }
    try {
        parse_expression("1 + * 2");
        FAIL();
    } catch (const SyntaxError &e) {
        EXPECT_EQ(e.column(), 5);
    }
    EXPECT_THROW(parse_expression(""), SyntaxError);
    EXPECT_THROW(parse_expression("t1^x"), SyntaxError);
    EXPECT_THROW(evaluate(parse_expression("s"), TowerField::standard(1)), SyntaxError);
}

TEST(SpecFile, RankOneExample)
{
    const SpecFile s = parse_spec(kRank1);
    EXPECT_EQ(s.field.level, 1);
    EXPECT_EQ(s.rank, 1);
    EXPECT_EQ(s.task.command, "epsilon");
    const Connection c = to_connection(s);
    EXPECT_EQ(c.a[0](0, 0), Series::variable(1, 1, -1));
    EXPECT_EQ(to_forms(s).nu.size(), 1u);
}

TEST(SpecFile, ErrorPositionInsideAMatrix)
{
    std::string text = kRank1;
    text.replace(text.find("1/t1"), 4, "1/(");
    const SyntaxError e = syntax_error_of(text);
    // Line 6 is `A1 = [["1/("]]`; the open parenthesis is column 11.
    EXPECT_EQ(e.line(), 6);
    EXPECT_EQ(e.column(), 11);
}

TEST(SpecFile, DimensionAndKeyErrors)
{
    std::string two = kRank1;
    two.replace(two.find("rank = 1"), 8, "rank = 2");
    EXPECT_THROW(parse_spec(two), DimensionMismatch);

    std::string bad_key = kRank1;
    bad_key.replace(bad_key.find("command"), 7, "comand");
    EXPECT_THROW(parse_spec(bad_key), UnknownKey);

    std::string bad_section = kRank1;
    bad_section.replace(bad_section.find("[task]"), 6, "[tasks]");
    EXPECT_THROW(parse_spec(bad_section), UnknownKey);

    std::string no_eq = kRank1;
    no_eq.replace(no_eq.find("rank = 1"), 8, "rank 1");
    const SyntaxError e = syntax_error_of(no_eq);
    EXPECT_EQ(e.line(), 5);
    EXPECT_EQ(e.column(), 1);

    std::string forms = kRank1;
    forms += "\n[forms]\nnu1 = [\"1\", \"0\"]\n";
    EXPECT_THROW(parse_spec(forms), DimensionMismatch);
}

TEST(SpecFile, MultiLineMatricesAndRoundTrip)
{
    const std::string text = R"spec(# exterior product of two exponentials
[field]
n = 2
variables = x, y
precision = 16

[connection]
rank = 2
A1 = [["-x^(-2)", "0"],
      ["0", "1/(2*x)"]]
A2 = [["0", "0"], ["0", "-y^-2"]]

[forms]
nu1 = ["1/x", "0"]
nu2 = ["0", "1"]

[task]
command = verify
sigma = 1
cover = 3
det = false
)spec";
    const SpecFile s = parse_spec(text);
    EXPECT_EQ(s.field.names, (std::vector<std::string>{"x", "y"}));
    EXPECT_EQ(s.precision, 16);
    EXPECT_EQ(s.task.cover, 3);
    const SpecFile again = parse_spec(to_string(s));
    EXPECT_EQ(again, s);
    EXPECT_EQ(to_string(again), to_string(s));
    const Connection c = to_connection(s);
    EXPECT_EQ(c.a[0](1, 1), Rational(1, 2) * Series::variable(2, 1, -1));
    EXPECT_NO_THROW(to_forms(s).validate());
}

TEST(SpecFile, TrailingCommentsOutsideQuotes)
{
    const SpecFile s = parse_spec("[field]   # the field\nn = 1 # one variable\n[connection]\nrank = 1\n"
                                  "A1 = [[\"1/t1\"]] # log pole\n[task]\ncommand = cohomology\n");
    EXPECT_EQ(s.task.command, "cohomology");
    EXPECT_EQ(to_connection(s).a[0](0, 0), Series::variable(1, 1, -1));
    // '#' inside a quoted expression is not a comment.
    EXPECT_THROW(parse_spec("[field]\nn = 1\n[connection]\nrank = 1\nA1 = [[\"1 # 2\"]]\n[task]\ncommand = epsilon\n"),
                 SyntaxError);
}
