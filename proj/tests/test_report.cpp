#include <gtest/gtest.h>

#include <drep/report.hpp>

using namespace drep;

namespace
{

std::string field_of(const Report &r, const std::string &key)
{
    for (const auto &[k, v] : r.fields) {
        if (k == key) {
            return v;
        }
    }
    return "<missing>";
}

SpecFile rank_one(const std::string &a, const std::string &command)
{
    return parse_spec("[field]\nn = 1\n[connection]\nrank = 1\nA1 = [[\"" + a + "\"]]\n[task]\ncommand = " + command
                      + "\n");
}

} // namespace

TEST(Report, CommandExamples)
{
    EXPECT_EQ(field_of(run(rank_one("0", "epsilon")), "degree"), "0");
    EXPECT_EQ(field_of(run(rank_one("-t1^(-2)", "irregularity")), "irregularity"), "1");
    EXPECT_EQ(field_of(run(rank_one("1/t1", "cohomology")), "h0"), "1");
    const Report v = run(rank_one("-t1^(-2)", "verify"));
    EXPECT_EQ(field_of(v, "result"), "pass");
    EXPECT_EQ(v.exit_code, 0);
}

TEST(Report, RenderingIsDeterministic)
{
    const SpecFile s = rank_one("-3*t1^(-4)", "epsilon");
    RunOptions o;
    o.max_window = 24;
    const std::string a = render(run(s, o), ReportFormat::kv);
    const std::string b = render(run(s, o), ReportFormat::kv);
    EXPECT_EQ(a, b);
    EXPECT_NE(a.find("max_window = 24\n"), std::string::npos);
    const std::string j = render(run(s, o), ReportFormat::json_like);
    EXPECT_EQ(j.front(), '{');
    EXPECT_NE(j.find("\"degree\": \"-3\""), std::string::npos);
}

TEST(Report, ExitCodes)
{
    EXPECT_EQ(exit_code_for(Unstabilized("x")), 2);
    EXPECT_EQ(exit_code_for(NotClosed("x")), 3);
    RunOptions tiny;
    tiny.max_window = 8;
    EXPECT_THROW(run(rank_one("0", "epsilon"), tiny), Unstabilized);
    RunOptions bad;
    bad.max_window = 4;
    EXPECT_THROW(run(rank_one("0", "epsilon"), bad), DimensionMismatch);
}
