#include "ballkernel/acceptance.hpp"
#include "ballkernel/campaigns.hpp"
#include "ballkernel/cli/config.hpp"
#include "ballkernel/cli/report.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <numbers>
#include <random>
#include <string>

using namespace ballkernel;

namespace
{

CampaignConfig command(const std::string& name)
{
    CampaignConfig c;
    c.command = name;
    return c;
}

const CheckRecord* find_check(const CampaignResult& res, const std::string& prefix)
{
    for (const auto& c : res.checks)
        if (c.name.rfind(prefix, 0) == 0)
            return &c;
    return nullptr;
}

const std::string* find_note(const CampaignResult& res, const std::string& key)
{
    for (const auto& [k, v] : res.notes)
        if (k == key)
            return &v;
    return nullptr;
}

std::string failed_names(const CampaignResult& res)
{
    std::string out;
    for (const auto& c : res.checks)
        if (!c.pass)
            out += c.name + " (" + num17(c.measured) + " " + c.relation + " " + num17(c.threshold) + "); ";
    return out;
}

} // namespace

TEST(ResolveConfig, FillsCommandDefaults)
{
    const auto scan = resolve_config(command("diagonal-scan"));
    EXPECT_EQ(scan.t, (std::vector< double >{0.05, 0.2, 1.}));
    EXPECT_EQ(scan.x.size(), 11u);
    EXPECT_EQ(scan.x.front(), 0.);
    EXPECT_EQ(scan.paths, 200000u);

    auto one = command("diagonal-scan");
    one.dim  = 1;
    EXPECT_EQ(resolve_config(one).x.front(), 0.1);

    const auto oned = resolve_config(command("oned-verify"));
    EXPECT_EQ(oned.dim, 1);
    EXPECT_EQ(oned.r, (std::vector< double >{0.25}));
    EXPECT_EQ(oned.paths, 1000u);

    const auto coupling = resolve_config(command("coupling-verify"));
    EXPECT_EQ(coupling.t, (std::vector< double >{1.}));
    EXPECT_EQ(coupling.x, (std::vector< double >{0.5}));
    EXPECT_EQ(coupling.r, (std::vector< double >{0.2}));

    auto explicit_t = command("circle-extremum");
    explicit_t.t    = {0.7};
    EXPECT_EQ(resolve_config(explicit_t).t, (std::vector< double >{0.7}));
}

TEST(ResolveConfig, RejectsInvalidParameters)
{
    EXPECT_THROW(resolve_config(command("nonsense")), UsageError);
    const auto bad = [](auto mutate) {
        auto c = command("hotspots");
        mutate(c);
        return c;
    };
    EXPECT_THROW(resolve_config(bad([](auto& c) { c.command = "all"; c.dim = 4; })), UsageError);
    EXPECT_THROW(resolve_config(bad([](auto& c) { c.dt = 0.; })), UsageError);
    EXPECT_THROW(resolve_config(bad([](auto& c) { c.dt = 0.02; })), UsageError);
    EXPECT_THROW(resolve_config(bad([](auto& c) { c.epsilon = 1.; })), UsageError);
    EXPECT_THROW(resolve_config(bad([](auto& c) { c.theta_count = 0; })), UsageError);
    EXPECT_THROW(resolve_config(bad([](auto& c) { c.t = {0.5, -1.}; })), UsageError);
    EXPECT_THROW(resolve_config(bad([](auto& c) { c.x = {NAN}; })), UsageError);
    EXPECT_THROW(resolve_config(bad([](auto& c) { c.budget = 0.; })), UsageError);
    EXPECT_NO_THROW(resolve_config(bad([](auto&) {})));
}

TEST(ConfigText, ParsesKeyValueLinesWithComments)
{
    const auto kv = cli::parse_config_text("# header\n\ndim = 1\n  t = 0.2, 0.5   # two times\nno_mc_here=\r\n");
    ASSERT_EQ(kv.size(), 3u);
    EXPECT_EQ(kv[0], (std::pair< std::string, std::string >{"dim", "1"}));
    EXPECT_EQ(kv[1], (std::pair< std::string, std::string >{"t", "0.2, 0.5"}));
    EXPECT_EQ(kv[2].first, "no_mc_here");
    EXPECT_EQ(kv[2].second, "");
    EXPECT_THROW(cli::parse_config_text("dim 2\n"), UsageError);
    EXPECT_THROW(cli::parse_config_text(" = 2\n"), UsageError);
    EXPECT_TRUE(cli::parse_config_text("").empty());
}

TEST(ConfigText, AppliesSettings)
{
    CampaignConfig c = command("circle-extremum");
    cli::apply_setting(c, "dim", "1");
    cli::apply_setting(c, "t", "0.2,0.5");
    cli::apply_setting(c, "theta_count", "64");
    cli::apply_setting(c, "paths", "2e5");
    cli::apply_setting(c, "seed", "18446744073709551615");
    cli::apply_setting(c, "mc", "yes");
    cli::apply_setting(c, "out", "  results ");
    EXPECT_EQ(c.dim, 1);
    EXPECT_EQ(c.t, (std::vector< double >{0.2, 0.5}));
    EXPECT_EQ(c.theta_count, 64);
    EXPECT_EQ(c.paths, 200000u);
    EXPECT_EQ(c.seed, 18446744073709551615u);
    EXPECT_TRUE(c.mc);
    EXPECT_EQ(c.out, "results");

    EXPECT_THROW(cli::apply_setting(c, "colour", "red"), UsageError);
    EXPECT_THROW(cli::apply_setting(c, "dt", "fast"), UsageError);
    EXPECT_THROW(cli::apply_setting(c, "dt", "inf"), UsageError);
    EXPECT_THROW(cli::apply_setting(c, "paths", "-3"), UsageError);
    EXPECT_THROW(cli::apply_setting(c, "paths", "2.5"), UsageError);
    EXPECT_THROW(cli::apply_setting(c, "x", "0.1,,0.2"), UsageError);
    EXPECT_THROW(cli::apply_setting(c, "mc", "maybe"), UsageError);
}

TEST(Formatting, Num17RoundTrips)
{
    std::mt19937_64 gen{7};
    std::uniform_real_distribution< double > u{-1e3, 1e3};
    for (int i = 0; i < 10000; ++i)
    {
        const double v = u(gen) * std::pow(10., static_cast< int >(gen() % 40) - 20);
        EXPECT_EQ(std::strtod(num17(v).c_str(), nullptr), v);
    }
    EXPECT_EQ(num17(0.1), "0.10000000000000001");
    EXPECT_EQ(num17(NAN), "nan");
}

TEST(Checks, RelationsAreEvaluatedLiterally)
{
    EXPECT_TRUE(make_check("a", 1., "<=", 1.).pass);
    EXPECT_FALSE(make_check("a", 1., "<", 1.).pass);
    EXPECT_TRUE(make_check("a", 1., ">=", 1.).pass);
    EXPECT_FALSE(make_check("a", 1., ">", 1.).pass);
    EXPECT_TRUE(make_check("a", 0., "==", 0.).pass);
    EXPECT_FALSE(make_check("a", NAN, "<=", 1.).pass);
    EXPECT_FALSE(make_check("a", NAN, ">=", 1.).pass);
    EXPECT_THROW(make_check("a", 0., "~", 0.), std::logic_error);
}

TEST(DiagonalScan, DefaultGridIsMonotoneWithinTheFloor)
{
    const auto res = diagonal_scan(command("diagonal-scan"));
    EXPECT_TRUE(res.pass()) << failed_names(res);
    ASSERT_EQ(res.tables.size(), 1u);
    EXPECT_EQ(res.tables[0].rows.size(), 33u);
    // At t = 0.05 the first difference sits below 1e-12 and is counted as flat.
    ASSERT_NE(find_note(res, "flat_differences t=0.05"), nullptr);
    EXPECT_EQ(*find_note(res, "flat_differences t=0.05"), "1 of 10");
    EXPECT_EQ(*find_note(res, "flat_differences t=0.2"), "0 of 10");
    EXPECT_EQ(find_note(res, "long_time_flat t=0.2"), nullptr);
}

TEST(DiagonalScan, LongTimesAreFlat)
{
    auto c = command("diagonal-scan");
    c.t    = {50.};
    const auto res = diagonal_scan(c);
    EXPECT_TRUE(res.pass()) << failed_names(res);
    ASSERT_NE(find_note(res, "long_time_flat t=50"), nullptr);
    const auto* spread = find_check(res, "diagonal spread t=50");
    ASSERT_NE(spread, nullptr);
    EXPECT_LE(spread->measured, 1e-8);
}

TEST(DiagonalScan, IntervalAndRejections)
{
    auto one = command("diagonal-scan");
    one.dim  = 1;
    EXPECT_TRUE(diagonal_scan(one).pass());

    auto three = command("diagonal-scan");
    three.dim  = 3;
    EXPECT_THROW(diagonal_scan(three), UsageError);
    auto early = command("diagonal-scan");
    early.t    = {0.01};
    EXPECT_THROW(diagonal_scan(early), UsageError);
    auto unsorted = command("diagonal-scan");
    unsorted.x    = {0.5, 0.4};
    EXPECT_THROW(diagonal_scan(unsorted), UsageError);
    auto outside = command("diagonal-scan");
    outside.x    = {0.5, 1.2};
    EXPECT_THROW(diagonal_scan(outside), UsageError);
}

TEST(DiagonalScan, MonteCarloColumnsAreFilled)
{
    auto c    = command("diagonal-scan");
    c.dim     = 1;
    c.t       = {0.3};
    c.x       = {0.2, 0.6};
    c.mc      = true;
    c.paths   = 4000;
    c.dt      = 1e-3;
    const auto res = diagonal_scan(c);
    EXPECT_TRUE(res.pass()) << failed_names(res);
    ASSERT_EQ(res.tables[0].rows.size(), 2u);
    for (const auto& row : res.tables[0].rows)
    {
        EXPECT_FALSE(row[3].empty());
        EXPECT_FALSE(row[4].empty());
    }
    EXPECT_NE(find_check(res, "mc |z| t=0.3 x=0.2"), nullptr);
}

TEST(DiagonalScan, BudgetScalesPathsDown)
{
    auto c   = command("diagonal-scan");
    c.dim    = 1;
    c.t      = {0.1};
    c.x      = {0.2, 0.6};
    c.mc     = true;
    c.paths  = 100000;
    c.dt     = 1e-3;
    c.budget = 1e5; // 500 paths of 200 steps, raised to the floor of 1000
    const auto res = diagonal_scan(c);
    ASSERT_NE(find_note(res, "paths_used"), nullptr);
    EXPECT_EQ(*find_note(res, "paths_used"), "1000");
}

TEST(CircleExtremum, DefaultProfilePeaksAtThetaZero)
{
    const auto res = circle_extremum(command("circle-extremum"));
    EXPECT_TRUE(res.pass()) << failed_names(res);
    EXPECT_EQ(*find_note(res, "argmax theta index t=0.5 x=0.5 r=0.2"), "0");
    ASSERT_EQ(res.tables.size(), 1u);
    EXPECT_EQ(res.tables[0].rows.size(), 256u);
}

TEST(CircleExtremum, SeveralCirclesAndTheInterval)
{
    auto c = command("circle-extremum");
    c.t    = {0.1, 1.};
    c.x    = {0.3, 0.5, 0.7};
    c.r    = {0.1, 0.4, 0.25};
    c.theta_count = 64;
    const auto res = circle_extremum(c);
    EXPECT_TRUE(res.pass()) << failed_names(res);
    EXPECT_EQ(res.tables.size(), 6u);

    c.dim = 1;
    EXPECT_TRUE(circle_extremum(c).pass());
}

TEST(CircleExtremum, RejectsBadCircles)
{
    auto c = command("circle-extremum");
    c.r    = {0.6};
    EXPECT_THROW(circle_extremum(c), UsageError);
    c.r = {0.2};
    c.x = {1.};
    EXPECT_THROW(circle_extremum(c), UsageError);
    c.x   = {0.5, 0.4};
    c.r   = {0.1, 0.1, 0.1};
    EXPECT_THROW(circle_extremum(c), UsageError);
    c     = command("circle-extremum");
    c.dim = 3;
    EXPECT_THROW(circle_extremum(c), UsageError);
    c           = command("circle-extremum");
    c.mc        = true;
    c.mc_angles = 7;
    EXPECT_THROW(circle_extremum(c), UsageError);
}

TEST(Hotspots, FindsTheFirstNeumannRoot)
{
    const auto res = hotspots(command("hotspots"));
    EXPECT_TRUE(res.pass()) << failed_names(res);
    EXPECT_EQ(*find_note(res, "order"), "1");
    EXPECT_EQ(std::strtod(find_note(res, "root")->c_str(), nullptr), 1.8411837813406593);
    EXPECT_EQ(res.tables[0].rows.size(), 101u);
}

TEST(CouplingVerify, SmallRunPassesTheExactChecks)
{
    auto c  = command("coupling-verify");
    c.t     = {0.3};
    c.paths = 30;
    c.dt    = 1e-4;
    const auto res = coupling_verify(c);
    for (const char* exact : {"2d probe points", "2d domination", "2d max |du|", "2d max inner", "2d max pre-boundary",
                              "2d max post-tau1", "2d steps with a1", "2d max single-step"})
    {
        const auto* chk = find_check(res, exact);
        ASSERT_NE(chk, nullptr) << exact;
        EXPECT_TRUE(chk->pass) << exact << " measured " << chk->measured;
    }
    ASSERT_EQ(res.tables.size(), 1u);
    EXPECT_EQ(res.tables[0].rows.size(), 30u);
    EXPECT_EQ(res.tables[0].columns.size(), 17u);
}

TEST(CouplingVerify, ThetaPiChecksTheStartingMirror)
{
    auto c  = command("coupling-verify");
    c.dim   = 3;
    c.t     = {0.1};
    c.paths = 5;
    c.theta = std::numbers::pi;
    const auto res = coupling_verify(c);
    const auto* u0 = find_check(res, "3d |u0 - (1/x, 0)|");
    ASSERT_NE(u0, nullptr);
    EXPECT_TRUE(u0->pass);
}

TEST(CouplingVerify, Rejections)
{
    auto c  = command("coupling-verify");
    c.theta = 0.;
    EXPECT_THROW(coupling_verify(c), UsageError);
    c.theta = 2. * std::numbers::pi;
    EXPECT_THROW(coupling_verify(c), UsageError);
    c       = command("coupling-verify");
    c.dim   = 1;
    EXPECT_THROW(coupling_verify(c), UsageError);
    c       = command("coupling-verify");
    c.t     = {0.5, 1.};
    EXPECT_THROW(coupling_verify(c), UsageError);
    c         = command("coupling-verify");
    c.x       = {0.9};
    c.r       = {0.05};
    c.epsilon = 0.2;
    EXPECT_THROW(coupling_verify(c), UsageError);
}

TEST(OnedVerify, MidpointIdentityHolds)
{
    auto c  = command("oned-verify");
    c.paths = 200;
    const auto res = oned_verify(c);
    EXPECT_TRUE(res.pass()) << failed_names(res);
    EXPECT_EQ(res.tables[0].rows.size(), 200u);
    EXPECT_NE(find_note(res, "coupled fraction"), nullptr);
    c.r = {0.5};
    EXPECT_THROW(oned_verify(c), UsageError);
}

TEST(Report, JsonCarriesEveryField)
{
    auto res    = hotspots(command("hotspots"));
    res.seconds = 0.25;
    const auto j = cli::report_json(res);
    for (const char* key : {"command", "claim", "config", "checks", "notes", "csv_files", "pass", "duration_seconds"})
        EXPECT_TRUE(j.contains(key)) << key;
    EXPECT_EQ(j["command"], "hotspots");
    EXPECT_EQ(j["pass"], true);
    EXPECT_EQ(j["checks"].size(), res.checks.size());
    EXPECT_EQ(j["csv_files"][0], "hotspots_profile.csv");
    EXPECT_EQ(j["config"]["theta_count"], 256);
    EXPECT_EQ(j["notes"]["order"], "1");

    res.checks.push_back(make_check("forced", 1., "<", 0.));
    EXPECT_EQ(cli::report_json(res)["pass"], false);
}

TEST(Report, CsvUsesLineFeeds)
{
    const Table t{"a.csv", {"x", "y"}, {{"1", "2"}, {"3", ""}}};
    EXPECT_EQ(cli::csv_text(t), "x,y\n1,2\n3,\n");
}

TEST(Dispatch, RunCampaignRoutesAndTimes)
{
    const auto res = run_campaign(command("hotspots"));
    EXPECT_EQ(res.command, "hotspots");
    EXPECT_GE(res.seconds, 0.);
    EXPECT_THROW(run_campaign(command("fly")), UsageError);
}
