// Command-line driver for the verification campaigns.
//
// Exit codes: 0 every check passed, 1 a check failed, 2 usage or configuration error.

#include "ballkernel/acceptance.hpp"
#include "ballkernel/cli/config.hpp"
#include "ballkernel/cli/report.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <iostream>
#include <map>
#include <string>
#include <vector>

namespace
{

constexpr int kExitPass  = 0;
constexpr int kExitFail  = 1;
constexpr int kExitUsage = 2;

// Value-taking flags, spelled as their configuration keys.
const std::vector< std::pair< std::string, std::string > > kValueFlags = {
    {"dim", "dimension: 1, 2 or 3"},
    {"t", "time or comma-separated times"},
    {"x", "point(s) on the first axis, comma-separated"},
    {"r", "radius or comma-separated radii"},
    {"theta", "angle of the second starting point (coupling-verify)"},
    {"theta-count", "points on the circle profile grid"},
    {"mc-angles", "Monte Carlo angles, a divisor of theta-count (circle-extremum)"},
    {"dt", "time step"},
    {"seed", "64-bit seed of the random streams"},
    {"paths", "paths per estimate or per campaign"},
    {"epsilon", "target ball radius"},
    {"budget", "path-step budget before paths are scaled down"},
    {"out", "output directory"},
};

struct Flags
{
    std::map< std::string, std::string > values;
    std::string                          config;
    bool                                 mc = false;
};

void print_check(const ballkernel::CheckRecord& c)
{
    std::printf("[%s] %s: %s %s %s\n", c.pass ? "PASS" : "FAIL", c.name.c_str(), ballkernel::num_short(c.measured).c_str(),
                c.relation.c_str(), ballkernel::num_short(c.threshold).c_str());
}

void print_criterion(const ballkernel::CriterionOutcome& o)
{
    std::printf("criterion %d %s: %s (%.1f s of %.0f s) %s\n", o.id, o.title.c_str(), o.pass ? "PASS" : "FAIL", o.seconds,
                o.limit_seconds, o.detail.c_str());
    std::fflush(stdout);
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Verification campaigns for reflecting Brownian motion in the unit ball"};
    app.require_subcommand(1, 1);

    const std::vector< std::pair< std::string, std::string > > commands = {
        {"diagonal-scan", "p(t, x, x) along a radius: strictly increasing"},
        {"circle-extremum", "p(t, x + r e^{i theta}, x) over theta: maximal at theta = 0"},
        {"coupling-verify", "pathwise checks of the mirror coupling in 2-D or 3-D"},
        {"oned-verify", "midpoint identity of the interval coupling"},
        {"hotspots", "second Neumann eigenfunction of the disk"},
        {"all", "acceptance suite (criteria 1 to 8)"},
    };
    std::map< std::string, Flags > flags;
    for (const auto& [name, help] : commands)
    {
        CLI::App* sub = app.add_subcommand(name, help);
        Flags&    f   = flags[name];
        for (const auto& [key, desc] : kValueFlags)
            sub->add_option("--" + key, f.values[key], desc);
        sub->add_option("--config", f.config, "key = value file; flags given on the command line win");
        sub->add_flag("--mc,!--no-mc", f.mc, "add or skip Monte Carlo estimates");
    }

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e)
    {
        const int code = app.exit(e);
        return code == 0 ? kExitPass : kExitUsage;
    }

    CLI::App*                  sub = app.get_subcommands().front();
    ballkernel::CampaignConfig cfg;
    cfg.command = sub->get_name();
    const Flags& f = flags[cfg.command];
    try
    {
        if (sub->get_option("--config")->count() > 0)
            ballkernel::cli::apply_config_file(cfg, f.config);
        for (const auto& [key, desc] : kValueFlags)
            if (sub->get_option("--" + key)->count() > 0)
                ballkernel::cli::apply_setting(cfg, key, f.values.at(key));
        if (sub->get_option("--mc")->count() > 0)
            cfg.mc = f.mc;
        cfg = ballkernel::resolve_config(cfg);
    }
    catch (const std::exception& e)
    {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    }

    ballkernel::CampaignResult res;
    try
    {
        res = ballkernel::run_campaign(cfg, print_criterion);
    }
    catch (const ballkernel::UsageError& e)
    {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    }
    catch (const std::invalid_argument& e)
    {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    }
    catch (const std::exception& e)
    {
        std::fprintf(stderr, "error while running %s: %s\n", cfg.command.c_str(), e.what());
        return kExitFail;
    }

    try
    {
        ballkernel::cli::write_outputs(res, res.config.out);
    }
    catch (const std::exception& e)
    {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    }

    for (const auto& c : res.checks)
        print_check(c);
    for (const auto& [k, v] : res.notes)
        std::printf("note %s: %s\n", k.c_str(), v.c_str());
    std::printf("%s: %s (%zu checks, %.1f s), report in %s\n", res.command.c_str(), res.pass() ? "PASS" : "FAIL",
                res.checks.size(), res.seconds, res.config.out.c_str());
    return res.pass() ? kExitPass : kExitFail;
}
