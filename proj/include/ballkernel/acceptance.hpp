#ifndef BALLKERNEL_ACCEPTANCE_HPP
#define BALLKERNEL_ACCEPTANCE_HPP

#include "ballkernel/campaigns.hpp"
#include "ballkernel/estimator.hpp"
#include "ballkernel/kernels.hpp"
#include "ballkernel/quadrature.hpp"

#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

// Acceptance suite: eight numbered criteria, each with a runtime limit. Parameters are fixed;
// only the seed is configurable.

namespace ballkernel
{

struct CriterionOutcome
{
    int                        id = 0;
    std::string                title;
    bool                       pass = false;
    std::string                detail;
    double                     seconds       = 0.;
    double                     limit_seconds = 0.;
    std::vector< CheckRecord > checks;
};

struct AcceptanceOptions
{
    std::uint64_t seed = 20240601;
};

/// Integral of p(t, x, .) over the disk with a polar tensor rule.
inline double disk_mass(const KernelSeries& ks, double t, const Vec2& x, const PolarRule& rule)
{
    const auto   fx  = radial_factors(ks, std::min(norm(x), 1.));
    const double thx = std::atan2(x[1], x[0]);
    double       sum = 0.;
    for (std::size_t i = 0; i < rule.radii.size(); ++i)
    {
        const auto fz   = radial_factors(ks, rule.radii[i]);
        double     ring = 0.;
        for (double th : rule.angles)
            ring += disk_kernel_from_factors(ks, t, fx, thx, fz, th);
        sum += rule.radial_weights[i] * rule.angular_weight * ring;
    }
    return sum;
}

namespace detail
{
template < class Fn >
CriterionOutcome timed_criterion(int id, std::string title, double limit, Fn body)
{
    CriterionOutcome out;
    out.id            = id;
    out.title         = std::move(title);
    out.limit_seconds = limit;
    const auto start  = std::chrono::steady_clock::now();
    body(out);
    out.seconds = std::chrono::duration< double >(std::chrono::steady_clock::now() - start).count();
    out.checks.push_back(make_check("runtime seconds", out.seconds, "<", limit));
    out.pass = std::all_of(out.checks.begin(), out.checks.end(), [](const CheckRecord& c) { return c.pass; });
    return out;
}

inline void append_checks(CriterionOutcome& out, const CampaignResult& res, const std::string& must_contain = "")
{
    for (const auto& c : res.checks)
        if (must_contain.empty() || c.name.find(must_contain) != std::string::npos)
            out.checks.push_back(c);
}

inline std::string join_failed(const std::vector< CheckRecord >& checks)
{
    std::string s;
    for (const auto& c : checks)
        if (!c.pass)
            s += (s.empty() ? "" : "; ") + c.name + " = " + num_short(c.measured);
    return s;
}

inline CampaignConfig circle_grid_config()
{
    CampaignConfig c;
    c.command     = "circle-extremum";
    c.dim         = 2;
    c.t           = {0.1, 0.5};
    c.x           = {0.3, 0.5, 0.7};
    c.r           = {0.1, 0.2, 0.1};
    c.theta_count = 256;
    return c;
}
} // namespace detail

/// 1. p(t, x, x) strictly increasing in |x| (differences above 1e-12), disk and interval.
inline CriterionOutcome criterion_diagonal(const AcceptanceOptions&)
{
    return detail::timed_criterion(1, "diagonal monotonicity", 10., [](CriterionOutcome& out) {
        const std::vector< double > ts{0.05, 0.2, 1.};
        const auto                  ks = build_disk_kernel(0.05, detail::kScanSeriesTol);
        std::string                 detail_text;
        for (double t : ts)
        {
            const auto  grid = detail::diagonal_grid_2d();
            double      prev = 0., min_diff = std::numeric_limits< double >::infinity();
            std::size_t below = 0;
            for (std::size_t i = 0; i < grid.size(); ++i)
            {
                const double p = disk_kernel_eval(ks, t, Vec2{grid[i], 0.}, Vec2{grid[i], 0.});
                if (i > 0)
                {
                    min_diff = std::min(min_diff, p - prev);
                    below += p - prev > tol::strictness_floor ? 0u : 1u;
                }
                prev = p;
            }
            out.checks.push_back(make_check("disk min difference t=" + num_short(t), min_diff, ">", tol::strictness_floor));
            detail_text += "disk t=" + num_short(t) + " min diff " + num_short(min_diff) + " (" + std::to_string(below) +
                           " of " + std::to_string(grid.size() - 1) + " at or below 1e-12); ";
        }
        for (double t : ts)
        {
            // Both halves of (-1, 1), each traversed outwards.
            const auto grid     = detail::diagonal_grid_1d();
            double     min_diff = std::numeric_limits< double >::infinity();
            for (double sign : {1., -1.})
                for (std::size_t i = 1; i < grid.size(); ++i)
                    min_diff = std::min(min_diff, interval_kernel_eval(t, sign * grid[i], sign * grid[i]) -
                                                      interval_kernel_eval(t, sign * grid[i - 1], sign * grid[i - 1]));
            out.checks.push_back(
                make_check("interval min difference t=" + num_short(t), min_diff, ">", tol::strictness_floor));
            detail_text += "interval t=" + num_short(t) + " min diff " + num_short(min_diff) + "; ";
        }
        out.detail = detail_text;
    });
}

/// 2. circle average <= p(t, x + r, x) <= p(t, x + r, x + r), slack 1e-9.
inline CriterionOutcome criterion_main_inequality(const AcceptanceOptions&)
{
    return detail::timed_criterion(2, "main inequality", 10., [](CriterionOutcome& out) {
        const auto res = circle_extremum(detail::circle_grid_config());
        detail::append_checks(out, res, "circle mean");
        detail::append_checks(out, res, "p(x+r, x+r)");
        double worst = std::numeric_limits< double >::infinity();
        for (const auto& c : out.checks)
            worst = std::min(worst, c.measured);
        out.detail = "smallest slack " + num_short(worst) + " over 6 (t, x, r) profiles";
    });
}

/// 3. theta = 0 is the argmax of the 256-point spectral circle profile.
inline CriterionOutcome criterion_circle_extremum(const AcceptanceOptions&)
{
    return detail::timed_criterion(3, "circle extremum", 10., [](CriterionOutcome& out) {
        const auto res = circle_extremum(detail::circle_grid_config());
        detail::append_checks(out, res, "grid max");
        std::string idx;
        for (const auto& [k, v] : res.notes)
            if (k.rfind("argmax", 0) == 0)
                idx += (idx.empty() ? "" : ",") + v;
        out.detail = "argmax theta indices {" + idx + "}";
    });
}

struct McConfig
{
    int                   dim = 2;
    double                t   = 0.;
    std::vector< double > x, y;
};

inline std::vector< McConfig > mc_agreement_configs()
{
    return {
        {1, 0.2, {0.3}, {0.5}},
        {1, 0.5, {0.}, {0.5}},
        {1, 1., {0.8}, {-0.6}},
        {1, 0.5, {0.9}, {0.9}},
        {1, 0.2, {-0.5}, {-0.4}},
        {2, 0.2, {0.3, 0.}, {0.5, 0.}},
        {2, 0.5, {0.5, 0.}, {0.5, 0.}},
        {2, 1., {0., 0.}, {0.5, 0.3}},
        {2, 0.5, {0.7, 0.}, {0.2, -0.4}},
        {2, 1., {0.9, 0.}, {-0.5, 0.}},
    };
}

/// 4. Occupation-density estimates agree with the spectral kernels: |z| <= 4 in at least 9 of 10.
inline CriterionOutcome criterion_mc_agreement(const AcceptanceOptions& opt)
{
    return detail::timed_criterion(4, "Monte Carlo vs spectral agreement", 600., [&](CriterionOutcome& out) {
        constexpr std::uint64_t kPaths = 200000;
        const auto              ks     = build_disk_kernel(0.2);
        int                     within = 0;
        std::string             zs;
        const auto              cfgs = mc_agreement_configs();
        for (std::size_t i = 0; i < cfgs.size(); ++i)
        {
            const auto& m = cfgs[i];
            SimConfig   sim;
            sim.dt        = 1e-4;
            sim.seed      = opt.seed;
            sim.n_paths   = kPaths;
            sim.dimension = m.dim;
            const std::uint64_t first = i * kPaths;
            double              ref = 0.;
            EstimatorResult     est;
            if (m.dim == 1)
            {
                ref = interval_kernel_eval(m.t, m.x[0], m.y[0]);
                est = estimate_density_range< 1 >(m.t, Vec1{m.x[0]}, Vec1{m.y[0]}, 0.05, sim, first, kPaths);
            }
            else
            {
                const Vec2 x{m.x[0], m.x[1]}, y{m.y[0], m.y[1]};
                ref = disk_kernel_eval(ks, m.t, x, y);
                est = estimate_density_range< 2 >(m.t, x, y, 0.05, sim, first, kPaths);
            }
            const double z = z_score(est, ref);
            within += std::fabs(z) <= tol::z_max ? 1 : 0;
            zs += (zs.empty() ? "" : ", ") + num_short(z);
        }
        out.checks.push_back(make_check("configurations with |z| <= 4", within, ">=", 9.));
        out.detail = "z = [" + zs + "]";
    });
}

/// 5. Coupling pathwise suite over 1000 paths in 2-D and 3-D.
inline CriterionOutcome criterion_coupling(const AcceptanceOptions& opt)
{
    return detail::timed_criterion(5, "coupling pathwise suite", 300., [&](CriterionOutcome& out) {
        for (int dim : {2, 3})
        {
            CampaignConfig c;
            c.command = "coupling-verify";
            c.dim     = dim;
            c.seed    = opt.seed;
            detail::append_checks(out, coupling_verify(c));
        }
        const std::string failed = detail::join_failed(out.checks);
        out.detail               = failed.empty() ? std::to_string(out.checks.size()) + " pathwise checks hold"
                                                  : "failed: " + failed;
    });
}

/// 6. Interval midpoint identity over 1000 paths.
inline CriterionOutcome criterion_midpoint(const AcceptanceOptions& opt)
{
    return detail::timed_criterion(6, "interval midpoint identity", 60., [&](CriterionOutcome& out) {
        CampaignConfig c;
        c.command      = "oned-verify";
        c.seed         = opt.seed;
        const auto res = oned_verify(c);
        detail::append_checks(out, res, "midpoint - (x");
        out.detail = "max residual " + num_short(out.checks.front().measured);
        for (const auto& ch : res.checks)
            if (ch.name.find("midpoint - (x") == std::string::npos)
                out.detail += "; " + ch.name + " = " + num_short(ch.measured) + (ch.pass ? "" : " (fails)");
    });
}

/// 7. Minimal Neumann eigenpair and the boundary location of its extrema.
inline CriterionOutcome criterion_hotspots(const AcceptanceOptions&)
{
    return detail::timed_criterion(7, "hot spots of the disk", 5., [](CriterionOutcome& out) {
        CampaignConfig c;
        c.command      = "hotspots";
        const auto res = hotspots(c);
        detail::append_checks(out, res, "|root");
        detail::append_checks(out, res, "eigenvalue");
        detail::append_checks(out, res, "radial difference");
        detail::append_checks(out, res, "boundary max");
        std::string root, order;
        for (const auto& [k, v] : res.notes)
        {
            if (k == "root")
                root = v;
            if (k == "order")
                order = v;
        }
        out.detail = "order " + order + ", root " + root;
    });
}

/// 8. Mass, symmetry, long-time limits and the two interval representations.
inline CriterionOutcome criterion_kernel_consistency(const AcceptanceOptions& opt)
{
    return detail::timed_criterion(8, "kernel self-consistency", 30., [&](CriterionOutcome& out) {
        const auto ks   = build_disk_kernel(0.1);
        const auto rule = polar_rule(200, 200);
        double     mass = 0.;
        for (double t : {0.1, 0.5, 2.})
            for (const Vec2& x : {Vec2{0., 0.}, Vec2{0.5, 0.3}, Vec2{0.95, 0.}})
                mass = std::max(mass, std::fabs(disk_mass(ks, t, x, rule) - 1.));
        out.checks.push_back(make_check("max |mass - 1|", mass, "<=", 1e-6));

        std::mt19937_64                          gen{opt.seed};
        std::uniform_real_distribution< double > unit{-1., 1.}, time{0.1, 2.};
        auto                                     point = [&] {
            for (;;)
            {
                const Vec2 p{unit(gen), unit(gen)};
                if (norm(p) < 1.)
                    return p;
            }
        };
        double sym = 0.;
        for (int i = 0; i < 1000; ++i)
        {
            const double t = time(gen);
            const Vec2   x = point(), y = point();
            sym            = std::max(sym, std::fabs(disk_kernel_eval(ks, t, x, y) - disk_kernel_eval(ks, t, y, x)));
        }
        out.checks.push_back(make_check("max |p(x, y) - p(y, x)|", sym, "<=", 1e-12));

        const auto ks_long = build_disk_kernel(50.);
        double     disk_lim = 0., int_lim = 0.;
        for (int i = 0; i < 100; ++i)
        {
            disk_lim = std::max(disk_lim, std::fabs(disk_kernel_eval(ks_long, 50., point(), point()) - 1. / std::numbers::pi));
            int_lim  = std::max(int_lim, std::fabs(interval_kernel_eval(50., unit(gen), unit(gen)) - 0.5));
        }
        out.checks.push_back(make_check("disk max |p(50, x, y) - 1/pi|", disk_lim, "<=", 1e-8));
        out.checks.push_back(make_check("interval max |p(50, x, y) - 1/2|", int_lim, "<=", 1e-8));

        double rep = 0.;
        for (double t : {0.05, 0.1, 0.2, 0.5, 1., 2., 5.})
            for (int i = 0; i <= 16; ++i)
                for (int j = 0; j <= 16; ++j)
                {
                    const double x = -1. + i / 8., y = -1. + j / 8.;
                    rep = std::max(rep, std::fabs(interval_kernel_spectral(t, x, y) - interval_kernel_images(t, x, y)));
                }
        out.checks.push_back(make_check("interval max |spectral - images|", rep, "<=", 1e-10));
        out.detail = "mass " + num_short(mass) + ", symmetry " + num_short(sym) + ", limits " + num_short(disk_lim) +
                     " / " + num_short(int_lim) + ", representations " + num_short(rep);
    });
}

/// Runs criteria 1 to 8 in order; on_done sees each outcome as soon as it is available.
inline std::vector< CriterionOutcome > run_acceptance(const AcceptanceOptions& opt = {},
                                                      const std::function< void(const CriterionOutcome&) >& on_done = {})
{
    using Fn = CriterionOutcome (*)(const AcceptanceOptions&);
    const Fn all[] = {criterion_diagonal,   criterion_main_inequality, criterion_circle_extremum,
                      criterion_mc_agreement, criterion_coupling,        criterion_midpoint,
                      criterion_hotspots,   criterion_kernel_consistency};
    std::vector< CriterionOutcome > out;
    for (Fn f : all)
    {
        out.push_back(f(opt));
        if (on_done)
            on_done(out.back());
    }
    return out;
}

/// The acceptance suite as a campaign: one check per criterion check, prefixed "C<n> ".
inline CampaignResult acceptance_campaign(const CampaignConfig& in,
                                          const std::function< void(const CriterionOutcome&) >& on_done = {})
{
    CampaignResult res;
    res.command = "all";
    res.claim   = "acceptance suite";
    res.config  = resolve_config(in);
    const auto outcomes = run_acceptance(AcceptanceOptions{res.config.seed}, on_done);
    Table      tab{"acceptance.csv", {"criterion", "pass", "seconds", "limit_seconds"}, {}};
    for (const auto& o : outcomes)
    {
        for (auto c : o.checks)
        {
            c.name = "C" + std::to_string(o.id) + " " + c.name;
            res.checks.push_back(std::move(c));
        }
        res.note("C" + std::to_string(o.id) + " " + o.title, std::string{o.pass ? "PASS" : "FAIL"} + ": " + o.detail);
        tab.rows.push_back({std::to_string(o.id), o.pass ? "1" : "0", num17(o.seconds), num17(o.limit_seconds)});
    }
    res.tables.push_back(std::move(tab));
    return res;
}

/// Dispatches on config.command.
inline CampaignResult run_campaign(const CampaignConfig& cfg,
                                   const std::function< void(const CriterionOutcome&) >& on_criterion = {})
{
    const auto start = std::chrono::steady_clock::now();
    CampaignResult res;
    if (cfg.command == "diagonal-scan")
        res = diagonal_scan(cfg);
    else if (cfg.command == "circle-extremum")
        res = circle_extremum(cfg);
    else if (cfg.command == "coupling-verify")
        res = coupling_verify(cfg);
    else if (cfg.command == "oned-verify")
        res = oned_verify(cfg);
    else if (cfg.command == "hotspots")
        res = hotspots(cfg);
    else if (cfg.command == "all")
        res = acceptance_campaign(cfg, on_criterion);
    else
        throw UsageError{"unknown command '" + cfg.command + "'"};
    res.seconds = std::chrono::duration< double >(std::chrono::steady_clock::now() - start).count();
    return res;
}

} // namespace ballkernel

#endif // BALLKERNEL_ACCEPTANCE_HPP
