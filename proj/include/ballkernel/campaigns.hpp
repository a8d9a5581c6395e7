#ifndef BALLKERNEL_CAMPAIGNS_HPP
#define BALLKERNEL_CAMPAIGNS_HPP

#include "ballkernel/coupling.hpp"
#include "ballkernel/estimator.hpp"
#include "ballkernel/kernels.hpp"
#include "ballkernel/parallel.hpp"
#include "ballkernel/tolerances.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

// Verification campaigns: each evaluates one claim about reflecting Brownian motion in the ball
// and returns named checks plus the tables behind them. No I/O happens here.

namespace ballkernel
{

/// Invalid parameters or an unsupported combination; the command line maps it to exit code 2.
class UsageError : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

struct CampaignConfig
{
    std::string           command;
    int                   dim = 2;
    std::vector< double > t;  ///< empty: command default
    std::vector< double > x;  ///< empty: command default
    std::vector< double > r;  ///< empty: command default
    double                theta       = std::numbers::pi / 2.;
    int                   theta_count = 256;
    int                   mc_angles   = 8; ///< Monte Carlo subgrid of the theta grid
    double                dt          = 1e-4;
    std::uint64_t         seed        = 20240601;
    std::uint64_t         paths       = 0; ///< 0: command default
    double                epsilon     = 0.05;
    bool                  mc          = false;
    double                budget      = 3e9; ///< path-steps per command before paths are scaled down
    std::string           out         = ".";
};

struct CheckRecord
{
    std::string name;
    double      measured = 0.;
    std::string relation; ///< "<=", "<", ">=", ">" or "=="
    double      threshold = 0.;
    bool        pass      = false;
};

/// A CSV table; cells are preformatted text, empty for missing values.
struct Table
{
    std::string                             file;
    std::vector< std::string >              columns;
    std::vector< std::vector< std::string > > rows;
};

struct CampaignResult
{
    std::string                                        command;
    std::string                                        claim;
    CampaignConfig                                     config; ///< after defaults were filled in
    std::vector< CheckRecord >                         checks;
    std::vector< Table >                               tables;
    std::vector< std::pair< std::string, std::string > > notes;
    double                                             seconds = 0.;

    bool pass() const
    {
        return std::all_of(checks.begin(), checks.end(), [](const CheckRecord& c) { return c.pass; });
    }

    void note(std::string key, std::string value) { notes.emplace_back(std::move(key), std::move(value)); }
};

/// 17 significant digits, enough for every double to round-trip.
inline std::string num17(double v)
{
    if (std::isnan(v))
        return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string num_short(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

inline CheckRecord make_check(std::string name, double measured, std::string relation, double threshold)
{
    bool pass = false;
    if (relation == "<=")
        pass = measured <= threshold;
    else if (relation == "<")
        pass = measured < threshold;
    else if (relation == ">=")
        pass = measured >= threshold;
    else if (relation == ">")
        pass = measured > threshold;
    else if (relation == "==")
        pass = measured == threshold;
    else
        throw std::logic_error{"make_check: unknown relation " + relation};
    return {std::move(name), measured, std::move(relation), threshold, pass};
}

namespace detail
{
inline void add(CampaignResult& res, std::string name, double measured, std::string relation, double threshold)
{
    res.checks.push_back(make_check(std::move(name), measured, std::move(relation), threshold));
}

inline void require(bool ok, const std::string& message)
{
    if (!ok)
        throw UsageError{message};
}

inline std::vector< double > diagonal_grid_2d()
{
    return {0., 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.99};
}

inline std::vector< double > diagonal_grid_1d()
{
    return {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.99};
}

// Paths after the budget cap: never above the request, never below 1000 (or the request).
inline std::uint64_t budget_paths(CampaignResult& res, std::uint64_t requested, double steps_per_path)
{
    const double need = static_cast< double >(requested) * steps_per_path;
    if (need <= res.config.budget)
        return requested;
    const auto floor_paths = std::min< std::uint64_t >(requested, 1000);
    const auto capped      = std::max< std::uint64_t >(
        floor_paths, static_cast< std::uint64_t >(std::floor(res.config.budget / steps_per_path)));
    res.note("budget_scale", num17(static_cast< double >(capped) / static_cast< double >(requested)));
    res.note("paths_used", std::to_string(capped));
    return capped;
}

inline SimConfig sim_config(const CampaignConfig& c, std::uint64_t paths, int dim)
{
    SimConfig s;
    s.dt        = c.dt;
    s.seed      = c.seed;
    s.n_paths   = paths;
    s.dimension = dim;
    return s;
}

// Smallest Neumann truncation tolerance used by the scans; diagonal differences reach 1e-13.
inline constexpr double kScanSeriesTol = 1e-16;
// Smallest time at which the disk series is offered.
inline constexpr double kDiskMinTime = 0.05;

inline std::vector< double > pick(const std::vector< double >& given, std::vector< double > fallback)
{
    return given.empty() ? std::move(fallback) : given;
}
} // namespace detail

/// Fills command defaults and rejects invalid shared parameters.
inline CampaignConfig resolve_config(CampaignConfig c)
{
    using detail::pick;
    using detail::require;
    const std::string& cmd = c.command;
    if (cmd == "diagonal-scan")
    {
        c.t     = pick(c.t, {0.05, 0.2, 1.});
        c.x     = pick(c.x, c.dim == 1 ? detail::diagonal_grid_1d() : detail::diagonal_grid_2d());
        c.paths = c.paths ? c.paths : 200000;
    }
    else if (cmd == "circle-extremum")
    {
        c.t     = pick(c.t, {0.5});
        c.x     = pick(c.x, {0.5});
        c.r     = pick(c.r, {0.2});
        c.paths = c.paths ? c.paths : 200000;
    }
    else if (cmd == "coupling-verify")
    {
        c.t     = pick(c.t, {1.});
        c.x     = pick(c.x, {0.5});
        c.r     = pick(c.r, {0.2});
        c.paths = c.paths ? c.paths : 1000;
    }
    else if (cmd == "oned-verify")
    {
        c.dim   = 1;
        c.t     = pick(c.t, {1.});
        c.x     = pick(c.x, {0.5});
        c.r     = pick(c.r, {0.25});
        c.paths = c.paths ? c.paths : 1000;
    }
    else if (cmd == "hotspots" || cmd == "all")
    {
        c.dim   = cmd == "hotspots" ? 2 : c.dim;
        c.paths = c.paths ? c.paths : 200000;
    }
    else
        throw UsageError{"unknown command '" + cmd + "'"};

    require(c.dim >= 1 && c.dim <= 3, "dim must be 1, 2 or 3");
    require(c.dt > 0. && c.dt <= 1e-2, "dt must lie in (0, 0.01]");
    require(c.paths >= 1, "paths must be positive");
    require(c.epsilon > 0. && c.epsilon < 1., "epsilon must lie in (0, 1)");
    require(c.theta_count >= 1 && c.theta_count <= 1000000, "theta-count must lie in [1, 1e6]");
    require(c.mc_angles >= 1, "mc-angles must be positive");
    require(c.budget > 0., "budget must be positive");
    require(std::isfinite(c.theta), "theta must be finite");
    for (double v : c.t)
        require(std::isfinite(v) && v > 0., "every t must be positive");
    for (double v : c.x)
        require(std::isfinite(v), "every x must be finite");
    for (double v : c.r)
        require(std::isfinite(v), "every r must be finite");
    return c;
}

namespace detail
{
inline double min_of(const std::vector< double >& v)
{
    return *std::min_element(v.begin(), v.end());
}

inline KernelSeries scan_kernel(const std::vector< double >& ts)
{
    const double t_min = min_of(ts);
    require(t_min >= kDiskMinTime, "the disk series is offered for t >= 0.05 only");
    return build_disk_kernel(t_min, kScanSeriesTol);
}
} // namespace detail

/// p(t, x, x) along a radius: strictly increasing per the radial monotonicity of the diagonal.
/// Differences within the strictness floor count as flat, not as failures.
inline CampaignResult diagonal_scan(const CampaignConfig& in)
{
    CampaignResult res;
    res.command = "diagonal-scan";
    res.claim   = "radial monotonicity of the diagonal p(t, x, x)";
    res.config  = resolve_config(in);
    const auto& c = res.config;
    detail::require(c.dim != 3, "diagonal-scan: no spectral kernel in 3-D");
    detail::require(c.x.size() >= 2, "diagonal-scan: need at least two x values");
    for (std::size_t i = 0; i < c.x.size(); ++i)
    {
        detail::require(c.x[i] >= 0. && c.x[i] <= 1., "diagonal-scan: x values must lie in [0, 1]");
        detail::require(i == 0 || c.x[i] > c.x[i - 1], "diagonal-scan: x values must be strictly ascending");
    }

    std::optional< KernelSeries > ks;
    if (c.dim == 2)
        ks = detail::scan_kernel(c.t);

    auto spectral = [&](double t, double x) {
        return c.dim == 2 ? disk_kernel_eval(*ks, t, Vec2{x, 0.}, Vec2{x, 0.}) : interval_kernel_eval(t, x, x);
    };

    Table tab{"diagonal.csv", {"t", "x", "p_spectral", "p_mc", "mc_stderr"}, {}};

    // Monte Carlo points need the whole target ball inside the domain.
    auto mc_ok = [&](double x) { return x + c.epsilon <= 1.; };
    std::uint64_t mc_paths = 0;
    if (c.mc)
    {
        double steps = 0.;
        for (double t : c.t)
            for (double x : c.x)
                if (mc_ok(x))
                    steps += static_cast< double >(step_count(t, c.dt));
        mc_paths = detail::budget_paths(res, c.paths, steps);
    }

    std::uint64_t path_offset = 0;
    for (double t : c.t)
    {
        std::vector< double > vals;
        for (double x : c.x)
        {
            const double p = spectral(t, x);
            vals.push_back(p);
            std::string pm, se;
            if (c.mc && mc_ok(x))
            {
                const SimConfig sim = detail::sim_config(c, mc_paths, c.dim);
                EstimatorResult est = c.dim == 2 ? estimate_density_range< 2 >(t, Vec2{x, 0.}, Vec2{x, 0.}, c.epsilon,
                                                                             sim, path_offset, mc_paths)
                                                 : estimate_density_range< 1 >(t, Vec1{x}, Vec1{x}, c.epsilon, sim,
                                                                             path_offset, mc_paths);
                path_offset += mc_paths;
                pm = num17(est.mean);
                se = num17(est.std_error);
                detail::add(res, "mc |z| t=" + num_short(t) + " x=" + num_short(x), std::fabs(z_score(est, p)), "<=",
                            tol::z_max);
            }
            tab.rows.push_back({num17(t), num17(x), num17(p), pm, se});
        }

        double      min_diff = std::numeric_limits< double >::infinity();
        std::size_t flat     = 0;
        for (std::size_t i = 1; i < vals.size(); ++i)
        {
            const double d = vals[i] - vals[i - 1];
            min_diff       = std::min(min_diff, d);
            if (std::fabs(d) <= tol::strictness_floor)
                ++flat;
        }
        const std::string tag = "t=" + num_short(t);
        detail::add(res, "min consecutive difference " + tag, min_diff, ">=", -tol::strictness_floor);
        res.note("flat_differences " + tag, std::to_string(flat) + " of " + std::to_string(vals.size() - 1));
        if (flat == vals.size() - 1)
        {
            // Stationary regime: every difference is below the floor.
            res.note("long_time_flat " + tag, "true");
            const auto [lo, hi] = std::minmax_element(vals.begin(), vals.end());
            detail::add(res, "diagonal spread " + tag, *hi - *lo, "<=", 1e-8);
        }
    }
    res.tables.push_back(std::move(tab));
    return res;
}

namespace detail
{
struct CircleProfile
{
    double                t = 0., x = 0., r = 0.;
    std::vector< double > theta;
    std::vector< double > p;
    double                diagonal = 0.; ///< p(t, x + r, x + r)
};

inline CircleProfile circle_profile_spectral(const std::optional< KernelSeries >& ks, int dim, double t, double x,
                                             double r, int theta_count)
{
    CircleProfile prof{t, x, r, {}, {}, 0.};
    if (dim == 2)
    {
        const Vec2 target{x, 0.};
        const auto ft = radial_factors(*ks, x);
        for (int i = 0; i < theta_count; ++i)
        {
            const double th = 2. * std::numbers::pi * i / theta_count;
            const Vec2   start{x + r * std::cos(th), r * std::sin(th)};
            const double rs = std::min(norm(start), 1.);
            prof.theta.push_back(th);
            prof.p.push_back(disk_kernel_from_factors(*ks, t, radial_factors(*ks, rs), std::atan2(start[1], start[0]),
                                                      ft, 0.));
        }
        prof.diagonal = disk_kernel_eval(*ks, t, Vec2{x + r, 0.}, Vec2{x + r, 0.});
    }
    else
    {
        // The "circle" of radius r about x in the interval is the pair {x + r, x - r}.
        prof.theta    = {0., std::numbers::pi};
        prof.p        = {interval_kernel_eval(t, x + r, x), interval_kernel_eval(t, x - r, x)};
        prof.diagonal = interval_kernel_eval(t, x + r, x + r);
    }
    return prof;
}

inline void require_circle_hypotheses(double x, double r, const char* what)
{
    require(x > 0. && x < 1., std::string{what} + ": need 0 < x < 1");
    require(r > 0. && r < std::min(x, 1. - x), std::string{what} + ": need 0 < r < min(x, 1 - x)");
}

inline std::vector< std::pair< double, double > > zip_xr(const CampaignConfig& c, const char* what)
{
    require(!c.x.empty() && !c.r.empty(), std::string{what} + ": need x and r");
    require(c.x.size() == c.r.size() || c.x.size() == 1 || c.r.size() == 1,
            std::string{what} + ": x and r lists must have equal length or length one");
    const std::size_t                          n = std::max(c.x.size(), c.r.size());
    std::vector< std::pair< double, double > > out;
    for (std::size_t i = 0; i < n; ++i)
        out.emplace_back(c.x[c.x.size() == 1 ? 0 : i], c.r[c.r.size() == 1 ? 0 : i]);
    return out;
}
} // namespace detail

/// theta -> p(t, x + r e^{i theta}, x): maximal at theta = 0, with
/// circle average <= p(t, x + r, x) <= p(t, x + r, x + r).
inline CampaignResult circle_extremum(const CampaignConfig& in, double slack = 1e-9)
{
    CampaignResult res;
    res.command = "circle-extremum";
    res.claim   = "extremum of the transition density on a circle; main inequality";
    res.config  = resolve_config(in);
    const auto& c = res.config;
    detail::require(c.dim == 1 || c.dim == 2, "circle-extremum: dim must be 1 or 2");
    const auto pairs = detail::zip_xr(c, "circle-extremum");
    for (const auto& [x, r] : pairs)
        detail::require_circle_hypotheses(x, r, "circle-extremum");
    const int n_theta = c.dim == 2 ? c.theta_count : 2;
    const int n_mc    = c.dim == 2 ? c.mc_angles : 2;
    if (c.mc)
    {
        detail::require(n_theta % n_mc == 0, "circle-extremum: mc-angles must divide theta-count");
        for (const auto& [x, r] : pairs)
            detail::require(x + c.epsilon <= 1. && x - c.epsilon >= -1., "circle-extremum: target ball leaves the domain");
    }

    std::optional< KernelSeries > ks;
    if (c.dim == 2)
        ks = detail::scan_kernel(c.t);

    std::uint64_t mc_paths = 0;
    if (c.mc)
    {
        double steps = 0.;
        for (double t : c.t)
            steps += static_cast< double >(step_count(t, c.dt)) * n_mc * static_cast< double >(pairs.size());
        mc_paths = detail::budget_paths(res, c.paths, steps);
    }

    std::uint64_t path_offset = 0;
    int           index       = 0;
    for (double t : c.t)
        for (const auto& [x, r] : pairs)
        {
            const auto prof = detail::circle_profile_spectral(ks, c.dim, t, x, r, n_theta);
            const std::string tag = "t=" + num_short(t) + " x=" + num_short(x) + " r=" + num_short(r);

            const auto   max_it = std::max_element(prof.p.begin(), prof.p.end());
            const double p0     = prof.p.front();
            double       mean   = 0.;
            for (double v : prof.p)
                mean += v;
            mean /= static_cast< double >(prof.p.size());

            detail::add(res, "p(theta=0) - grid max " + tag, p0 - *max_it, ">=", 0.);
            res.note("argmax theta index " + tag, std::to_string(max_it - prof.p.begin()));
            detail::add(res, "p(theta=0) - circle mean " + tag, p0 - mean, ">=", -slack);
            detail::add(res, "p(x+r, x+r) - p(theta=0) " + tag, prof.diagonal - p0, ">=", -slack);

            std::vector< std::string > pm(prof.p.size()), se(prof.p.size());
            if (c.mc)
            {
                const SimConfig                 sim  = detail::sim_config(c, mc_paths, c.dim);
                const int                       step = n_theta / n_mc;
                std::vector< EstimatorResult > ests;
                for (int j = 0; j < n_mc; ++j)
                {
                    const std::size_t i  = static_cast< std::size_t >(j * step);
                    const double      th = prof.theta[i];
                    EstimatorResult   est =
                        c.dim == 2
                            ? estimate_density_range< 2 >(t, Vec2{x + r * std::cos(th), r * std::sin(th)}, Vec2{x, 0.},
                                                          c.epsilon, sim, path_offset, mc_paths)
                            : estimate_density_range< 1 >(t, Vec1{j == 0 ? x + r : x - r}, Vec1{x}, c.epsilon, sim,
                                                          path_offset, mc_paths);
                    path_offset += mc_paths;
                    pm[i] = num17(est.mean);
                    se[i] = num17(est.std_error);
                    detail::add(res, "mc |z| " + tag + " theta=" + num_short(th), std::fabs(z_score(est, prof.p[i])),
                                "<=", tol::z_max);
                    ests.push_back(std::move(est));
                }
                if (n_mc % 2 == 0)
                    detail::add(res, "mc z(theta=0 minus theta=pi) " + tag,
                                z_difference(ests.front(), ests[static_cast< std::size_t >(n_mc / 2)]), ">=",
                                -tol::z_max);
            }

            Table tab{"circle_profile_" + std::to_string(index++) + ".csv",
                      {"t", "x", "r", "theta", "p_spectral", "p_mc", "mc_stderr"},
                      {}};
            for (std::size_t i = 0; i < prof.p.size(); ++i)
                tab.rows.push_back({num17(t), num17(x), num17(r), num17(prof.theta[i]), num17(prof.p[i]), pm[i], se[i]});
            res.tables.push_back(std::move(tab));
        }
    return res;
}

namespace detail
{
template < int N >
Vec< N > planar_point(double a, double b)
{
    Vec< N > v;
    v[0] = a;
    v[1] = b;
    return v;
}

template < int N >
void coupling_suite(CampaignResult& res, double x, double r, double theta, double t, std::uint64_t paths)
{
    const auto&  c         = res.config;
    const double allowance = 10. * std::sqrt(c.dt);
    const SimConfig sim    = sim_config(c, paths, N);
    const Vec< N > x0      = planar_point< N >(x + r, 0.);
    const Vec< N > y0      = planar_point< N >(x + r * std::cos(theta), r * std::sin(theta));
    const Target< N > target{planar_point< N >(x, 0.), c.epsilon};

    using Records = std::vector< CouplingRecord< N > >;
    const Records recs = parallel_reduce(
        std::uint64_t{0}, paths, Records{},
        [&](std::uint64_t lo, std::uint64_t hi) {
            Records out;
            for (std::uint64_t p = lo; p < hi; ++p)
                out.push_back(run_coupling< N >(x0, y0, t, sim, p, target));
            return out;
        },
        [](Records a, Records b) {
            a.insert(a.end(), std::make_move_iterator(b.begin()), std::make_move_iterator(b.end()));
            return a;
        });

    std::uint64_t chord_steps = 0, probes = 0, domination = 0, coupled = 0, with_tau1 = 0;
    double        max_a = 0., max_total = 0., max_du = 0., max_inner = 0., max_sym = 0., max_drift = 0.;
    double        qv_int = 0., time_int = 0., qv_all = 0., time_all = 0.;
    std::array< std::array< double, N >, N > qv_t{}, qv_e{};
    for (const auto& rec : recs)
    {
        chord_steps += rec.chord_violation_steps;
        probes += rec.probe_violations;
        domination += rec.domination_violations;
        coupled += rec.tau ? 1u : 0u;
        with_tau1 += rec.tau1 ? 1u : 0u;
        max_a     = std::max({max_a, rec.a1_max_increase, rec.b1_max_increase});
        max_total = std::max({max_total, rec.a1_positive_total, rec.b1_positive_total});
        max_du    = std::max(max_du, rec.max_du);
        max_inner = std::max(max_inner, rec.max_inner_residual);
        max_sym   = std::max(max_sym, rec.max_symmetry_residual);
        max_drift = std::max(max_drift, rec.max_post_tau1_drift);
        if (rec.interior_time >= 0.1)
        {
            qv_int += rec.qv_interior_trace();
            time_int += rec.interior_time;
            for (std::size_t i = 0; i < static_cast< std::size_t >(N); ++i)
                for (std::size_t j = 0; j < static_cast< std::size_t >(N); ++j)
                {
                    qv_t[i][j] += rec.qv_interior[i][j];
                    qv_e[i][j] += rec.qv_expected[i][j];
                }
        }
        if (rec.pre_tau_time >= 0.1)
        {
            qv_all += rec.qv_all;
            time_all += rec.pre_tau_time;
        }
    }
    double dev = 0., ref = 0.;
    for (std::size_t i = 0; i < static_cast< std::size_t >(N); ++i)
        for (std::size_t j = 0; j < static_cast< std::size_t >(N); ++j)
        {
            dev += (qv_t[i][j] - qv_e[i][j]) * (qv_t[i][j] - qv_e[i][j]);
            ref += qv_e[i][j] * qv_e[i][j];
        }
    const double nan = std::numeric_limits< double >::quiet_NaN();

    const std::string d = std::to_string(N) + "d ";
    if constexpr (N == 2)
    {
        add(res, d + "steps with a1 or b1 rising more than 10 sqrt(dt)", static_cast< double >(chord_steps), "==", 0.);
        add(res, d + "max single-step rise of a1, b1", max_a, "<=", allowance);
        add(res, d + "max per-path positive total of a1, b1", max_total, "<=", 100. * std::sqrt(c.dt));
    }
    add(res, d + "probe points crossing back over the mirror", static_cast< double >(probes), "==", 0.);
    add(res, d + "domination violations", static_cast< double >(domination), "==", 0.);
    add(res, d + "|interior gap QV / (4 T_int) - 1|", time_int > 0. ? std::fabs(qv_int / (4. * time_int) - 1.) : nan,
        "<=", 0.02);
    add(res, d + "interior gap QV tensor relative deviation", ref > 0. ? std::sqrt(dev / ref) : nan, "<=", 0.02);
    add(res, d + "|gap QV / (4 T) - 1| over all pre-tau steps",
        time_all > 0. ? std::fabs(qv_all / (4. * time_all) - 1.) : nan, "<=", 0.02);
    add(res, d + "max |du| over interior steps", max_du, "<=", 1e-10);
    add(res, d + "max inner-product identity residual", max_inner, "<=", 1e-12);
    add(res, d + "max pre-boundary mirror symmetry residual", max_sym, "<=", tol::geometric);
    add(res, d + "max post-tau1 mirror angle change per step", max_drift, "<=", allowance);
    res.note(d + "coupled fraction", num17(static_cast< double >(coupled) / static_cast< double >(paths)));
    res.note(d + "tau1 fraction", num17(static_cast< double >(with_tau1) / static_cast< double >(paths)));
    res.note(d + "interior time pooled", num17(time_int));

    if (std::fabs(theta - std::numbers::pi) <= 1e-15 && !recs.empty() && recs.front().u0)
    {
        const auto& u0  = *recs.front().u0;
        double      err = std::fabs(u0[0] - 1. / x);
        for (int i = 1; i < N; ++i)
            err = std::max(err, std::fabs(u0[i]));
        add(res, d + "|u0 - (1/x, 0)| at theta = pi", err, "<=", 1e-12);
    }

    Table tab{"coupling_paths_" + std::to_string(N) + "d.csv", {"path", "tau", "tau1"}, {}};
    for (int i = 0; i < N; ++i)
        tab.columns.push_back("x_end_" + std::to_string(i + 1));
    for (int i = 0; i < N; ++i)
        tab.columns.push_back("y_end_" + std::to_string(i + 1));
    for (const char* col : {"a1_max_increase", "b1_max_increase", "probe_violations", "domination_violations",
                            "max_du", "qv_interior", "interior_time", "qv_all", "pre_tau_time", "max_post_tau1_drift"})
        tab.columns.emplace_back(col);
    for (const auto& rec : recs)
    {
        std::vector< std::string > row{std::to_string(rec.path_index), rec.tau ? num17(*rec.tau) : "",
                                       rec.tau1 ? num17(*rec.tau1) : ""};
        for (int i = 0; i < N; ++i)
            row.push_back(num17(rec.x_end[i]));
        for (int i = 0; i < N; ++i)
            row.push_back(num17(rec.y_end[i]));
        for (double v : {rec.a1_max_increase, rec.b1_max_increase, static_cast< double >(rec.probe_violations),
                         static_cast< double >(rec.domination_violations), rec.max_du, rec.qv_interior_trace(),
                         rec.interior_time, rec.qv_all, rec.pre_tau_time, rec.max_post_tau1_drift})
            row.push_back(num17(v));
        tab.rows.push_back(std::move(row));
    }
    res.tables.push_back(std::move(tab));
}
} // namespace detail

/// Pathwise checks of the mirror coupling from X0 = x + r, Y0 = x + r e^{i theta}.
inline CampaignResult coupling_verify(const CampaignConfig& in)
{
    CampaignResult res;
    res.command = "coupling-verify";
    res.claim   = "mirror coupling: mirror moves away from x, pathwise domination, bounded-variation mirror coordinates";
    res.config  = resolve_config(in);
    const auto& c = res.config;
    detail::require(c.dim == 2 || c.dim == 3, "coupling-verify: dim must be 2 or 3 (use oned-verify for 1-D)");
    detail::require(c.t.size() == 1 && c.x.size() == 1 && c.r.size() == 1,
                    "coupling-verify: takes a single t, x and r");
    const double x = c.x[0], r = c.r[0], t = c.t[0];
    detail::require_circle_hypotheses(x, r, "coupling-verify");
    detail::require(std::fabs(std::remainder(c.theta, 2. * std::numbers::pi)) > 1e-9,
                    "coupling-verify: theta = 0 starts both processes at the same point");
    detail::require(x + c.epsilon <= 1., "coupling-verify: target ball leaves the domain");

    const std::uint64_t paths = detail::budget_paths(res, c.paths, static_cast< double >(step_count(t, c.dt)));
    if (c.dim == 2)
        detail::coupling_suite< 2 >(res, x, r, c.theta, t, paths);
    else
        detail::coupling_suite< 3 >(res, x, r, c.theta, t, paths);
    return res;
}

/// 1-D coupling from x - r and x + r: midpoint = x - L^Y / 2 until tau ^ tau1.
inline CampaignResult oned_verify(const CampaignConfig& in)
{
    CampaignResult res;
    res.command = "oned-verify";
    res.claim   = "interval coupling: midpoint equals x - L^Y / 2 and is non-increasing";
    res.config  = resolve_config(in);
    const auto& c = res.config;
    detail::require(c.t.size() == 1 && c.x.size() == 1 && c.r.size() == 1, "oned-verify: takes a single t, x and r");
    const double x = c.x[0], r = c.r[0], t = c.t[0];
    detail::require_circle_hypotheses(x, r, "oned-verify");

    const std::uint64_t paths = detail::budget_paths(res, c.paths, static_cast< double >(step_count(t, c.dt)));
    const SimConfig     sim   = detail::sim_config(c, paths, 1);
    using Records             = std::vector< OneDRecord >;
    const Records recs        = parallel_reduce(
        std::uint64_t{0}, paths, Records{},
        [&](std::uint64_t lo, std::uint64_t hi) {
            Records out;
            for (std::uint64_t p = lo; p < hi; ++p)
                out.push_back(run_coupling_1d(x, r, t, sim, p));
            return out;
        },
        [](Records a, Records b) {
            a.insert(a.end(), std::make_move_iterator(b.begin()), std::make_move_iterator(b.end()));
            return a;
        });

    double        max_res = 0., max_rise = 0.;
    std::uint64_t order = 0, coupled = 0, with_tau1 = 0;
    Table tab{"oned_paths.csv", {"path", "tau", "tau1", "max_residual", "max_midpoint_increase", "ordering_violations"}, {}};
    for (const auto& rec : recs)
    {
        max_res  = std::max(max_res, rec.max_residual);
        max_rise = std::max(max_rise, rec.max_midpoint_increase);
        order += rec.ordering_violations;
        coupled += rec.tau ? 1u : 0u;
        with_tau1 += rec.tau1 ? 1u : 0u;
        tab.rows.push_back({std::to_string(rec.path_index), rec.tau ? num17(*rec.tau) : "",
                            rec.tau1 ? num17(*rec.tau1) : "", num17(rec.max_residual), num17(rec.max_midpoint_increase),
                            std::to_string(rec.ordering_violations)});
    }
    detail::add(res, "max |midpoint - (x - L^Y / 2)| before tau ^ tau1", max_res, "<=", 1e-9);
    detail::add(res, "max single-step midpoint increase before tau ^ tau1", max_rise, "<=", tol::strictness_floor);
    detail::add(res, "steps with |Y - x| > |X - x| + 10 sqrt(dt)", static_cast< double >(order), "==", 0.);
    res.note("coupled fraction", num17(static_cast< double >(coupled) / static_cast< double >(paths)));
    res.note("tau1 fraction", num17(static_cast< double >(with_tau1) / static_cast< double >(paths)));
    res.tables.push_back(std::move(tab));
    return res;
}

/// Second Neumann eigenfunction of the disk: minimal eigenpair, radial profile increasing,
/// extrema on the boundary.
inline CampaignResult hotspots(const CampaignConfig& in)
{
    CampaignResult res;
    res.command = "hotspots";
    res.claim   = "hot spots of the unit disk lie on the boundary";
    res.config  = resolve_config(in);

    constexpr double kRootReference = 1.8411837813406593; // first positive zero of J_1'
    const auto       ep             = minimal_neumann_eigenpair();
    res.note("order", std::to_string(ep.order));
    res.note("root", num17(ep.root));
    res.note("eigenvalue", num17(ep.eigenvalue));
    detail::add(res, "|root - 1.8412|", std::fabs(ep.root - kRootReference), "<=", 1e-3);
    detail::add(res, "|eigenvalue - root^2|", std::fabs(ep.eigenvalue - ep.root * ep.root), "<=", 1e-12);
    detail::add(res, "|J_m'(root)|", std::fabs(bessel_j_prime(ep.order, ep.root)), "<=", 1e-12);

    Table                 tab{"hotspots_profile.csv", {"r", "radial_profile"}, {}};
    std::vector< double > prof;
    for (int i = 0; i <= 100; ++i)
    {
        const double r = i / 100.;
        prof.push_back(second_eigenfunction_radial(r));
        tab.rows.push_back({num17(r), num17(prof.back())});
    }
    double min_diff = std::numeric_limits< double >::infinity();
    for (std::size_t i = 1; i < prof.size(); ++i)
        min_diff = std::min(min_diff, prof[i] - prof[i - 1]);
    detail::add(res, "min consecutive radial difference", min_diff, ">", tol::strictness_floor);
    detail::add(res, "|profile(0)|", std::fabs(prof.front()), "<=", 0.);

    // |phi| = |J_m(k r) cos(m theta)| on the boundary circle against the interior polar grid.
    double boundary = 0., interior = 0.;
    for (int j = 0; j < 256; ++j)
    {
        const double ang = std::fabs(std::cos(ep.order * 2. * std::numbers::pi * j / 256.));
        boundary         = std::max(boundary, std::fabs(prof.back()) * ang);
        for (std::size_t i = 0; i + 1 < prof.size(); ++i)
            interior = std::max(interior, std::fabs(prof[i]) * ang);
    }
    detail::add(res, "boundary max |phi| - interior max |phi|", boundary - interior, ">", 0.);
    res.tables.push_back(std::move(tab));
    return res;
}

} // namespace ballkernel

#endif // BALLKERNEL_CAMPAIGNS_HPP
