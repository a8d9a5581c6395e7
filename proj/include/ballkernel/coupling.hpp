#ifndef BALLKERNEL_COUPLING_HPP
#define BALLKERNEL_COUPLING_HPP

#include "ballkernel/geometry.hpp"
#include "ballkernel/rbm.hpp"
#include "ballkernel/rng.hpp"
#include "ballkernel/tolerances.hpp"
#include "ballkernel/vec.hpp"

#include <boost/multiprecision/float128.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

namespace ballkernel
{

/// Working precision of the coupled pair. The mirror coordinates u = 2 (X - Y) / inner grow like
/// 1 / dist(mirror, 0), so their rounding noise grows like eps / dist^2. Paths whose mirror passes
/// within 1e-5 of the origin occur at the 1e-3 level; quad precision keeps the noise there below
/// 1e-20, where the x87 extended format would leave it near 1e-10.
using CouplingScalar = boost::multiprecision::float128;

/// Mirror image of a displacement across the hyperplane with unit normal e: w - 2 (e . w) e.
template < int N, class T >
Vec< N, T > reflect_vector(const Vec< N, T >& w, const Vec< N, T >& e)
{
    using std::fabs;
    if (fabs(norm(e) - T(1)) > tol::reflect_unit)
        throw std::invalid_argument{"reflect_vector: normal is not a unit vector"};
    return w - e * (T(2) * dot(e, w));
}

/// Mirror coupling of two reflecting Brownian motions in the unit ball.
///
/// Before tau the mirror is the perpendicular bisector of X and Y. From tau on the processes
/// coincide and the mirror keeps its last normal, anchored at the common position.
template < int N, class T = CouplingScalar >
struct CouplingState
{
    RbmState< N, T >        X;
    RbmState< N, T >        Y;
    Mirror< N, T >          mirror;
    bool                    coupled = false;
    std::optional< double > tau;
    std::optional< double > tau1;
    T                       inner = 0; ///< (X - Y) . (X + Y) after the last step
};

template < int N, class T >
T inner_product_of(const Vec< N, T >& x, const Vec< N, T >& y)
{
    return dot(x - y, x + y);
}

namespace detail
{
template < class T >
bool mirror_hits_origin(T inner_prev, T inner_now, T gap)
{
    using std::fabs;
    return (inner_prev > 0) != (inner_now > 0) || fabs(inner_now) <= T(1e-12) * gap;
}
} // namespace detail

template < int N, class T = CouplingScalar >
CouplingState< N, T > start_coupling(const Vec< N >& x0_in, const Vec< N >& y0_in)
{
    require_in_closed_ball(x0_in, "start_coupling");
    require_in_closed_ball(y0_in, "start_coupling");
    const Vec< N, T >     x0{x0_in}, y0{y0_in};
    CouplingState< N, T > s;
    s.X.position = x0;
    s.Y.position = y0;
    s.mirror     = mirror_from_pair(x0, y0);
    s.inner      = inner_product_of(x0, y0);
    using std::fabs;
    if (fabs(s.inner) <= T(1e-12) * norm(x0 - y0))
        s.tau1 = 0.;
    return s;
}

/// 3 sqrt(2 dt): one step of the gap process, which diffuses at speed 2.
inline double default_couple_threshold(double dt)
{
    return 3. * std::sqrt(2. * dt);
}

/// One step: X moves by sqrt(dt) g, Y by its mirror image across the pre-step mirror, both are
/// projected back into the ball, then the mirror is rebuilt and tau / tau1 are checked.
template < int N, class T >
CouplingState< N, T > coupled_step(const CouplingState< N, T >& s, const Vec< N >& g_in, double dt,
                                   double couple_threshold)
{
    CouplingState< N, T > out = s;
    const Vec< N, T >     g{g_in};
    using std::sqrt;
    const Vec< N, T >     w = g * sqrt(static_cast< T >(dt));
    if (s.coupled)
    {
        out.X             = step_reflected(s.X, g, dt);
        out.Y             = step_reflected(s.Y, g, dt);
        out.mirror.anchor = out.X.position;
        return out;
    }

    const Vec< N, T > wy = reflect_vector(w, s.mirror.normal);
    const auto        px = project_to_ball(s.X.position + w);
    const auto        py = project_to_ball(s.Y.position + wy);
    out.X                = {px.point, s.X.local_time + px.push, s.X.time + dt};
    out.Y                = {py.point, s.Y.local_time + py.push, s.Y.time + dt};

    const Vec< N, T > gap     = out.X.position - out.Y.position;
    const T           gap_len = norm(gap);
    // A gap that turned against the old normal has passed through zero within the step.
    if (gap_len <= couple_threshold || dot(gap, s.mirror.normal) <= 0.)
    {
        out.Y.position    = out.X.position;
        out.coupled       = true;
        out.tau           = out.X.time;
        out.mirror.anchor = out.X.position;
        return out;
    }

    out.mirror = mirror_from_pair(out.X.position, out.Y.position);
    out.inner  = dot(gap, out.X.position + out.Y.position);
    if (!out.tau1 && detail::mirror_hits_origin(s.inner, out.inner, gap_len))
        out.tau1 = out.X.time;
    return out;
}

/// Differences and sums of the coupled pair and the derived mirror coordinates.
template < int N, class T = CouplingScalar >
struct CouplingDiagnostics
{
    Vec< N, T >                     diff; ///< X - Y = (m, n[, .])
    Vec< N, T >                     sum;  ///< X + Y = (p, q[, .])
    T                               inner            = 0; ///< m p + n q [+ ...]
    T                               norm_sq_diff     = 0; ///< |X|^2 - |Y|^2
    bool                            degenerate_inner = false;
    std::optional< Vec< N, T > >    u;     ///< (u, v[, w]) = 2 (X - Y) / inner, the mirror as {z : u . z = 1}
    std::optional< ChordEndpoints > chord; ///< planar case only
};

template < int N, class T >
CouplingDiagnostics< N, T > coupling_diag(const CouplingState< N, T >& s)
{
    if (s.coupled)
        throw std::logic_error{"coupling_diag: processes have already coupled"};
    CouplingDiagnostics< N, T > d;
    d.diff         = s.X.position - s.Y.position;
    d.sum          = s.X.position + s.Y.position;
    d.inner        = dot(d.diff, d.sum);
    d.norm_sq_diff = norm_sq(s.X.position) - norm_sq(s.Y.position);
    using std::fabs;
    if (fabs(d.inner) > T(1e-12))
        d.u = d.diff * (T(2) / d.inner);
    else
        d.degenerate_inner = true;
    if constexpr (N == 2)
        d.chord = chord_endpoints(Mirror< 2 >{Vec2{s.mirror.normal}, Vec2{s.mirror.anchor}});
    return d;
}

/// Ball B(center, radius) whose hitting by Y must be dominated by X.
template < int N >
struct Target
{
    Vec< N > center;
    double   radius = 0.05;
};

/// Per-path summary of a coupled run; every field is reproducible from (seed, path_index).
template < int N >
struct CouplingRecord
{
    std::uint64_t           path_index = 0;
    std::optional< double > tau;
    std::optional< double > tau1;
    Vec< N >                x_end;
    Vec< N >                y_end;
    std::optional< Vec< N > > u0;

    // Mirror motion before tau ^ tau1.
    double        a1_max_increase        = 0.;
    double        b1_max_increase        = 0.;
    double        a1_positive_total      = 0.;
    double        b1_positive_total      = 0.;
    std::uint64_t chord_violation_steps  = 0; ///< steps where a1 or b1 rose by more than the allowance
    std::uint64_t probe_violations       = 0; ///< probe points that left the X side by more than the allowance
    double        max_du                 = 0.; ///< over steps with no boundary push
    double        max_inner_residual     = 0.;
    double        max_symmetry_residual  = 0.; ///< before either process first touches the boundary
    double        max_post_tau1_drift    = 0.; ///< mirror angle change per step, tau1 < t < tau

    std::uint64_t domination_violations = 0;

    // Gap X - Y before tau. The interior sums use only steps without any boundary push.
    std::array< std::array< double, N >, N > qv_interior{};
    std::array< std::array< double, N >, N > qv_expected{}; ///< sum of 4 e e^T dt, e the mirror normal
    double                                   interior_time = 0.;
    double                                   qv_all        = 0.; ///< trace, every pre-tau step
    double                                   pre_tau_time  = 0.;

    double qv_interior_trace() const
    {
        double s = 0.;
        for (int i = 0; i < N; ++i)
            s += qv_interior[static_cast< std::size_t >(i)][static_cast< std::size_t >(i)];
        return s;
    }
};

/// Fixed probe points of the open ball on a lattice of spacing 0.25.
template < int N >
std::vector< Vec< N > > probe_points()
{
    std::vector< Vec< N > > pts;
    std::array< int, 3 >    idx{};
    const int               side = 8;
    int                     total = 1;
    for (int i = 0; i < N; ++i)
        total *= side;
    for (int flat = 0; flat < total; ++flat)
    {
        int rem = flat;
        for (int i = 0; i < N; ++i)
        {
            idx[static_cast< std::size_t >(i)] = rem % side;
            rem /= side;
        }
        Vec< N > p;
        for (int i = 0; i < N; ++i)
            p[i] = -0.875 + 0.25 * idx[static_cast< std::size_t >(i)];
        if (norm(p) < 0.95)
            pts.push_back(p);
    }
    return pts;
}

/// Runs the coupling from (x0, y0) to t_max and accumulates the pathwise diagnostics.
/// Allowance for discretised monotonicity and domination checks: 10 sqrt(dt).
template < int N >
CouplingRecord< N > run_coupling(const Vec< N >& x0, const Vec< N >& y0, double t_max, const SimConfig& cfg,
                                 std::uint64_t path_index, const Target< N >& target)
{
    cfg.validate();
    if (!(t_max > 0.))
        throw std::invalid_argument{"run_coupling: t_max must be positive"};
    if (!(target.radius > 0.) || norm(target.center) + target.radius > 1. + 1e-12)
        throw std::invalid_argument{"run_coupling: target ball must lie inside the unit ball"};

    const double        allowance = 10. * std::sqrt(cfg.dt);
    const double        threshold = default_couple_threshold(cfg.dt);
    const std::uint64_t steps     = step_count(t_max, cfg.dt);
    static const auto   probes    = probe_points< N >();

    CouplingRecord< N > rec;
    rec.path_index = path_index;
    auto s         = start_coupling< N >(x0, y0);
    const auto mirror0 = s.mirror;
    {
        const auto d0 = coupling_diag(s);
        if (d0.u)
            rec.u0 = Vec< N >{*d0.u};
    }

    using T = CouplingScalar;
    using std::fabs;
    std::vector< char > probe_seen(probes.size(), 0), probe_flagged(probes.size(), 0);
    auto                update_probes = [&](const Mirror< N, T >& m) {
        for (std::size_t i = 0; i < probes.size(); ++i)
        {
            const double sd = static_cast< double >(signed_distance(m, Vec< N, T >{probes[i]}));
            if (sd >= 0.)
                probe_seen[i] = 1;
            else if (probe_seen[i] && !probe_flagged[i] && sd < -allowance)
            {
                probe_flagged[i] = 1;
                ++rec.probe_violations;
            }
        }
    };

    auto diag_prev = coupling_diag(s);
    if (!s.tau1)
        update_probes(s.mirror);
    bool touched = false;

    NormalStream stream{cfg.seed, path_index};
    for (std::uint64_t k = 0; k < steps; ++k)
    {
        const auto next = coupled_step(s, stream.increment< N >(k), cfg.dt, threshold);

        const bool pushed = next.X.local_time != s.X.local_time || next.Y.local_time != s.Y.local_time;
        touched           = touched || pushed;

        if (!s.coupled)
        {
            rec.pre_tau_time += cfg.dt;
            if (!next.coupled)
            {
                const Vec< N > delta{(next.X.position - next.Y.position) - (s.X.position - s.Y.position)};
                rec.qv_all += norm_sq(delta);
                if (!pushed)
                {
                    const Vec< N > e{s.mirror.normal};
                    for (int i = 0; i < N; ++i)
                        for (int j = 0; j < N; ++j)
                        {
                            rec.qv_interior[static_cast< std::size_t >(i)][static_cast< std::size_t >(j)] += delta[i] * delta[j];
                            rec.qv_expected[static_cast< std::size_t >(i)][static_cast< std::size_t >(j)] += 4. * e[i] * e[j] * cfg.dt;
                        }
                    rec.interior_time += cfg.dt;
                }

                const auto d = coupling_diag(next);
                rec.max_inner_residual =
                    std::max(rec.max_inner_residual, static_cast< double >(fabs(d.inner - d.norm_sq_diff)));
                if (!touched)
                    rec.max_symmetry_residual =
                        std::max(rec.max_symmetry_residual,
                                 static_cast< double >(norm(next.Y.position - reflect_point(mirror0, next.X.position))));

                if (!next.tau1)
                {
                    if (!pushed && d.u && diag_prev.u)
                        for (int i = 0; i < N; ++i)
                            rec.max_du =
                                std::max(rec.max_du, static_cast< double >(fabs((*d.u)[i] - (*diag_prev.u)[i])));
                    if constexpr (N == 2)
                    {
                        if (d.chord && diag_prev.chord)
                        {
                            const double da = d.chord->a1 - diag_prev.chord->a1;
                            const double db = d.chord->b1 - diag_prev.chord->b1;
                            rec.a1_max_increase = std::max(rec.a1_max_increase, da);
                            rec.b1_max_increase = std::max(rec.b1_max_increase, db);
                            rec.a1_positive_total += std::max(da, 0.);
                            rec.b1_positive_total += std::max(db, 0.);
                            if (da > allowance || db > allowance)
                                ++rec.chord_violation_steps;
                        }
                    }
                    update_probes(next.mirror);
                }
                else if (s.tau1)
                {
                    const double c =
                        std::clamp(static_cast< double >(dot(next.mirror.normal, s.mirror.normal)), -1., 1.);
                    rec.max_post_tau1_drift = std::max(rec.max_post_tau1_drift, std::acos(c));
                }
                diag_prev = d;
            }
        }

        if (norm(Vec< N >{next.Y.position} - target.center) < target.radius &&
            !(norm(Vec< N >{next.X.position} - target.center) < target.radius + allowance))
            ++rec.domination_violations;

        s = next;
    }
    rec.tau   = s.tau;
    rec.tau1  = s.tau1;
    rec.x_end = Vec< N >{s.X.position};
    rec.y_end = Vec< N >{s.Y.position};
    return rec;
}

/// One-dimensional coupling from x - r (X) and x + r (Y, driven by the negated noise).
struct OneDRecord
{
    std::uint64_t           path_index = 0;
    std::optional< double > tau;
    std::optional< double > tau1;              ///< first push of X at -1
    double                  max_residual = 0.; ///< sup |midpoint - (x - L^Y / 2)| before tau ^ tau1
    double                  max_midpoint_increase = 0.;
    std::uint64_t           ordering_violations   = 0; ///< steps with |Y - x| > |X - x| + 10 sqrt(dt)
    std::vector< double >   midpoint_trace;
    std::vector< double >   local_time_y_trace;
};

inline OneDRecord run_coupling_1d(double x, double r, double t_max, const SimConfig& cfg, std::uint64_t path_index,
                                  bool record_trace = false)
{
    cfg.validate();
    if (!(x > 0. && x < 1.) || !(r > 0. && r < std::min(x, 1. - x)))
        throw std::invalid_argument{"run_coupling_1d: need 0 < x < 1 and 0 < r < min(x, 1 - x)"};
    if (!(t_max > 0.))
        throw std::invalid_argument{"run_coupling_1d: t_max must be positive"};

    using T = CouplingScalar;
    using std::fabs;
    const double        allowance = 10. * std::sqrt(cfg.dt);
    const double        threshold = default_couple_threshold(cfg.dt);
    const std::uint64_t steps     = step_count(t_max, cfg.dt);

    OneDRecord rec;
    rec.path_index = path_index;
    auto s         = start_coupling< 1 >(Vec1{x - r}, Vec1{x + r});
    if (record_trace)
    {
        rec.midpoint_trace.reserve(steps + 1);
        rec.local_time_y_trace.reserve(steps + 1);
        rec.midpoint_trace.push_back(x);
        rec.local_time_y_trace.push_back(0.);
    }

    NormalStream stream{cfg.seed, path_index};
    bool         active = true; // before tau ^ tau1
    for (std::uint64_t k = 0; k < steps; ++k)
    {
        const auto next = coupled_step(s, stream.increment< 1 >(k), cfg.dt, threshold);
        const double mid = static_cast< double >(T(0.5) * (next.X.position[0] + next.Y.position[0]));
        if (active)
        {
            if (next.coupled)
            {
                active  = false;
            }
            else if (next.X.local_time != s.X.local_time)
            {
                rec.tau1 = next.X.time;
                active   = false;
            }
            else
            {
                const double prev_mid = static_cast< double >(T(0.5) * (s.X.position[0] + s.Y.position[0]));
                rec.max_residual      = std::max(
                    rec.max_residual, static_cast< double >(fabs(T(0.5) * (next.X.position[0] + next.Y.position[0]) -
                                                                      (x - T(0.5) * next.Y.local_time))));
                rec.max_midpoint_increase = std::max(rec.max_midpoint_increase, mid - prev_mid);
            }
        }
        if (fabs(next.Y.position[0] - x) > fabs(next.X.position[0] - x) + static_cast< T >(allowance))
            ++rec.ordering_violations;
        if (record_trace)
        {
            rec.midpoint_trace.push_back(mid);
            rec.local_time_y_trace.push_back(static_cast< double >(next.Y.local_time));
        }
        s = next;
        // Coupled processes coincide, so nothing recorded above can change any more.
        if (s.coupled && !record_trace)
            break;
    }
    rec.tau = s.tau;
    return rec;
}

} // namespace ballkernel

#endif // BALLKERNEL_COUPLING_HPP
