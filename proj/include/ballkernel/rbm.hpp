#ifndef BALLKERNEL_RBM_HPP
#define BALLKERNEL_RBM_HPP

#include "ballkernel/geometry.hpp"
#include "ballkernel/rng.hpp"
#include "ballkernel/vec.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace ballkernel
{

/// Reflecting Brownian motion in the closed unit ball: position, boundary local time, clock.
template < int N, class T = double >
struct RbmState
{
    Vec< N, T > position;
    T           local_time = 0;
    double      time       = 0.;
};

struct SimConfig
{
    double        dt        = 1e-4;
    std::uint64_t seed      = 20240601;
    std::uint64_t n_paths   = 200000;
    int           dimension = 2;

    void validate() const
    {
        if (!(dt > 0.) || dt > 1e-2)
            throw std::invalid_argument{"SimConfig: dt must lie in (0, 1e-2]"};
        if (n_paths < 1)
            throw std::invalid_argument{"SimConfig: n_paths must be positive"};
        if (dimension < 1 || dimension > 3)
            throw std::invalid_argument{"SimConfig: dimension must be 1, 2 or 3"};
    }
};

/// Number of steps of size dt needed to reach time t; ratios within rounding of an integer are not rounded up.
inline std::uint64_t step_count(double t, double dt)
{
    const double ratio = t / dt;
    const double near  = std::round(ratio);
    if (std::fabs(ratio - near) <= 1e-9 * std::max(1., near))
        return static_cast< std::uint64_t >(std::max(near, 1.));
    return static_cast< std::uint64_t >(std::ceil(ratio));
}

/// One step of the projected Euler scheme for the Skorokhod equation: free Gaussian move, then
/// radial projection. The projection direction is -x on the sphere, so the push length is the
/// local-time increment. radius = infinity gives free Brownian motion.
template < int N, class T >
RbmState< N, T > step_reflected(const RbmState< N, T >& s, const Vec< N, T >& g, double dt, T radius = 1)
{
    using std::sqrt;
    const auto proj = project_to_ball(s.position + g * sqrt(static_cast< T >(dt)), radius);
    return {proj.point, s.local_time + proj.push, s.time + dt};
}

template < int N, class T >
void require_in_closed_ball(const Vec< N, T >& x, const char* what)
{
    if (!is_finite(x) || norm(x) > 1. + 1e-12)
        throw std::invalid_argument{std::string{what} + ": point outside the closed unit ball"};
}

/// Terminal state after step_count(t, dt) steps along the stream keyed by (cfg.seed, path_index).
template < int N >
RbmState< N > simulate_endpoint(const Vec< N >& x0, double t, const SimConfig& cfg, std::uint64_t path_index,
                                double radius = 1.)
{
    cfg.validate();
    if (!(t > 0.))
        throw std::invalid_argument{"simulate_endpoint: t must be positive"};
    if (radius == 1.)
        require_in_closed_ball(x0, "simulate_endpoint");

    NormalStream        stream{cfg.seed, path_index};
    const std::uint64_t steps = step_count(t, cfg.dt);
    const double        sdt   = std::sqrt(cfg.dt);
    const double        r2    = radius * radius;

    // Inlined step_reflected; the interior branch avoids the projection call.
    Vec< N > x  = x0;
    double   lt = 0.;
    for (std::uint64_t k = 0; k < steps; ++k)
    {
        x += stream.increment< N >(k) * sdt;
        if (norm_sq(x) > r2)
        {
            const auto proj = project_to_ball< N >(x, radius);
            x               = proj.point;
            lt += proj.push;
        }
    }
    return {x, lt, static_cast< double >(steps) * cfg.dt};
}

/// Whether the terminal position of simulate_endpoint lies in the open ball B(y, eps).
template < int N >
bool indicator_hit(const Vec< N >& x0, const Vec< N >& y, double eps, double t, const SimConfig& cfg,
                   std::uint64_t path_index)
{
    if (!(eps > 0.))
        throw std::invalid_argument{"indicator_hit: eps must be positive"};
    if (norm(y) + eps > 1. + 1e-12)
        throw std::invalid_argument{"indicator_hit: target ball leaves the closed unit ball"};
    const auto end = simulate_endpoint< N >(x0, t, cfg, path_index);
    return norm_sq(end.position - y) < eps * eps;
}

} // namespace ballkernel

#endif // BALLKERNEL_RBM_HPP
