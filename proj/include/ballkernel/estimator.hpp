#ifndef BALLKERNEL_ESTIMATOR_HPP
#define BALLKERNEL_ESTIMATOR_HPP

#include "ballkernel/geometry.hpp"
#include "ballkernel/parallel.hpp"
#include "ballkernel/rbm.hpp"
#include "ballkernel/vec.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

namespace ballkernel
{

/// Occupation-density estimate of p(t, x, y): hits of B(y, eps) at time t over n_paths, scaled by 1 / |B(y, eps)|.
///
/// The hit count is kept as an integer, so shards merge exactly.
struct EstimatorResult
{
    double                mean      = 0.;
    double                std_error = 0.;
    std::uint64_t         n_paths   = 0;
    std::uint64_t         hits      = 0;
    double                epsilon   = 0.;
    double                t         = 0.;
    int                   dimension = 0;
    std::vector< double > x;
    std::vector< double > y;
};

namespace detail
{
inline void finalize(EstimatorResult& r)
{
    const double vol = ball_volume(r.dimension, r.epsilon);
    const double n   = static_cast< double >(r.n_paths);
    const double q   = static_cast< double >(r.hits) / n;
    r.mean           = q / vol;
    // Sample standard deviation of the 0/1 indicator (n - 1 denominator).
    const double var = r.n_paths > 1 ? q * (1. - q) * n / (n - 1.) : 0.;
    r.std_error      = std::sqrt(var / n) / vol;
}

template < int N >
std::vector< double > to_std(const Vec< N >& v)
{
    return {v.c.begin(), v.c.end()};
}
} // namespace detail

/// Same-target results over disjoint path ranges combine by adding counts.
inline EstimatorResult merge(const EstimatorResult& a, const EstimatorResult& b)
{
    if (a.dimension != b.dimension || a.epsilon != b.epsilon || a.t != b.t || a.x != b.x || a.y != b.y)
        throw std::invalid_argument{"merge: estimates refer to different targets"};
    EstimatorResult r = a;
    r.n_paths         = a.n_paths + b.n_paths;
    r.hits            = a.hits + b.hits;
    detail::finalize(r);
    return r;
}

/// Estimate over the path indices [first_path, first_path + count).
template < int N >
EstimatorResult estimate_density_range(double t, const Vec< N >& x, const Vec< N >& y, double eps, const SimConfig& cfg,
                                       std::uint64_t first_path, std::uint64_t count)
{
    cfg.validate();
    if (!(eps > 0.) || norm(y) + eps > 1. + 1e-12)
        throw std::invalid_argument{"estimate_density: target ball B(y, eps) must lie inside the closed unit ball"};
    if (!(t > 0.))
        throw std::invalid_argument{"estimate_density: t must be positive"};
    if (count < 1)
        throw std::invalid_argument{"estimate_density: need at least one path"};
    require_in_closed_ball(x, "estimate_density");

    const std::uint64_t hits = parallel_reduce(
        first_path, first_path + count, std::uint64_t{0},
        [&](std::uint64_t lo, std::uint64_t hi) {
            std::uint64_t h = 0;
            for (std::uint64_t p = lo; p < hi; ++p)
                h += indicator_hit< N >(x, y, eps, t, cfg, p) ? 1u : 0u;
            return h;
        },
        [](std::uint64_t a, std::uint64_t b) { return a + b; });

    EstimatorResult r;
    r.n_paths   = count;
    r.hits      = hits;
    r.epsilon   = eps;
    r.t         = t;
    r.dimension = N;
    r.x         = detail::to_std(x);
    r.y         = detail::to_std(y);
    detail::finalize(r);
    return r;
}

/// Estimate over paths 0 .. cfg.n_paths - 1.
template < int N >
EstimatorResult estimate_density(double t, const Vec< N >& x, const Vec< N >& y, double eps, const SimConfig& cfg)
{
    return estimate_density_range< N >(t, x, y, eps, cfg, 0, cfg.n_paths);
}

inline double z_score(const EstimatorResult& est, double reference)
{
    if (!(est.std_error > 0.))
        throw std::domain_error{"z_score: zero standard error"};
    return (est.mean - reference) / est.std_error;
}

/// z statistic of the difference of two independent estimates.
inline double z_difference(const EstimatorResult& a, const EstimatorResult& b)
{
    const double s = std::hypot(a.std_error, b.std_error);
    if (!(s > 0.))
        throw std::domain_error{"z_difference: zero standard error"};
    return (a.mean - b.mean) / s;
}

struct CirclePoint
{
    double          theta = 0.;
    EstimatorResult estimate;
};

/// Density of returning to B((x, 0), eps) from each start x + r e^{i theta}, theta on a uniform grid.
/// Angle i uses path indices [i n, (i + 1) n), so the estimates are independent.
inline std::vector< CirclePoint > circle_profile_mc(double t, double x, double r, int n_angles, double eps,
                                                    const SimConfig& cfg)
{
    if (!(x > 0. && x < 1.) || !(r > 0. && r < std::min(x, 1. - x)))
        throw std::invalid_argument{"circle_profile_mc: need 0 < x < 1 and 0 < r < min(x, 1 - x)"};
    if (n_angles < 1)
        throw std::invalid_argument{"circle_profile_mc: need at least one angle"};
    std::vector< CirclePoint > out;
    out.reserve(static_cast< std::size_t >(n_angles));
    const Vec2 target{x, 0.};
    for (int i = 0; i < n_angles; ++i)
    {
        const double theta = 2. * std::numbers::pi * i / n_angles;
        const Vec2   start{x + r * std::cos(theta), r * std::sin(theta)};
        out.push_back({theta, estimate_density_range< 2 >(t, start, target, eps, cfg,
                                                          static_cast< std::uint64_t >(i) * cfg.n_paths, cfg.n_paths)});
    }
    return out;
}

} // namespace ballkernel

#endif // BALLKERNEL_ESTIMATOR_HPP
