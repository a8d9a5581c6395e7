#ifndef BALLKERNEL_GEOMETRY_HPP
#define BALLKERNEL_GEOMETRY_HPP

#include "ballkernel/tolerances.hpp"
#include "ballkernel/vec.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

namespace ballkernel
{

/// Thrown when a mirror is requested for two (numerically) coincident points.
class DegeneratePairError : public std::domain_error
{
public:
    using std::domain_error::domain_error;
};

/// Inward unit normal of the unit sphere at x, i.e. -x.
template < int N, class T >
Vec< N, T > inward_normal(const Vec< N, T >& x)
{
    using std::fabs;
    if (!is_finite(x) || fabs(norm(x) - T(1)) > tol::unit_norm)
        throw std::invalid_argument{"inward_normal: point is not on the unit sphere"};
    return -x;
}

template < int N, class T = double >
struct Projection
{
    Vec< N, T > point;
    T           push = 0; ///< distance travelled back to the sphere; zero for interior points
};

/// Radial projection onto the closed ball of the given radius.
/// The returned point never has norm above the radius, even after rounding.
template < int N, class T >
Projection< N, T > project_to_ball(const Vec< N, T >& x, T radius = 1)
{
    if (!is_finite(x))
        throw std::invalid_argument{"project_to_ball: non-finite point"};
    const T r2 = norm_sq(x);
    if (r2 <= radius * radius)
        return {x, T(0)};
    using std::sqrt;
    const T     r = sqrt(r2);
    Vec< N, T > p = x * (radius / r);
    while (norm_sq(p) > radius * radius)
        p *= T(1) - std::numeric_limits< T >::epsilon();
    return {p, r - radius};
}

/// Hyperplane of symmetry between two points: {z : (z - anchor) . normal = 0}.
template < int N, class T = double >
struct Mirror
{
    Vec< N, T > normal; ///< unit, pointing from the Y side to the X side
    Vec< N, T > anchor; ///< midpoint of the generating pair
};

template < int N, class T >
Mirror< N, T > mirror_from_pair(const Vec< N, T >& x, const Vec< N, T >& y)
{
    const Vec< N, T > diff = x - y;
    const T           len  = norm(diff);
    if (!(len >= tol::degenerate_pair))
        throw DegeneratePairError{"mirror_from_pair: points coincide"};
    return {diff / len, (x + y) * T(0.5)};
}

/// Positive on the side of the point that generated the mirror normal, zero on the mirror.
template < int N, class T >
T signed_distance(const Mirror< N, T >& m, const Vec< N, T >& z)
{
    return dot(z - m.anchor, m.normal);
}

template < int N, class T >
Vec< N, T > reflect_point(const Mirror< N, T >& m, const Vec< N, T >& z)
{
    return z - m.normal * (T(2) * signed_distance(m, z));
}

struct ChordEndpoints
{
    Vec2   A; ///< endpoint with the larger second coordinate
    Vec2   B;
    double a1 = 0.;
    double b1 = 0.;
};

/// Intersection of a planar mirror line with the unit circle; empty when the line misses the open disk.
inline std::optional< ChordEndpoints > chord_endpoints(const Mirror< 2 >& m)
{
    // The foot of the perpendicular from the origin is d * normal; the half chord follows from Pythagoras.
    const double d    = dot(m.anchor, m.normal);
    const double disc = 1. - d * d;
    if (!(disc > 0.))
        return std::nullopt;
    const double h       = std::sqrt(disc);
    const Vec2   tangent = {-m.normal[1], m.normal[0]};
    const Vec2   foot    = m.normal * d;
    Vec2         p       = foot + tangent * h;
    Vec2         q       = foot - tangent * h;
    if (q[1] > p[1] || (q[1] == p[1] && q[0] > p[0]))
        std::swap(p, q);
    return ChordEndpoints{p, q, p[0], q[0]};
}

/// Volume of a ball of radius eps in R^n, n in {1, 2, 3}.
inline double ball_volume(int n, double eps)
{
    if (!(eps > 0.))
        throw std::invalid_argument{"ball_volume: radius must be positive"};
    switch (n)
    {
    case 1:
        return 2. * eps;
    case 2:
        return std::numbers::pi * eps * eps;
    case 3:
        return 4. / 3. * std::numbers::pi * eps * eps * eps;
    default:
        throw std::invalid_argument{"ball_volume: unsupported dimension " + std::to_string(n)};
    }
}

} // namespace ballkernel

#endif // BALLKERNEL_GEOMETRY_HPP
