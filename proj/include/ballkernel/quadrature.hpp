#ifndef BALLKERNEL_QUADRATURE_HPP
#define BALLKERNEL_QUADRATURE_HPP

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace ballkernel
{

struct QuadratureRule
{
    std::vector< double > nodes;
    std::vector< double > weights;
};

/// n-point Gauss-Legendre rule mapped to [a, b] (Newton iteration on P_n).
inline QuadratureRule gauss_legendre(int n, double a = -1., double b = 1.)
{
    if (n < 1)
        throw std::invalid_argument{"gauss_legendre: need at least one node"};
    QuadratureRule rule;
    rule.nodes.resize(static_cast< std::size_t >(n));
    rule.weights.resize(static_cast< std::size_t >(n));
    const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
    for (int i = 0; i < (n + 1) / 2; ++i)
    {
        double z  = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.;
        for (int it = 0; it < 100; ++it)
        {
            double p0 = 1., p1 = z;
            for (int k = 2; k <= n; ++k)
            {
                const double p2 = ((2. * k - 1.) * z * p1 - (k - 1.) * p0) / k;
                p0              = p1;
                p1              = p2;
            }
            if (n == 1)
                p0 = 1.;
            dp             = n * (z * p1 - p0) / (z * z - 1.);
            const double dz = p1 / dp;
            z -= dz;
            if (std::fabs(dz) < 1e-16)
                break;
        }
        const double w = 2. / ((1. - z * z) * dp * dp);
        const auto   lo = static_cast< std::size_t >(i);
        const auto   hi = static_cast< std::size_t >(n - 1 - i);
        rule.nodes[lo]   = mid - half * z;
        rule.nodes[hi]   = mid + half * z;
        rule.weights[lo] = half * w;
        rule.weights[hi] = half * w;
    }
    return rule;
}

/// Tensor rule on the unit disk: Gauss-Legendre in r (weights include the Jacobian r) times the
/// periodic trapezoid rule in theta.
struct PolarRule
{
    std::vector< double > radii;
    std::vector< double > radial_weights; ///< already multiplied by r
    std::vector< double > angles;
    double                angular_weight = 0.;
};

inline PolarRule polar_rule(int n_radial, int n_angular)
{
    if (n_angular < 1)
        throw std::invalid_argument{"polar_rule: need at least one angle"};
    const auto gl = gauss_legendre(n_radial, 0., 1.);
    PolarRule  rule;
    rule.radii = gl.nodes;
    rule.radial_weights.resize(gl.nodes.size());
    for (std::size_t i = 0; i < gl.nodes.size(); ++i)
        rule.radial_weights[i] = gl.weights[i] * gl.nodes[i];
    rule.angles.resize(static_cast< std::size_t >(n_angular));
    for (int j = 0; j < n_angular; ++j)
        rule.angles[static_cast< std::size_t >(j)] = 2. * std::numbers::pi * j / n_angular;
    rule.angular_weight = 2. * std::numbers::pi / n_angular;
    return rule;
}

} // namespace ballkernel

#endif // BALLKERNEL_QUADRATURE_HPP
