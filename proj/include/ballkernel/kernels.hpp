#ifndef BALLKERNEL_KERNELS_HPP
#define BALLKERNEL_KERNELS_HPP

#include "ballkernel/bessel.hpp"
#include "ballkernel/quadrature.hpp"
#include "ballkernel/vec.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

// Heat kernels of reflecting Brownian motion (generator Laplacian / 2) in the interval (-1, 1)
// and the unit disk. Eigenvalues are k^2 for the Laplacian; the decay rate is k^2 / 2.

namespace ballkernel
{

/// Neumann eigenmode J_m(k r) (cos m theta, sin m theta) of the unit disk, J_m'(k) = 0.
/// For m >= 1 one record stands for the cosine and sine pair, which share k and norm_const.
struct NeumannMode
{
    int    m          = 0;
    double k          = 0.;
    double lambda     = 0.; ///< k^2
    double norm_const = 0.; ///< makes each angular factor's eigenfunction unit in L^2(disk)
    double quad_norm  = 0.; ///< squared L^2 norm after normalisation, by quadrature
};

struct KernelSeries
{
    std::vector< NeumannMode > modes; ///< ascending lambda
    double                     t_min     = 0.;
    double                     tol       = 0.;
    double                     tail_bound = 0.; ///< estimated sup-norm of the dropped modes at t_min
};

namespace detail
{
// sup_r |J_m(r)|^2: 1 for m = 0, 1/2 for m >= 1.
inline double bessel_sup_sq(int m)
{
    return m == 0 ? 1. : 0.5;
}

inline double closed_form_norm_const(int m, double k)
{
    if (m == 0)
        return 1. / std::sqrt(std::numbers::pi * std::pow(bessel_j(0, k), 2));
    const double jm = bessel_j(m, k);
    return std::sqrt(2. / std::numbers::pi) / (std::fabs(jm) * std::sqrt(1. - double(m) * m / (k * k)));
}

// Dropped-mode mass beyond the enumerated window, from a generous mode count (k + 2 modes per
// unit of k) and normalised-sup bound (2 k^{4/3}).
inline double remainder_estimate(double k_from, double t)
{
    double sum = 0.;
    for (double k = std::floor(k_from); k < 1e4; k += 1.)
    {
        const double term = (k + 2.) * 2. * std::pow(k, 4. / 3.) * std::exp(-k * k * t / 2.);
        sum += term;
        if (term < 1e-300 || (k > k_from + 5. && term < 1e-6 * sum))
            break;
    }
    return sum;
}
} // namespace detail

/// Truncated Neumann eigenfunction series of the disk kernel, certified for t >= t_min.
///
/// Every mode with exp(-lambda t_min / 2) >= tol is kept; further modes (by ascending lambda)
/// are added until the tail estimate is at most tol as well.
inline KernelSeries build_disk_kernel(double t_min, double tol = 1e-10)
{
    if (!(t_min >= 0.01))
        throw std::invalid_argument{"build_disk_kernel: t_min must be at least 0.01"};
    if (!(tol > 0.) || tol >= 1.)
        throw std::invalid_argument{"build_disk_kernel: tol must lie in (0, 1)"};

    double k_enum = std::sqrt(2. * (std::log(1. / tol) + 25.) / t_min);
    // At long times the crude remainder starting at floor(k_enum) can exceed tol; widen the window.
    while (detail::remainder_estimate(k_enum, t_min) > tol / 2. && k_enum < kMaxBesselOrder)
        k_enum += 1.;
    if (k_enum + 1. > kMaxBesselArg || k_enum > kMaxBesselOrder)
        throw std::invalid_argument{"build_disk_kernel: t_min too small for the supported Bessel order/argument range"};

    std::vector< NeumannMode > all;
    for (int m = 0; m < k_enum; ++m)
    {
        NeumannRootScanner scan{m};
        for (;;)
        {
            const double k = scan.next();
            if (k > k_enum)
                break;
            all.push_back({m, k, k * k, detail::closed_form_norm_const(m, k), 0.});
        }
    }
    std::sort(all.begin(), all.end(), [](const NeumannMode& a, const NeumannMode& b) { return a.lambda < b.lambda; });

    // tail[i] = bound on the contribution of modes i, i+1, ... at t_min.
    const double          rest = detail::remainder_estimate(k_enum, t_min);
    std::vector< double > tail(all.size() + 1, rest);
    for (std::size_t i = all.size(); i-- > 0;)
    {
        const auto& md = all[i];
        tail[i] = tail[i + 1] + std::exp(-md.lambda * t_min / 2.) * md.norm_const * md.norm_const * detail::bessel_sup_sq(md.m);
    }
    std::size_t keep = 0;
    while (keep < all.size() && (std::exp(-all[keep].lambda * t_min / 2.) >= tol || tail[keep] > tol))
        ++keep;
    if (tail[keep] > tol)
        throw std::runtime_error{"build_disk_kernel: could not certify the truncation tail"};

    KernelSeries ks;
    ks.t_min      = t_min;
    ks.tol        = tol;
    ks.tail_bound = tail[keep];
    ks.modes.assign(all.begin(), all.begin() + static_cast< std::ptrdiff_t >(keep));

    // Cross-check the closed-form normalisation: c^2 * angular integral * int_0^1 J_m(kr)^2 r dr = 1.
    const auto gl = gauss_legendre(std::max(64, static_cast< int >(2. * k_enum) + 40), 0., 1.);
    for (auto& md : ks.modes)
    {
        double radial = 0.;
        for (std::size_t i = 0; i < gl.nodes.size(); ++i)
        {
            const double j = bessel_j(md.m, md.k * gl.nodes[i]);
            radial += gl.weights[i] * gl.nodes[i] * j * j;
        }
        const double angular = md.m == 0 ? 2. * std::numbers::pi : std::numbers::pi;
        md.quad_norm          = md.norm_const * md.norm_const * angular * radial;
        if (std::fabs(md.quad_norm - 1.) > 1e-8)
            throw std::runtime_error{"build_disk_kernel: normalisation check failed for m = " + std::to_string(md.m)};
    }
    return ks;
}

/// J_m(k r) for every mode of the series, the radial half of each eigenfunction product.
inline std::vector< double > radial_factors(const KernelSeries& ks, double r)
{
    std::vector< double > f(ks.modes.size());
    for (std::size_t i = 0; i < ks.modes.size(); ++i)
        f[i] = ks.modes[i].m == 0 || r > 0. ? bessel_j(ks.modes[i].m, ks.modes[i].k * r) : 0.;
    return f;
}

inline void require_kernel_time(const KernelSeries& ks, double t)
{
    if (!(t >= ks.t_min))
        throw std::domain_error{"disk kernel: t = " + std::to_string(t) + " below certified t_min = " +
                                std::to_string(ks.t_min)};
}

/// Kernel value from precomputed radial factors and polar angles of the two points.
inline double disk_kernel_from_factors(const KernelSeries& ks, double t, const std::vector< double >& fx, double theta_x,
                                       const std::vector< double >& fy, double theta_y)
{
    require_kernel_time(ks, t);
    const double dtheta = theta_x - theta_y;
    double       sum    = 0.;
    // Smallest terms first.
    for (std::size_t i = ks.modes.size(); i-- > 0;)
    {
        const auto& md = ks.modes[i];
        const double prod = fx[i] * fy[i];
        if (prod == 0.)
            continue;
        const double ang = md.m == 0 ? 1. : std::cos(md.m * dtheta);
        sum += std::exp(-md.lambda * t / 2.) * md.norm_const * md.norm_const * prod * ang;
    }
    return sum + 1. / std::numbers::pi;
}

inline void require_in_disk(const Vec2& p, const char* what)
{
    if (!is_finite(p) || norm(p) > 1. + 1e-12)
        throw std::invalid_argument{std::string{what} + ": point outside the closed unit disk"};
}

/// Transition density p(t, x, y) of reflecting Brownian motion in the unit disk.
inline double disk_kernel_eval(const KernelSeries& ks, double t, const Vec2& x, const Vec2& y)
{
    require_kernel_time(ks, t);
    require_in_disk(x, "disk_kernel_eval");
    require_in_disk(y, "disk_kernel_eval");
    const double rx = std::min(norm(x), 1.), ry = std::min(norm(y), 1.);
    const auto   fx = radial_factors(ks, rx);
    const auto   fy = rx == ry ? fx : radial_factors(ks, ry);
    return disk_kernel_from_factors(ks, t, fx, std::atan2(x[1], x[0]), fy, std::atan2(y[1], y[0]));
}

/// Cosine eigenseries of the interval kernel, truncated once the remaining exponentials sum below tol.
inline double interval_kernel_spectral(double t, double x, double y, double tol = 1e-14)
{
    const double a   = std::numbers::pi * std::numbers::pi * t / 8.;
    double       sum = 0.;
    for (int j = 1;; ++j)
    {
        const double w = std::exp(-a * j * j);
        sum += w * std::cos(j * std::numbers::pi * (x + 1.) / 2.) * std::cos(j * std::numbers::pi * (y + 1.) / 2.);
        // sum_{i > j} e^{-a i^2} <= e^{-a (j+1)^2} / (1 - e^{-a (2j+3)})
        const double next = std::exp(-a * (j + 1.) * (j + 1.)) / (1. - std::exp(-a * (2. * j + 3.)));
        if (next <= tol || j > 100000)
            break;
    }
    return 0.5 + sum;
}

/// Method of images: Gaussians of variance t centred at y + 4k and 2 - y + 4k, k in Z.
inline double interval_kernel_images(double t, double x, double y, double tol = 1e-14)
{
    const double norm_c = 1. / std::sqrt(2. * std::numbers::pi * t);
    auto         g      = [&](double z) { return norm_c * std::exp(-z * z / (2. * t)); };
    double       sum    = g(x - y) + g(x - (2. - y));
    for (int k = 1;; ++k)
    {
        const double shell = g(x - y - 4. * k) + g(x - y + 4. * k) + g(x - (2. - y) - 4. * k) + g(x - (2. - y) + 4. * k);
        sum += shell;
        // Beyond shell k every centre is at distance >= 4k - 4 from x, and the shells decay geometrically.
        const double d = 4. * k - 2.;
        if (k > 1 && 4. * norm_c * std::exp(-d * d / (2. * t)) <= tol)
            break;
        if (k > 100000)
            break;
    }
    return sum;
}

/// Transition density of reflecting Brownian motion on (-1, 1): eigenseries for t >= 0.1, images below.
inline double interval_kernel_eval(double t, double x, double y, double tol = 1e-14)
{
    if (!(t > 0.))
        throw std::invalid_argument{"interval_kernel_eval: t must be positive"};
    if (!(x >= -1. && x <= 1. && y >= -1. && y <= 1.))
        throw std::invalid_argument{"interval_kernel_eval: points must lie in [-1, 1]"};
    return t >= 0.1 ? interval_kernel_spectral(t, x, y, tol) : interval_kernel_images(t, x, y, tol);
}

struct NeumannEigenpair
{
    int    order      = 0;
    double root       = 0.;
    double eigenvalue = 0.;
};

/// Smallest positive Neumann eigenvalue of the unit disk over all angular orders.
inline NeumannEigenpair minimal_neumann_eigenpair()
{
    static const NeumannEigenpair cached = [] {
        NeumannEigenpair best{-1, 0., 0.};
        for (int m = 0; m <= kMaxBesselOrder; ++m)
        {
            // j'_{m,1} > m, so no higher order can beat the current best.
            if (best.order >= 0 && m >= best.root)
                break;
            const double k = neumann_roots(m, 1).front();
            if (best.order < 0 || k < best.root)
                best = {m, k, k * k};
        }
        return best;
    }();
    return cached;
}

/// Radial profile J_m(k r) of the second Neumann eigenfunction(s) of the disk.
inline double second_eigenfunction_radial(double r)
{
    if (!(r >= 0. && r <= 1.))
        throw std::invalid_argument{"second_eigenfunction_radial: r must lie in [0, 1]"};
    const auto ep = minimal_neumann_eigenpair();
    return bessel_j(ep.order, ep.root * r);
}

} // namespace ballkernel

#endif // BALLKERNEL_KERNELS_HPP
