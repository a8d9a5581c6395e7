#ifndef BALLKERNEL_BESSEL_HPP
#define BALLKERNEL_BESSEL_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <vector>

namespace ballkernel
{

inline constexpr int    kMaxBesselOrder = 120;
inline constexpr double kMaxBesselArg   = 200.;

namespace detail
{
inline void check_bessel_range(int m, double x)
{
    if (m < 0 || m > kMaxBesselOrder)
        throw std::out_of_range{"bessel: order " + std::to_string(m) + " outside [0, " +
                                std::to_string(kMaxBesselOrder) + "]"};
    if (!(x >= 0.) || x > kMaxBesselArg)
        throw std::out_of_range{"bessel: argument outside [0, 200]"};
}

// Ascending series; used only where the terms cannot cancel badly (x <= 8, or x^2 <= m + 1).
inline double bessel_series(int m, double x)
{
    if (x == 0.)
        return m == 0 ? 1. : 0.;
    const double half = 0.5 * x;
    const double q    = -half * half;
    double       term = std::exp(m * std::log(half) - std::lgamma(m + 1.));
    double       sum  = term;
    for (int k = 1; k < 500; ++k)
    {
        term *= q / (static_cast< double >(k) * (m + k));
        sum += term;
        if (std::fabs(term) <= 1e-17 * std::fabs(sum) && k > half)
            break;
    }
    return sum;
}

inline bool use_series(int m, double x)
{
    return x <= 8. || x * x <= m + 1.;
}

// Miller backward recurrence from an even start index well above max(m, x). The unnormalised
// sequence is scaled with J0^2 + 2 sum J_k^2 = 1 (magnitude) and J0 + 2 sum J_2k = 1 (sign).
// Returns J_{m-1}, J_m, J_{m+1} for m >= 1, and J_0, J_0, J_1 for m = 0.
inline std::array< double, 3 > bessel_miller(int m, double x)
{
    const double big   = std::max(static_cast< double >(m + 1), x);
    int          start = static_cast< int >(big + 12. * std::cbrt(big)) + 20;
    start += start & 1;

    const double two_over_x = 2. / x;
    double       jp1 = 0., jk = 1e-30;
    double       lin = 0., sq = 0.;
    double       jm_minus = 0., jm = 0., jm_plus = 0.;
    for (int k = start; k >= 1; --k)
    {
        if (k == m + 1)
            jm_plus = jk;
        if (k == m)
            jm = jk;
        if (k == m - 1)
            jm_minus = jk;
        sq += 2. * jk * jk;
        if ((k & 1) == 0)
            lin += 2. * jk;
        const double jkm1 = k * two_over_x * jk - jp1;
        jp1               = jk;
        jk                = jkm1;
        if (std::fabs(jk) > 1e100)
        {
            constexpr double s = 1e-100;
            jk *= s;
            jp1 *= s;
            jm_minus *= s;
            jm *= s;
            jm_plus *= s;
            lin *= s;
            sq *= s * s;
        }
    }
    // jk now holds the unnormalised J_0.
    lin += jk;
    sq += jk * jk;
    const double scale = std::copysign(1. / std::sqrt(sq), lin);
    if (m == 0)
        return {jk * scale, jk * scale, jm_plus * scale};
    if (m == 1)
        jm_minus = jk;
    return {jm_minus * scale, jm * scale, jm_plus * scale};
}
} // namespace detail

/// Bessel function of the first kind J_m(x) for 0 <= m <= 120, 0 <= x <= 200.
inline double bessel_j(int m, double x)
{
    detail::check_bessel_range(m, x);
    if (detail::use_series(m, x))
        return detail::bessel_series(m, x);
    return detail::bessel_miller(m, x)[1];
}

/// J_m'(x) from J_m' = (J_{m-1} - J_{m+1}) / 2, with J_0' = -J_1.
inline double bessel_j_prime(int m, double x)
{
    detail::check_bessel_range(m, x);
    if (m == 0)
        return -(detail::use_series(1, x) ? detail::bessel_series(1, x) : detail::bessel_miller(1, x)[1]);
    if (detail::use_series(m, x) && detail::use_series(m - 1, x) && detail::use_series(m + 1, x))
        return 0.5 * (detail::bessel_series(m - 1, x) - detail::bessel_series(m + 1, x));
    const auto j = detail::bessel_miller(m, x);
    return 0.5 * (j[0] - j[2]);
}

/// Incremental scanner for the positive zeros of J_m': sign scan with step 0.1, then bisection.
class NeumannRootScanner
{
public:
    explicit NeumannRootScanner(int m) : m_{m}
    {
        detail::check_bessel_range(m, 0.);
        // J_m' keeps one sign on (0, m] (j'_{m,1} > m for m >= 1; J_0' = -J_1 < 0 below 3.83).
        x_ = m == 0 ? kStep : static_cast< double >(m);
        f_ = bessel_j_prime(m_, x_);
    }

    /// Next root, or throws std::runtime_error once the scan passes the argument ceiling.
    double next()
    {
        for (;;)
        {
            const double x1 = x_ + kStep;
            if (x1 > kMaxBesselArg)
                throw std::runtime_error{"neumann_roots: scan ceiling exceeded for order " + std::to_string(m_)};
            const double f1 = bessel_j_prime(m_, x1);
            const double x0 = x_, f0 = f_;
            x_ = x1;
            f_ = f1;
            if (f1 == 0.)
            {
                // Step past an exact zero so it is not reported twice.
                x_ = x1 + 1e-9;
                f_ = bessel_j_prime(m_, x_);
                return x1;
            }
            if ((f0 < 0.) != (f1 < 0.))
                return bisect(x0, f0, x1);
        }
    }

    /// Lower end of the interval not scanned yet.
    double position() const { return x_; }

private:
    static constexpr double kStep = 0.1;

    double bisect(double lo, double flo, double hi) const
    {
        for (int it = 0; it < 200; ++it)
        {
            const double mid = 0.5 * (lo + hi);
            if (mid <= lo || mid >= hi)
                break;
            const double fm = bessel_j_prime(m_, mid);
            if (fm == 0.)
                return mid;
            if ((fm < 0.) == (flo < 0.))
            {
                lo  = mid;
                flo = fm;
            }
            else
                hi = mid;
        }
        return std::fabs(bessel_j_prime(m_, lo)) <= std::fabs(bessel_j_prime(m_, hi)) ? lo : hi;
    }

    int    m_;
    double x_;
    double f_;
};

/// The first `count` positive zeros of J_m', ascending.
inline std::vector< double > neumann_roots(int m, int count)
{
    if (count < 1)
        throw std::invalid_argument{"neumann_roots: count must be positive"};
    NeumannRootScanner    scan{m};
    std::vector< double > roots;
    roots.reserve(static_cast< std::size_t >(count));
    while (static_cast< int >(roots.size()) < count)
        roots.push_back(scan.next());
    return roots;
}

} // namespace ballkernel

#endif // BALLKERNEL_BESSEL_HPP
