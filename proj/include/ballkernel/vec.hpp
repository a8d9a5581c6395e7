#ifndef BALLKERNEL_VEC_HPP
#define BALLKERNEL_VEC_HPP

#include <array>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <ostream>

namespace ballkernel
{

/// Point or displacement in R^N, N in {1, 2, 3}. The unit ball has radius 1.
/// T is double everywhere except the coupling, which carries extended precision.
template < int N, class T = double >
struct Vec
{
    static_assert(N >= 1 && N <= 3, "only dimensions 1, 2 and 3 are supported");
    static constexpr int dim = N;
    using scalar             = T;

    std::array< T, N > c{};

    constexpr Vec() = default;
    constexpr Vec(std::initializer_list< T > init)
    {
        std::size_t i = 0;
        for (T v : init)
        {
            if (i < c.size())
                c[i] = v;
            ++i;
        }
    }
    explicit constexpr Vec(const std::array< T, N >& a) : c(a) {}
    template < class U >
    explicit constexpr Vec(const Vec< N, U >& o)
    {
        for (int i = 0; i < N; ++i)
            (*this)[i] = static_cast< T >(o[i]);
    }

    constexpr T&       operator[](int i) { return c[static_cast< std::size_t >(i)]; }
    constexpr const T& operator[](int i) const { return c[static_cast< std::size_t >(i)]; }

    constexpr Vec& operator+=(const Vec& o)
    {
        for (int i = 0; i < N; ++i)
            (*this)[i] += o[i];
        return *this;
    }
    constexpr Vec& operator-=(const Vec& o)
    {
        for (int i = 0; i < N; ++i)
            (*this)[i] -= o[i];
        return *this;
    }
    constexpr Vec& operator*=(T s)
    {
        for (auto& v : c)
            v *= s;
        return *this;
    }

    friend constexpr Vec operator+(Vec a, const Vec& b) { return a += b; }
    friend constexpr Vec operator-(Vec a, const Vec& b) { return a -= b; }
    friend constexpr Vec operator*(Vec a, T s) { return a *= s; }
    friend constexpr Vec operator*(T s, Vec a) { return a *= s; }
    friend constexpr Vec operator/(Vec a, T s)
    {
        for (auto& v : a.c)
            v /= s;
        return a;
    }
    friend constexpr Vec operator-(Vec a)
    {
        for (auto& v : a.c)
            v = -v;
        return a;
    }
    friend constexpr bool operator==(const Vec&, const Vec&) = default;

    friend std::ostream& operator<<(std::ostream& os, const Vec& v)
    {
        os << '(';
        for (int i = 0; i < N; ++i)
            os << (i ? ", " : "") << v[i];
        return os << ')';
    }
};

template < int N, class T >
constexpr T dot(const Vec< N, T >& a, const Vec< N, T >& b)
{
    T s = 0;
    for (int i = 0; i < N; ++i)
        s += a[i] * b[i];
    return s;
}

template < int N, class T >
constexpr T norm_sq(const Vec< N, T >& a)
{
    return dot(a, a);
}

template < int N, class T >
inline T norm(const Vec< N, T >& a)
{
    // Unqualified calls so extended-precision scalars find their overloads by ADL.
    using std::fabs;
    using std::sqrt;
    if constexpr (N == 1)
        return fabs(a[0]);
    else
        return sqrt(norm_sq(a));
}

template < int N, class T >
inline bool is_finite(const Vec< N, T >& a)
{
    using std::isfinite;
    for (const T& v : a.c)
        if (!isfinite(v))
            return false;
    return true;
}

using Vec1 = Vec< 1 >;
using Vec2 = Vec< 2 >;
using Vec3 = Vec< 3 >;

} // namespace ballkernel

#endif // BALLKERNEL_VEC_HPP
