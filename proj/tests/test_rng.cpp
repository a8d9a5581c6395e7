#include "ballkernel/rng.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstdint>

using namespace ballkernel;

// Known-answer vectors published with the Random123 reference implementation.
TEST(Philox, KnownAnswers)
{
    using philox::Counter;
    EXPECT_EQ(philox::philox4x32_10(Counter{0, 0, 0, 0}, {0, 0}),
              (Counter{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u}));
    EXPECT_EQ(philox::philox4x32_10(Counter{~0u, ~0u, ~0u, ~0u}, {~0u, ~0u}),
              (Counter{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu}));
    EXPECT_EQ(philox::philox4x32_10(Counter{0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                                    {0xa4093822u, 0x299f31d0u}),
              (Counter{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u}));
}

TEST(ToUnitOpen, StaysInsideTheOpenInterval)
{
    EXPECT_GT(to_unit_open(0u, 0u), 0.);
    EXPECT_LT(to_unit_open(~0u, ~0u), 1.);
    EXPECT_NEAR(to_unit_open(0x80000000u, 0u), 0.5, 1e-15);
}

TEST(NormalStream, AnyDrawCanBeRegeneratedInIsolation)
{
    NormalStream sequential{42, 7};
    double       values[300];
    for (int i = 0; i < 300; ++i)
        values[i] = sequential.normal(static_cast< std::uint64_t >(i));
    // Reverse order, fresh streams: batching and caching must not change any value.
    for (int i = 299; i >= 0; i -= 37)
    {
        NormalStream fresh{42, 7};
        EXPECT_EQ(fresh.normal(static_cast< std::uint64_t >(i)), values[i]);
    }
    NormalStream back{42, 7};
    for (int i = 299; i >= 0; --i)
        ASSERT_EQ(back.normal(static_cast< std::uint64_t >(i)), values[i]);
}

TEST(NormalStream, IncrementsFollowTheStepCoordinateLayout)
{
    NormalStream s{3, 9}, flat{3, 9};
    const Vec3   g = s.increment< 3 >(5);
    for (int i = 0; i < 3; ++i)
        EXPECT_EQ(g[i], flat.normal(15u + static_cast< std::uint64_t >(i)));
}

TEST(NormalStream, SeedsAndPathsGiveDifferentStreams)
{
    NormalStream a{1, 0}, b{2, 0}, c{1, 1};
    EXPECT_NE(a.normal(0), b.normal(0));
    EXPECT_NE(a.normal(0), c.normal(0));
}

TEST(NormalStream, MomentsOfStandardNormal)
{
    // 4e5 draws: standard errors of the first four moments are 1.6e-3, 2.2e-3, 6.1e-3 and 1.6e-2.
    constexpr int n = 400000;
    double        s1 = 0., s2 = 0., s3 = 0., s4 = 0.;
    int           beyond3 = 0;
    for (std::uint64_t path = 0; path < 4; ++path)
    {
        NormalStream st{20240601, path};
        for (int i = 0; i < n / 4; ++i)
        {
            const double z = st.normal(static_cast< std::uint64_t >(i));
            s1 += z;
            s2 += z * z;
            s3 += z * z * z;
            s4 += z * z * z * z;
            beyond3 += std::fabs(z) > 3. ? 1 : 0;
        }
    }
    EXPECT_NEAR(s1 / n, 0., 4. * 1.6e-3);
    EXPECT_NEAR(s2 / n, 1., 4. * 2.2e-3);
    EXPECT_NEAR(s3 / n, 0., 4. * 6.1e-3);
    EXPECT_NEAR(s4 / n, 3., 4. * 1.6e-2);
    // P(|Z| > 3) = 2.6998e-3.
    EXPECT_NEAR(beyond3 / static_cast< double >(n), 2.6998e-3, 4. * std::sqrt(2.6998e-3 / n));
}

TEST(NormalStream, NeighbouringPathsAreUncorrelated)
{
    constexpr int n   = 100000;
    double        sxy = 0.;
    NormalStream  a{5, 100}, b{5, 101};
    for (int i = 0; i < n; ++i)
        sxy += a.normal(static_cast< std::uint64_t >(i)) * b.normal(static_cast< std::uint64_t >(i));
    EXPECT_NEAR(sxy / n, 0., 4. / std::sqrt(n));
}
