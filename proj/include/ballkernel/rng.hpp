#ifndef BALLKERNEL_RNG_HPP
#define BALLKERNEL_RNG_HPP

#include "ballkernel/vec.hpp"

#include <array>
#include <cmath>
#include <cstdint>

namespace ballkernel
{

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
namespace philox
{
using Counter = std::array< std::uint32_t, 4 >;
using Key     = std::array< std::uint32_t, 2 >;

inline constexpr std::uint32_t kMul0  = 0xD2511F53u;
inline constexpr std::uint32_t kMul1  = 0xCD9E8D57u;
inline constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
inline constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

constexpr Counter philox4x32_10(const Counter& ctr, const Key& key)
{
    std::uint32_t c0 = ctr[0], c1 = ctr[1], c2 = ctr[2], c3 = ctr[3];
    std::uint32_t k0 = key[0], k1 = key[1];
#pragma GCC unroll 10
    for (int r = 0; r < 10; ++r)
    {
        const std::uint64_t p0 = std::uint64_t{kMul0} * c0;
        const std::uint64_t p1 = std::uint64_t{kMul1} * c2;
        c0                     = static_cast< std::uint32_t >(p1 >> 32) ^ c1 ^ k0;
        c1                     = static_cast< std::uint32_t >(p1);
        c2                     = static_cast< std::uint32_t >(p0 >> 32) ^ c3 ^ k1;
        c3                     = static_cast< std::uint32_t >(p0);
        k0 += kWeyl0;
        k1 += kWeyl1;
    }
    return {c0, c1, c2, c3};
}
} // namespace philox

/// Open-interval uniform in (0, 1) with 53 random bits.
constexpr double to_unit_open(std::uint32_t hi, std::uint32_t lo)
{
    // 52 bits: with 53 the top value (2^53 - 1/2) 2^-53 rounds up to 1.
    const std::uint64_t bits = ((std::uint64_t{hi} << 32) | lo) >> 12;
    return (static_cast< double >(bits) + 0.5) * 0x1.0p-52;
}

/// Standard normal draws addressed by (seed, path, step, coordinate).
///
/// Normals are numbered idx = step * N + coordinate and produced in pairs by the Marsaglia polar
/// method. Attempt a for pair j uses one Philox block with counter (j | a << 56, path) and key
/// seed; rejected attempts move on to a + 1. Any draw can be regenerated in isolation, so paths
/// are reproducible in any execution order. Pairs are generated a batch at a time and the last
/// batch is cached.
class NormalStream
{
public:
    static constexpr std::uint64_t kMaxPair   = (std::uint64_t{1} << 56) - 1;
    static constexpr int           kBatchPairs = 32;

    NormalStream(std::uint64_t seed, std::uint64_t path)
        : seed_{seed}, path_{path}, key_{static_cast< std::uint32_t >(seed), static_cast< std::uint32_t >(seed >> 32)}
    {
    }

    double normal(std::uint64_t idx)
    {
        const std::uint64_t batch = idx / (2 * kBatchPairs);
        if (batch != cached_batch_)
            fill(batch);
        return cache_[idx % (2 * kBatchPairs)];
    }

    template < int N >
    Vec< N > increment(std::uint64_t step)
    {
        Vec< N > g;
        const std::uint64_t base = step * static_cast< std::uint64_t >(N);
        for (int i = 0; i < N; ++i)
            g[i] = normal(base + static_cast< std::uint64_t >(i));
        return g;
    }

    std::uint64_t seed() const { return seed_; }
    std::uint64_t path() const { return path_; }

private:
    // Polar-method candidate (v1, v2, v1^2 + v2^2) from one Philox block.
    std::array< double, 3 > candidate(std::uint64_t pair, std::uint64_t attempt) const
    {
        const std::uint64_t   word = (pair & kMaxPair) | (attempt << 56);
        const philox::Counter ctr{static_cast< std::uint32_t >(word), static_cast< std::uint32_t >(word >> 32),
                                  static_cast< std::uint32_t >(path_), static_cast< std::uint32_t >(path_ >> 32)};
        const auto            out = philox::philox4x32_10(ctr, key_);
        const double          v1  = 2. * to_unit_open(out[0], out[1]) - 1.;
        const double          v2  = 2. * to_unit_open(out[2], out[3]) - 1.;
        return {v1, v2, v1 * v1 + v2 * v2};
    }

    void fill(std::uint64_t batch)
    {
        // First attempts for the whole batch, then the rejected pairs (about 21%) one by one.
        std::array< std::array< double, 3 >, kBatchPairs > cand;
        const std::uint64_t first = batch * kBatchPairs;
        for (int j = 0; j < kBatchPairs; ++j)
            cand[static_cast< std::size_t >(j)] = candidate(first + static_cast< std::uint64_t >(j), 0);
        for (int j = 0; j < kBatchPairs; ++j)
        {
            auto& c = cand[static_cast< std::size_t >(j)];
            // 256 consecutive rejections (probability 0.215^256) do not occur in practice.
            for (std::uint64_t attempt = 1; !(c[2] < 1. && c[2] > 0.); ++attempt)
                c = candidate(first + static_cast< std::uint64_t >(j), attempt);
        }
        for (int j = 0; j < kBatchPairs; ++j)
        {
            const auto&  c = cand[static_cast< std::size_t >(j)];
            const double f = std::sqrt(-2. * std::log(c[2]) / c[2]);
            cache_[static_cast< std::size_t >(2 * j)]     = c[0] * f;
            cache_[static_cast< std::size_t >(2 * j + 1)] = c[1] * f;
        }
        cached_batch_ = batch;
    }

    std::uint64_t                          seed_;
    std::uint64_t                          path_;
    philox::Key                            key_;
    std::uint64_t                          cached_batch_ = ~std::uint64_t{0};
    std::array< double, 2 * kBatchPairs > cache_{};
};

} // namespace ballkernel

#endif // BALLKERNEL_RNG_HPP
