#include "ballkernel/coupling.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace ballkernel;
using T = CouplingScalar;

namespace
{

SimConfig config(double dt, std::uint64_t seed = 20240601)
{
    SimConfig c;
    c.dt   = dt;
    c.seed = seed;
    return c;
}

double to_d(const T& v)
{
    return static_cast< double >(v);
}

} // namespace

TEST(ReflectVector, Examples)
{
    const Vec2 e{1., 0.};
    const Vec2 w{0.3, -0.7};
    EXPECT_EQ(reflect_vector(w, e), (Vec2{-0.3, -0.7}));
    EXPECT_EQ(reflect_vector(Vec2{0., 2.}, e), (Vec2{0., 2.}));
    EXPECT_EQ(reflect_vector(e, e), (Vec2{-1., 0.}));
    EXPECT_THROW(reflect_vector(w, Vec2{1.1, 0.}), std::invalid_argument);

    const Vec3 n{0., 0.6, 0.8};
    const Vec3 r = reflect_vector(Vec3{0.1, 0.2, 0.3}, n);
    EXPECT_NEAR(norm(r), norm(Vec3{0.1, 0.2, 0.3}), 1e-15);
    EXPECT_NEAR(dot(r, n), -dot(Vec3{0.1, 0.2, 0.3}, n), 1e-15);
}

TEST(CoupledStep, NormalIncrementChangesOnlyTheGap)
{
    const auto s    = start_coupling< 2 >(Vec2{0.3, 0.}, Vec2{-0.1, 0.});
    const auto next = coupled_step(s, Vec2{1.5, 0.}, 1e-4, default_couple_threshold(1e-4));
    EXPECT_NEAR(to_d(norm(next.X.position - next.Y.position)), 0.4 + 2. * 0.01 * 1.5, 1e-15);
    EXPECT_EQ(next.mirror.normal, s.mirror.normal);
}

TEST(CoupledStep, TangentialIncrementTranslatesBoth)
{
    const auto s    = start_coupling< 2 >(Vec2{0.3, 0.}, Vec2{-0.1, 0.});
    const auto next = coupled_step(s, Vec2{0., -2.}, 1e-4, default_couple_threshold(1e-4));
    EXPECT_NEAR(to_d(norm((next.X.position - next.Y.position) - (s.X.position - s.Y.position))), 0., 1e-18);
    EXPECT_NEAR(to_d(next.X.position[1]), -0.02, 1e-18);
    EXPECT_NEAR(to_d(next.Y.position[1]), -0.02, 1e-18);
}

TEST(CoupledStep, CoupledProcessesStayTogether)
{
    auto s = start_coupling< 2 >(Vec2{0.3, 0.}, Vec2{0.3 - 1e-3, 0.});
    s      = coupled_step(s, Vec2{0., 0.}, 1e-4, default_couple_threshold(1e-4));
    ASSERT_TRUE(s.coupled);
    ASSERT_TRUE(s.tau.has_value());
    EXPECT_DOUBLE_EQ(*s.tau, 1e-4);
    NormalStream stream{1, 1};
    for (std::uint64_t k = 0; k < 2000; ++k)
    {
        s = coupled_step(s, stream.increment< 2 >(k), 1e-4, default_couple_threshold(1e-4));
        ASSERT_EQ(s.X.position, s.Y.position);
    }
    EXPECT_THROW(coupling_diag(s), std::logic_error);
}

TEST(CoupledStep, CrossingGapCouplesEvenAboveThreshold)
{
    // A large normal increment carries X past Y: the gap flips against the old normal.
    const auto s    = start_coupling< 2 >(Vec2{0.01, 0.}, Vec2{-0.01, 0.});
    const auto next = coupled_step(s, Vec2{-3., 0.}, 1e-4, 1e-6);
    EXPECT_TRUE(next.coupled);
}

TEST(CouplingDiag, OppositeStartGivesVerticalMirror)
{
    const double x = 0.5, r = 0.1;
    const auto   s = start_coupling< 2 >(Vec2{x + r, 0.}, Vec2{x - r, 0.});
    const auto   d = coupling_diag(s);
    ASSERT_TRUE(d.u.has_value());
    EXPECT_NEAR(to_d((*d.u)[0]), 1. / x, 1e-15);
    EXPECT_NEAR(to_d((*d.u)[1]), 0., 1e-15);
    ASSERT_TRUE(d.chord.has_value());
    EXPECT_NEAR(d.chord->a1, 0.5, 1e-15);
}

TEST(CouplingDiag, EqualNormsPutTheOriginOnTheMirror)
{
    const auto s = start_coupling< 2 >(Vec2{0.6, 0.}, Vec2{-0.6, 0.});
    EXPECT_TRUE(s.tau1.has_value());
    const auto d = coupling_diag(s);
    EXPECT_TRUE(d.degenerate_inner);
    EXPECT_FALSE(d.u.has_value());
    EXPECT_NEAR(to_d(d.inner), 0., 1e-15);
}

TEST(CouplingDiag, InnerProductIdentityOnRandomStates)
{
    std::mt19937_64                          gen{3};
    std::uniform_real_distribution< double > u{-0.55, 0.55}; // the cube stays inside the ball
    for (int i = 0; i < 2000; ++i)
    {
        const Vec3 x{u(gen), u(gen), u(gen)}, y{u(gen), u(gen), u(gen)};
        const auto d = coupling_diag(start_coupling< 3 >(x, y));
        ASSERT_LE(to_d(fabs(d.inner - d.norm_sq_diff)), 1e-30);
        if (d.u)
        {
            // The mirror is {z : u . z = 1}: the anchor lies on it.
            const auto s = start_coupling< 3 >(x, y);
            ASSERT_NEAR(to_d(dot(*d.u, s.mirror.anchor)), 1., 1e-20 * std::max(1., to_d(norm(*d.u))));
        }
    }
}

TEST(RunCoupling, ReproducibleFromSeedAndPath)
{
    const auto        cfg = config(1e-4, 5);
    const Target< 2 > target{{0.5, 0.}, 0.05};
    const auto        a = run_coupling< 2 >(Vec2{0.7, 0.}, Vec2{0.5, 0.2}, 0.2, cfg, 12, target);
    const auto        b = run_coupling< 2 >(Vec2{0.7, 0.}, Vec2{0.5, 0.2}, 0.2, cfg, 12, target);
    EXPECT_EQ(a.x_end, b.x_end);
    EXPECT_EQ(a.y_end, b.y_end);
    EXPECT_EQ(a.tau, b.tau);
    EXPECT_EQ(a.qv_all, b.qv_all);
}

TEST(RunCoupling, RejectsTargetsOutsideTheBall)
{
    EXPECT_THROW(run_coupling< 2 >(Vec2{0.7, 0.}, Vec2{0.5, 0.2}, 1., config(1e-4), 0, Target< 2 >{{0.98, 0.}, 0.05}),
                 std::invalid_argument);
    EXPECT_THROW(run_coupling< 2 >(Vec2{0.7, 0.}, Vec2{0.5, 0.2}, 0., config(1e-4), 0, Target< 2 >{{0.5, 0.}, 0.05}),
                 std::invalid_argument);
}

TEST(RunCoupling, PlanarPathwiseInvariants)
{
    const auto        cfg = config(1e-4, 77);
    const Target< 2 > target{{0.5, 0.}, 0.05};
    const double      allowance = 10. * std::sqrt(cfg.dt);
    double            qv = 0., time = 0.;
    for (std::uint64_t p = 0; p < 60; ++p)
    {
        const auto rec = run_coupling< 2 >(Vec2{0.7, 0.}, Vec2{0.5, 0.2}, 0.5, cfg, p, target);
        ASSERT_EQ(rec.chord_violation_steps, 0u) << "path " << p;
        ASSERT_LE(rec.a1_max_increase, allowance);
        ASSERT_LE(rec.b1_max_increase, allowance);
        ASSERT_LE(rec.a1_positive_total + rec.b1_positive_total, 100. * std::sqrt(cfg.dt));
        ASSERT_EQ(rec.domination_violations, 0u);
        ASSERT_EQ(rec.probe_violations, 0u);
        ASSERT_LE(rec.max_du, 1e-10);
        ASSERT_LE(rec.max_inner_residual, 1e-12);
        ASSERT_LE(rec.max_symmetry_residual, 1e-10);
        ASSERT_LE(rec.max_post_tau1_drift, allowance);
        if (rec.tau && rec.tau1)
        {
            ASSERT_LE(*rec.tau1, *rec.tau);
        }
        if (rec.tau)
        {
            ASSERT_EQ(rec.x_end, rec.y_end);
        }
        qv += rec.qv_interior_trace();
        time += rec.interior_time;
    }
    // Gap increments are 2 (e . g) e sqrt(dt): quadratic variation 4 per unit of interior time.
    EXPECT_NEAR(qv / (4. * time), 1., 0.03);
}

TEST(RunCoupling, SpatialPathwiseInvariants)
{
    const auto        cfg = config(1e-4, 78);
    const Target< 3 > target{{0.5, 0., 0.}, 0.05};
    for (std::uint64_t p = 0; p < 40; ++p)
    {
        const auto rec = run_coupling< 3 >(Vec3{0.7, 0., 0.}, Vec3{0.5, 0.2, 0.}, 0.5, cfg, p, target);
        ASSERT_EQ(rec.domination_violations, 0u);
        ASSERT_EQ(rec.probe_violations, 0u);
        ASSERT_LE(rec.max_du, 1e-10);
        ASSERT_LE(rec.max_inner_residual, 1e-12);
        ASSERT_LE(rec.max_symmetry_residual, 1e-10);
    }
}

TEST(RunCoupling, InteriorOnlyPathKeepsTheInitialMirror)
{
    // Tiny horizon from the centre: no boundary contact, so Y is the exact mirror image of X.
    const auto rec = run_coupling< 2 >(Vec2{0.1, 0.}, Vec2{-0.1, 0.1}, 0.01, config(1e-4, 3), 0,
                                       Target< 2 >{{0., 0.}, 0.05});
    EXPECT_LE(rec.max_symmetry_residual, 1e-25);
    EXPECT_LE(rec.max_du, 1e-20);
    EXPECT_NEAR(rec.pre_tau_time, rec.interior_time, 1e-12);
}

TEST(RunCoupling1d, MidpointIdentityAndOrdering)
{
    const auto cfg = config(1e-4, 20240601);
    for (std::uint64_t p = 0; p < 100; ++p)
    {
        const auto rec = run_coupling_1d(0.5, 0.25, 1., cfg, p);
        ASSERT_LE(rec.max_residual, 1e-9);
        ASSERT_LE(rec.max_midpoint_increase, 1e-12);
        ASSERT_EQ(rec.ordering_violations, 0u);
    }
}

TEST(RunCoupling1d, TraceMatchesIndependentReplay)
{
    // Replay in double: X moves by +sqrt(dt) g, Y by -sqrt(dt) g, both clipped to [-1, 1].
    const auto cfg = config(1e-4, 8);
    const auto rec = run_coupling_1d(0.5, 0.25, 0.3, cfg, 2, true);
    ASSERT_EQ(rec.midpoint_trace.size(), 3001u);
    NormalStream stream{cfg.seed, 2};
    double       x = 0.25, y = 0.75, ly = 0.;
    const double sdt = std::sqrt(cfg.dt);
    for (std::size_t k = 0; k < 3000; ++k)
    {
        const double g = stream.normal(k);
        x              = std::clamp(x + sdt * g, -1., 1.);
        double yc      = y - sdt * g;
        if (std::fabs(yc) > 1.)
        {
            ly += std::fabs(yc) - 1.;
            yc = std::copysign(1., yc);
        }
        y = yc;
        if (std::fabs(x - y) <= default_couple_threshold(cfg.dt) || x >= y)
        {
            ASSERT_TRUE(rec.tau.has_value());
            EXPECT_NEAR(*rec.tau, (k + 1) * cfg.dt, 1e-12);
            return;
        }
        ASSERT_NEAR(rec.midpoint_trace[k + 1], 0.5 * (x + y), 1e-12) << "step " << k;
        ASSERT_NEAR(rec.local_time_y_trace[k + 1], ly, 1e-12);
    }
}

TEST(RunCoupling1d, SmallGapCouplesBeforeTimeFive)
{
    const auto cfg     = config(1e-4, 20240601);
    int        coupled = 0;
    for (std::uint64_t p = 0; p < 1000; ++p)
    {
        const auto rec = run_coupling_1d(0.5, 0.1, 5., cfg, p);
        coupled += rec.tau && *rec.tau <= 5. ? 1 : 0;
    }
    EXPECT_GT(coupled, 990);
}

TEST(RunCoupling1d, RejectsInvalidStarts)
{
    EXPECT_THROW(run_coupling_1d(0.5, 0.6, 1., config(1e-4), 0), std::invalid_argument);
    EXPECT_THROW(run_coupling_1d(1.2, 0.1, 1., config(1e-4), 0), std::invalid_argument);
    EXPECT_THROW(run_coupling_1d(0.5, 0.1, -1., config(1e-4), 0), std::invalid_argument);
}
