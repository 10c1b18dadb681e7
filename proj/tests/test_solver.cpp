#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "degrd/solver.hpp"

using namespace degrd;
using std::numbers::pi;

namespace {

SimConfig heat_config(int resolution, double dt, double t_end) {
    SimConfig c;
    c.resolution = resolution;
    c.catalyst.kind = CatalystKind::constant;
    c.catalyst.k0 = 0.0;
    c.catalyst.k_max = 0.0;
    c.a0 = {ProfileKind::cosine, 1.0, 0.3, 1};
    c.b0 = {ProfileKind::cosine, 1.0, -0.3, 1};
    c.dt = dt;
    c.t_end = t_end;
    c.snapshot_every = 0.01;
    c.keep_snapshots = false;
    return c;
}

SimConfig bump_config() {
    SimConfig c;
    c.resolution = 128;
    c.catalyst.kind = CatalystKind::bump;
    c.catalyst.k0 = 1.0;
    c.catalyst.k_max = 1.0;
    c.a0 = {ProfileKind::cosine, 1.3, 0.2, 1};
    c.b0 = {ProfileKind::cosine, 0.7, 0.1, 2};
    c.t_end = 2.0;
    return c;
}

}  // namespace

TEST_CASE("init_state normalizes mass and records the floor") {
    auto g = build_grid(Domain::unit_ball(1), 64);
    SimConfig c;
    c.resolution = 64;
    auto r = init_state(c, g);
    CHECK(r.B0 == doctest::Approx(1.0));
    CHECK(r.scale == doctest::Approx(1.0));

    c.a0 = {ProfileKind::cosine, 1.0, 0.3, 1};
    c.b0 = {ProfileKind::cosine, 1.0, -0.3, 1};
    r = init_state(c, g);
    CHECK(std::fabs(integrate(*g, r.state.a) + integrate(*g, r.state.b) - 2.0) < 1e-12);
    // Cell centers miss the endpoints where the cosine reaches -1.
    double cell_min = 1.0 - 0.3 * std::cos(pi * 0.5 / 64);
    CHECK(r.B0 == doctest::Approx(cell_min).epsilon(1e-12));
    CHECK(r.B0 == doctest::Approx(0.7).epsilon(1e-3));
    CHECK(r.warnings.empty());

    c.a0 = {ProfileKind::constant, 2.0};
    c.b0 = {ProfileKind::constant, 2.0};
    r = init_state(c, g);
    CHECK(r.scale == doctest::Approx(0.5));
    CHECK(r.state.a[5] == doctest::Approx(1.0));
    CHECK(r.state.b[17] == doctest::Approx(1.0));

    c.a0 = {ProfileKind::constant, 0.1};
    c.b0 = {ProfileKind::constant, 0.1};
    r = init_state(c, g);
    CHECK(r.warnings.size() == 1);

    c.a0 = {ProfileKind::cosine, 0.2, 0.5, 1};
    CHECK_THROWS_AS(init_state(c, g), std::invalid_argument);
}

TEST_CASE("disk cosine profile is a Neumann mode with zero mean") {
    auto g = build_grid(Domain::unit_ball(2), 64);
    ProfileSpec p{ProfileKind::cosine, 0.0, 1.0, 1};
    Field f(g);
    for (std::size_t i = 0; i < g->size(); ++i) f[i] = p.at(g->centers[i], 2, g->domain.radius);
    CHECK(std::fabs(integrate(*g, f)) < 2e-3);
}

TEST_CASE("equilibrium is a fixed point") {
    SimConfig c;
    c.resolution = 32;
    c.catalyst.kind = CatalystKind::bump;
    c.catalyst.k0 = 2.0;
    c.catalyst.k_max = 2.0;
    auto g = build_grid(Domain::unit_ball(1), 32);
    Stepper st(c, g, 0.01);
    StatePair s{Field(g, 1.0), Field(g, 1.0), 0.0};
    for (int i = 0; i < 10; ++i) s = st.step(s);
    for (std::size_t i = 0; i < g->size(); ++i) {
        CHECK(s.a[i] == 1.0);
        CHECK(s.b[i] == 1.0);
    }
    CHECK(st.last_energy_residual() == 0.0);
}

TEST_CASE("one step conserves mass to round-off") {
    auto c = bump_config();
    auto g = build_grid(Domain::unit_ball(1), c.resolution);
    auto init = init_state(c, g);
    Stepper st(c, g, 0.004);
    auto s = init.state;
    double m0 = integrate(*g, s.a) + integrate(*g, s.b);
    for (int i = 0; i < 50; ++i) {
        s = st.step(s);
        double m = integrate(*g, s.a) + integrate(*g, s.b);
        CHECK(std::fabs(m - m0) <= 1e-12 * m0);
    }
}

TEST_CASE("2-D step conserves mass") {
    auto c = bump_config();
    c.dim = 2;
    c.resolution = 16;
    c.a0 = {ProfileKind::gaussian, 1.0, 0.5, 1, 0.1, 0.1};
    c.b0 = {ProfileKind::constant, 1.0};
    auto g = build_grid(Domain::unit_ball(2), c.resolution);
    auto init = init_state(c, g);
    Stepper st(c, g, 0.005);
    auto s = init.state;
    for (int i = 0; i < 20; ++i) s = st.step(s);
    CHECK(std::fabs(integrate(*g, s.a) + integrate(*g, s.b) - 2.0) < 1e-12);
}

TEST_CASE("heat decay matches the analytic rate") {
    // l2_dist = 2 * 0.09 / 2 * exp(-2 pi^2 t), so its rate is 2 pi^2.
    auto out = run(heat_config(256, 1e-3, 0.3));
    REQUIRE(out.failure.empty());
    auto fit = fit_decay_rate(out.series, "l2_dist");
    CHECK(fit.rate / 2.0 == doctest::Approx(pi * pi).epsilon(0.02));
    CHECK(fit.r_squared > 0.999999);
    double expected0 = 0.09;
    CHECK(out.series.channel("l2_dist").values.front() == doctest::Approx(expected0).epsilon(1e-4));
}

TEST_CASE("heat rate error falls at second order") {
    double err[3];
    int res[3] = {32, 64, 128};
    for (int i = 0; i < 3; ++i) {
        auto c = heat_config(res[i], 0.25 / res[i], 0.2);
        auto out = run(c);
        REQUIRE(out.failure.empty());
        FitWindow w{0.0, 0.2};
        err[i] = std::fabs(fit_decay_rate(out.series, "l2_dist", w).rate / 2.0 - pi * pi);
    }
    CHECK(std::log2(err[0] / err[1]) > 1.9);
    CHECK(std::log2(err[1] / err[2]) > 1.9);
}

TEST_CASE("run records the invariants of a degenerate catalyst") {
    auto out = run(bump_config());
    REQUIRE(out.failure.empty());
    const auto& s = out.series;
    s.check();
    CHECK(s.times.back() == doctest::Approx(2.0));
    const auto& mass = s.channel("mass").values;
    const auto& dist = s.channel("l2_dist").values;
    const auto& l3 = s.channel("l3_sum").values;
    const auto& mn = s.channel("min_ab").values;
    const auto& shift = s.channel("mean_shift").values;
    for (std::size_t i = 0; i < s.size(); ++i) {
        CHECK(std::fabs(mass[i] - 2.0) < 1e-8);
        CHECK(std::fabs(shift[i]) < 1e-8);
        CHECK(mn[i] >= out.B0 - 1e-6);
        CHECK(l3[i] <= l3[0] + 1e-6);
        if (i > 0) CHECK(dist[i] <= dist[i - 1] + 1e-8);
    }
    CHECK(dist.back() < dist.front());
    CHECK(fit_decay_rate(s, "l2_dist").rate > 0);
    CHECK(out.snapshots.size() == s.size());
}

TEST_CASE("energy residual is second order in time") {
    auto c = bump_config();
    c.t_end = 0.2;
    c.snapshot_every = 0.1;
    double r[2];
    double dts[2] = {0.01, 0.005};
    for (int i = 0; i < 2; ++i) {
        c.dt = dts[i];
        auto out = run(c);
        REQUIRE(out.failure.empty());
        double worst = 0;
        for (double v : out.series.channel("energy_residual").values) worst = std::max(worst, v);
        r[i] = worst;
    }
    CHECK(std::log2(r[0] / r[1]) > 1.9);
}

TEST_CASE("dt is snapped to the snapshot stride") {
    auto c = bump_config();
    c.t_end = 0.1;
    c.snapshot_every = 0.05;
    c.dt = 0.03;
    auto out = run(c);
    CHECK(out.dt == doctest::Approx(0.025));
    CHECK(out.steps == 4);
}

TEST_CASE("a violated stability bound is flagged and positivity loss is reported") {
    auto c = bump_config();
    c.catalyst.k0 = 50.0;
    c.catalyst.k_max = 50.0;
    c.a0 = {ProfileKind::cosine, 1.0, 0.95, 1};
    c.b0 = {ProfileKind::cosine, 1.0, -0.95, 1};
    c.catalyst.r = 0.45;
    c.catalyst.x0 = 0.0;
    c.catalyst.smoothness = 0.02;
    c.dt = 0.2;
    c.snapshot_every = 0.2;
    c.t_end = 2.0;
    auto out = run(c);
    CHECK(out.stability_violated);
    CHECK(out.failure.find("positivity lost") != std::string::npos);
    CHECK(out.series.size() >= 1);
}

TEST_CASE("config validation") {
    SimConfig c;
    c.d1 = 0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = SimConfig{};
    c.dim = 3;
    CHECK_THROWS_WITH_AS(c.validate(), doctest::Contains("unsupported dimension"), std::invalid_argument);
    c = SimConfig{};
    c.catalyst.x0 = 0.45;
    c.catalyst.r = 0.1;
    CHECK_NOTHROW(c.validate());
    c.catalyst.x0 = 0.6;
    CHECK_THROWS(c.validate());
}
