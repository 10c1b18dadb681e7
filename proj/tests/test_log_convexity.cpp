#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "degrd/log_convexity.hpp"

using namespace degrd;
using std::numbers::pi;

namespace {

SimConfig bump_config(int resolution, double t_end) {
    SimConfig c;
    c.resolution = resolution;
    c.catalyst.kind = CatalystKind::bump;
    c.catalyst.k0 = 1.0;
    c.catalyst.k_max = 1.0;
    c.catalyst.x0 = 0.25;
    c.catalyst.r = 0.1;
    c.catalyst.smoothness = 0.05;
    c.a0 = {ProfileKind::cosine, 1.3, 0.2, 1};
    c.b0 = {ProfileKind::cosine, 0.7, 0.1, 2};
    c.t_end = t_end;
    c.snapshot_every = 0.025;
    c.weight.x0_norm = 0.25;
    c.weight.r = 0.1;
    return c;
}

WeightParams weight(double s, double h, double T, double x0 = 0.25) {
    WeightParams p;
    p.x0_norm = x0;
    p.r = 0.1;
    p.s = s;
    p.h = h;
    p.T = T;
    return p;
}

StatePair state_from(const GridPtr& g, auto fa, auto fb) {
    StatePair s{Field(g), Field(g), 0.0};
    for (std::size_t i = 0; i < g->size(); ++i) {
        s.a[i] = fa(g->centers[i][0]);
        s.b[i] = fb(g->centers[i][0]);
    }
    return s;
}

}  // namespace

TEST_CASE("tilting the equilibrium gives zero") {
    auto g = build_grid(Domain::unit_ball(1), 64);
    StatePair s{Field(g, 1.0), Field(g, 1.0), 0.0};
    Catalyst k(CatalystSpec{}, g->spacing);
    auto ts = tilt(s, weight(0.5, 0.1, 1.0), k, 0.3, 1.0, 1.0);
    for (int i = 0; i < 4; ++i)
        for (std::size_t c = 0; c < g->size(); ++c) {
            CHECK(ts.f[i][c] == 0.0);
            CHECK(ts.v[i][c] == 0.0);
        }
    auto q = quadratic_forms(ts);
    CHECK(q.Sff == 0.0);
    CHECK(q.Sff_direct == 0.0);
    CHECK(q.Aff == 0.0);
    CHECK(q.F2 == 0.0);
}

TEST_CASE("tilted state identities on random states") {
    auto g = build_grid(Domain::unit_ball(1), 128);
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    CatalystSpec spec;
    spec.k0 = 2.0;
    spec.k_max = 2.0;
    Catalyst k(spec, g->spacing);
    for (int trial = 0; trial < 20; ++trial) {
        StatePair s{Field(g), Field(g), 0.0};
        for (std::size_t c = 0; c < g->size(); ++c) {
            s.a[c] = 0.2 + 2.0 * u(rng);
            s.b[c] = 0.2 + 2.0 * u(rng);
        }
        auto p = weight(0.05 + 0.95 * u(rng), 0.05 + 0.95 * u(rng), 2.0, 0.05 + 0.3 * u(rng));
        auto ts = tilt(s, p, k, 2.0 * u(rng), 1.0, 2.0);
        for (std::size_t c = 0; c < g->size(); ++c) {
            CHECK(ts.v[0][c] + ts.v[1][c] == 0.0);
            CHECK(ts.f[2][c] == doctest::Approx(ts.f[0][c] * std::exp(0.5 * (ts.Phi[2][c] - ts.Phi[0][c]))));
        }
        auto q = quadratic_forms(ts);
        CHECK(q.norm2_12 <= q.norm2);
        CHECK(q.norm2 <= 2.0 * q.norm2_12);
    }
}

// h is capped at 1, so the vanishing-exponent limit is reached through s.
TEST_CASE("vanishing exponent leaves u unchanged") {
    auto g = build_grid(Domain::unit_ball(1), 32);
    auto s = state_from(g, [](double x) { return 1.0 + 0.3 * x; }, [](double x) { return 1.0 - 0.3 * x; });
    Catalyst k(CatalystSpec{}, g->spacing);
    auto p = weight(1e-12, 1.0, 1.0);
    auto ts = tilt(s, p, k, 1.0, 1.0, 1.0);
    for (std::size_t c = 0; c < g->size(); ++c) {
        CHECK(ts.f[0][c] == doctest::Approx(s.a[c] - 1.0).epsilon(1e-10));
        CHECK(ts.f[3][c] == doctest::Approx(s.b[c] - 1.0).epsilon(1e-10));
    }
}

TEST_CASE("eta is nonpositive and Sff dominates the gradient part below s0") {
    auto g = build_grid(Domain::unit_ball(1), 128);
    auto s = state_from(g, [](double x) { return 1.0 + 0.3 * std::cos(pi * (x + 0.5)); },
                        [](double x) { return 1.0 - 0.3 * std::cos(pi * (x + 0.5)); });
    Catalyst k(CatalystSpec{}, g->spacing);
    WeightParams p = weight(1.0, 0.2, 1.0);
    auto geo = geometry_constants(p, 2000);
    p.s = std::min(1.0, 2.0 / geo.c1);
    auto ts = tilt(s, p, k, 0.5, 1.0, 1.0);
    for (int i = 0; i < 4; ++i)
        for (std::size_t c = 0; c < g->size(); ++c) CHECK(ts.eta[i][c] <= 0.0);
    CHECK(quadratic_forms(ts).Sff >= 0.0);
}

TEST_CASE("antisymmetric form vanishes at second order") {
    for (auto p : {weight(0.3, 0.2, 1.0, 0.25), weight(0.8, 0.05, 0.5, 0.1), weight(0.1, 1.0, 2.0, 0.35)}) {
        std::vector<double> res, gap;
        for (int n : {128, 256, 512}) {
            auto c = bump_config(n, p.T);
            c.snapshot_every = p.T / 4;
            auto full = run(c);
            REQUIRE(full.failure.empty());
            const auto& s = full.snapshots.back();
            Catalyst k(c.catalyst, full.grid->spacing);
            auto q = quadratic_forms(tilt(s, p, k, p.T, c.d1, c.d2));
            res.push_back(std::fabs(q.Aff));
            gap.push_back(std::fabs(q.Sff - q.Sff_direct));
        }
        CHECK(std::log2(res[0] / res[1]) >= 1.9);
        CHECK(std::log2(res[1] / res[2]) >= 1.9);
        CHECK(gap[2] < gap[0]);
    }
}

TEST_CASE("frequency of the pure heat flow matches the eigen-expansion") {
    SimConfig c;
    c.resolution = 512;
    c.catalyst.kind = CatalystKind::constant;
    c.catalyst.k0 = 0.0;
    c.catalyst.k_max = 0.0;
    c.a0 = {ProfileKind::cosine, 1.0, 0.2, 1};
    c.b0 = {ProfileKind::cosine, 1.0, 0.1, 2};
    c.dt = 1e-4;
    c.t_end = 0.3;
    c.snapshot_every = 0.01;
    auto out = run(c);
    REQUIRE(out.failure.empty());
    auto p = weight(1e-9, 1.0, 0.3);
    auto tr = frequency_trace(out, p, 0.5, 10.0);
    REQUIRE(tr.defined() == tr.times.size());
    // u1 = 0.2 e^{-pi^2 t} cos, u2 = 0.1 e^{-4 pi^2 t} cos 2.; each mean square is half the amplitude squared.
    auto oracle = [](double t) {
        double w1 = 0.04 * std::exp(-2 * pi * pi * t), w2 = 0.01 * std::exp(-8 * pi * pi * t);
        return (pi * pi * w1 + 4 * pi * pi * w2) / (w1 + w2);
    };
    for (std::size_t i = 0; i < tr.times.size(); ++i) {
        CHECK(tr.N[i] == doctest::Approx(oracle(tr.times[i])).epsilon(2e-3));
        if (i > 0) CHECK(tr.N[i] <= tr.N[i - 1] + 1e-10);
    }
    CHECK(tr.growth_violations.empty());
}

TEST_CASE("frequency trace of a degenerate run satisfies the differential inequalities") {
    auto c = bump_config(256, 2.0);
    auto out = run(c);
    REQUIRE(out.failure.empty());
    auto L = compute_ledger(ledger_inputs([&] {
        auto cc = c;
        cc.weight.T = 2.0;
        return cc;
    }()));
    auto p = weight(L.s2, 0.1, 2.0);
    auto tr = frequency_trace(out, p, L.C0, L.C1);
    CHECK(tr.defined() == tr.times.size());
    CHECK(tr.two_sided_violations.empty());
    CHECK(tr.growth_violations.empty());
    CHECK(tr.prop2_violations.empty());
    CHECK(tr.negative_Sff.empty());
    // Energy identity of the tilted system up to time differencing.
    for (std::size_t i = 2; i + 2 < tr.times.size(); ++i) {
        double scale = std::fabs(tr.Sff[i]) + std::fabs(tr.F_dot_f[i]);
        CHECK(std::fabs(tr.energy_residual[i]) <= 0.5 * tr.dnorm2.error[i] + 1e-2 * scale);
    }
    add_frequency_channels(out, tr);
    CHECK(out.series.has("N_t"));
    CHECK(std::isnan(out.series.channel("N_t").values.back()) == false);
}

TEST_CASE("zero state gives an empty frequency trace") {
    SimConfig c;
    c.resolution = 32;
    c.t_end = 0.2;
    auto out = run(c);
    auto tr = frequency_trace(out, weight(0.5, 0.1, 0.2), 0.5, 2.0);
    CHECK(tr.defined() == 0);
    CHECK(!tr.times.empty());
}

TEST_CASE("lembp on a closed-form exponential") {
    LembpInput in;
    for (int i = 0; i <= 100; ++i) {
        double t = i / 100.0;
        in.times.push_back(t);
        in.y.push_back(std::exp(-t));
        in.N.push_back(0.5);
        in.F1.push_back(0.0);
        in.F2.push_back(0.0);
    }
    in.T = 1.0;
    in.h = 0.1;
    in.t1 = 0.2;
    in.t2 = 0.5;
    in.t3 = 0.8;
    auto r = lembp_check(in);
    CHECK(r.hypotheses_hold());
    double M = 3.0 * std::log(2.0) / std::log(1.5);
    CHECK(r.M == doctest::Approx(M).epsilon(1e-6));
    CHECK(r.D == 0.0);
    // e^{-0.5 (1+M)} <= e^{-0.8 - 0.2 M}
    CHECK(r.margin == doctest::Approx(0.3 * M - 0.3).epsilon(1e-6));
    CHECK(r.margin >= 0);
}

TEST_CASE("lembp on a constant is tight") {
    LembpInput in;
    for (int i = 0; i <= 50; ++i) {
        in.times.push_back(i / 50.0);
        in.y.push_back(0.37);
        in.N.push_back(0.0);
        in.F1.push_back(0.0);
        in.F2.push_back(0.0);
    }
    in.t1 = 0.1;
    in.t2 = 0.4;
    in.t3 = 1.0;
    auto r = lembp_check(in);
    CHECK(r.hypotheses_hold());
    CHECK(r.D == 0.0);
    CHECK(r.margin == 0.0);
}

TEST_CASE("lembp reports violated hypotheses") {
    LembpInput in;
    for (int i = 0; i <= 50; ++i) {
        double t = i / 50.0;
        in.times.push_back(t);
        in.y.push_back(std::exp(3 * t));
        in.N.push_back(std::exp(5 * t));
        in.F1.push_back(0.0);
        in.F2.push_back(0.0);
    }
    in.t1 = 0.2;
    in.t2 = 0.4;
    in.t3 = 0.6;
    auto r = lembp_check(in);
    CHECK_FALSE(r.hyp2_violations.empty());
    CHECK(std::isfinite(r.margin));
    in.t2 = 0.41;
    CHECK_THROWS(lembp_check(in));
}

TEST_CASE("weight integral matches the closed form for C0 = C1 = 0") {
    double got = log_weight_integral(0.0, 0.0, 1.0, 0.1, 0.2, 0.5);
    CHECK(std::exp(got) == doctest::Approx(std::log(1.5)).epsilon(1e-6));
}

TEST_CASE("observation estimate and interpolation step on the reference run") {
    auto c = bump_config(256, 10.0);
    auto out = run(c);
    REQUIRE(out.failure.empty());
    auto in = ledger_inputs(c);
    in.T = 2.0;
    auto L = compute_ledger(in);
    auto rep = observation_estimate_check(out, L, {1.0, 5.0, 10.0}, {{1.0, 3.0}, {2.0, 6.0}, {0.5, 8.0}});
    for (const auto& ch : rep.checks) CHECK_MESSAGE(ch.pass, ch.id);
    auto step = interpolation_step_check(out, L);
    CHECK(step.checks.size() == 4);
    for (const auto& ch : step.checks) CHECK_MESSAGE(ch.pass, ch.id);
}

TEST_CASE("observation estimate on the zero state is trivially tight") {
    auto c = bump_config(32, 1.0);
    c.a0 = {};
    c.b0 = {};
    auto out = run(c);
    auto L = compute_ledger(ledger_inputs(c));
    auto rep = observation_estimate_check(out, L, {1.0}, {});
    REQUIRE(rep.checks.size() == 2);
    CHECK(rep.checks[1].margin.is_zero());
    CHECK(rep.pass());
}

TEST_CASE("tilted norm with a vanishing width integrates the peak") {
    auto g = build_grid(Domain::unit_ball(1), 256);
    StatePair s{Field(g, 2.0), Field(g, 1.0), 0.0};
    auto p = weight(1.0, 0.1, 1.0);
    // Wide weight: midpoint sum. lambda = 1e-9 -> norm ~ 1.
    CHECK(log_tilted_norm(*g, s, p, ExtReal::from_double(1e-9)).to_double() == doctest::Approx(0.0).epsilon(1e-6));
    // Very narrow: sqrt(2 pi / (lambda H)) with H = 4 * 0.25 * 0.5 / (0.25 - 0.0625).
    const double H = 0.5 / 0.1875;
    ExtReal lam = ExtReal::from_log(1e6);
    double expect = 0.5 * (std::log(2 * pi) - 1e6 - std::log(H));
    CHECK(log_tilted_norm(*g, s, p, lam).to_double() == doctest::Approx(expect).epsilon(1e-12));
}
