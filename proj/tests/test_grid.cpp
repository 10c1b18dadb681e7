#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "degrd/grid.hpp"

using namespace degrd;
using std::numbers::pi;

namespace {

Field random_field(const GridPtr& g, std::mt19937_64& rng) {
    std::normal_distribution<double> nd;
    Field f(g);
    for (auto& v : f.values) v = nd(rng);
    return f;
}

Field sample(const GridPtr& g, auto fn) {
    Field f(g);
    for (std::size_t i = 0; i < g->size(); ++i) f[i] = fn(g->centers[i]);
    return f;
}

double l2_norm(const Grid& g, const Field& f) { return std::sqrt(inner(g, f, f)); }

}  // namespace

TEST_CASE("domain radii give unit measure") {
    CHECK(Domain::unit_ball(1).radius == 0.5);
    CHECK(pi * std::pow(Domain::unit_ball(2).radius, 2) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(4.0 / 3.0 * pi * std::pow(Domain::unit_ball(3).radius, 3) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("interval grid layout") {
    auto g = build_grid(Domain::unit_ball(1), 8);
    CHECK(g->size() == 8);
    auto g4 = build_grid(Domain::unit_ball(1), 256);
    double total = 0.0;
    for (double v : g4->volumes) total += v;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(g->centers[0][0] == doctest::Approx(-7.0 / 16));
    CHECK(g->volumes[3] == doctest::Approx(1.0 / 8));
}

TEST_CASE("resolution 4 is below the minimum") {
    CHECK_THROWS_AS(build_grid(Domain::unit_ball(1), 4), std::invalid_argument);
}

TEST_CASE("three-dimensional PDE grids are rejected") {
    CHECK_THROWS_WITH_AS(build_grid(Domain::unit_ball(3), 16), doctest::Contains("unsupported dimension"),
                         std::invalid_argument);
}

TEST_CASE("polar grid volumes sum to one and centers are interior") {
    auto g = build_grid(Domain::unit_ball(2), 32);
    // Oracle: center disk pi*dr^2 plus rings (2j+1) pi dr^2, j = 1..nr-1, telescopes to pi R^2.
    double total = 0.0;
    for (double v : g->volumes) total += v;
    CHECK(std::fabs(total - 1.0) < 1e-12);
    double R = g->domain.radius;
    for (const auto& c : g->centers) CHECK(std::hypot(c[0], c[1]) < R);
}

TEST_CASE("laplacian annihilates constants and conserves") {
    std::mt19937_64 rng(11);
    for (int dim : {1, 2}) {
        auto g = build_grid(Domain::unit_ball(dim), 16);
        Field c(g, 3.7);
        for (double v : neumann_laplacian(*g, c, 2.0).values) CHECK(std::fabs(v) < 1e-10);
        for (int trial = 0; trial < 20; ++trial) {
            auto v = random_field(g, rng);
            auto lv = neumann_laplacian(*g, v, 1.0);
            double scale = 0.0;
            for (double x : lv.values) scale += std::fabs(x);
            CHECK(std::fabs(integrate(*g, lv)) <= 1e-12 * scale * g->spacing + 1e-300);
        }
    }
}

TEST_CASE("laplacian is symmetric and negative semidefinite") {
    std::mt19937_64 rng(12);
    for (int dim : {1, 2}) {
        auto g = build_grid(Domain::unit_ball(dim), 16);
        for (int trial = 0; trial < 50; ++trial) {
            auto v = random_field(g, rng), w = random_field(g, rng);
            double lhs = inner(*g, neumann_laplacian(*g, v, 1.0), w);
            double rhs = inner(*g, v, neumann_laplacian(*g, w, 1.0));
            CHECK(std::fabs(lhs - rhs) <= 1e-10 * (1.0 + std::fabs(lhs)));
            CHECK(inner(*g, neumann_laplacian(*g, v, 1.0), v) <= 1e-12);
            CHECK(-inner(*g, neumann_laplacian(*g, v, 1.0), v) == doctest::Approx(dirichlet_form(*g, v)));
        }
    }
}

TEST_CASE("laplacian of the first interval mode converges at second order") {
    double prev = 0.0;
    for (int n : {32, 64, 128, 256}) {
        auto g = build_grid(Domain::unit_ball(1), n);
        auto f = sample(g, [](const Point& x) { return std::cos(pi * (x[0] + 0.5)); });
        auto lf = neumann_laplacian(*g, f, 1.0);
        double err = 0.0;
        for (std::size_t i = 0; i < g->size(); ++i) err = std::max(err, std::fabs(lf[i] + pi * pi * f[i]));
        if (prev > 0) CHECK(std::log2(prev / err) >= 1.9);
        prev = err;
    }
}

TEST_CASE("polar laplacian truncation error") {
    // q = r^4/4 - R^2 r^2/2 has zero normal derivative at r = R and Laplacian 4r^2 - 2R^2.
    // The outer ring sees one exact zero flux and one second-order flux, so its
    // pointwise error is first order; everywhere else it is second order.
    double prev_in = 0.0, prev_all = 0.0;
    for (int n : {16, 32, 64}) {
        auto g = build_grid(Domain::unit_ball(2), n);
        double R = g->domain.radius;
        auto q = sample(g, [R](const Point& x) {
            double r2 = x[0] * x[0] + x[1] * x[1];
            return r2 * r2 / 4.0 - R * R * r2 / 2.0;
        });
        auto lq = neumann_laplacian(*g, q, 1.0);
        Field err(g);
        double interior = 0.0;
        for (std::size_t i = 0; i < g->size(); ++i) {
            double r2 = g->centers[i][0] * g->centers[i][0] + g->centers[i][1] * g->centers[i][1];
            err[i] = lq[i] - (4.0 * r2 - 2.0 * R * R);
            if (std::sqrt(r2) < R - g->spacing) interior = std::max(interior, std::fabs(err[i]));
        }
        double all = l2_norm(*g, err);
        if (prev_in > 0) {
            CHECK(std::log2(prev_in / interior) >= 1.9);
            CHECK(std::log2(prev_all / all) >= 1.4);
        }
        prev_in = interior;
        prev_all = all;
    }
}

TEST_CASE("integration") {
    auto g = build_grid(Domain::unit_ball(1), 256);
    CHECK(integrate(*g, Field(g, 1.0)) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::fabs(integrate(*g, sample(g, [](const Point& x) { return x[0]; }))) < 1e-15);
    double dx = g->spacing;
    // Midpoint rule error for x^2 on [-1/2,1/2] is -dx^2/12.
    double x2 = integrate(*g, sample(g, [](const Point& x) { return x[0] * x[0]; }));
    CHECK(x2 == doctest::Approx(1.0 / 12 - dx * dx / 12).epsilon(1e-12));
}

TEST_CASE("mismatched grids are rejected") {
    auto g1 = build_grid(Domain::unit_ball(1), 8);
    auto g2 = build_grid(Domain::unit_ball(1), 8);
    CHECK_THROWS_AS(neumann_laplacian(*g1, Field(g2, 1.0), 1.0), std::invalid_argument);
    CHECK_THROWS_AS(integrate(*g1, Field(g2, 1.0)), std::invalid_argument);
}

TEST_CASE("first Neumann eigenvalue of the interval") {
    // Oracle: the discrete eigenvalue of the uniform stencil is (4/dx^2) sin^2(pi dx / 2).
    for (int n : {8, 64, 256}) {
        auto g = build_grid(Domain::unit_ball(1), n);
        auto ev = neumann_eigenvalue_1(*g);
        double dx = g->spacing;
        double exact = 4.0 / (dx * dx) * std::pow(std::sin(pi * dx / 2), 2);
        CHECK(ev.value == doctest::Approx(exact).epsilon(1e-10));
        CHECK(ev.value > 0);
    }
    auto e8 = neumann_eigenvalue_1(*build_grid(Domain::unit_ball(1), 8)).value;
    auto e16 = neumann_eigenvalue_1(*build_grid(Domain::unit_ball(1), 16)).value;
    auto e256 = neumann_eigenvalue_1(*build_grid(Domain::unit_ball(1), 256)).value;
    CHECK(std::log2((pi * pi - e8) / (pi * pi - e16)) == doctest::Approx(2.0).epsilon(0.02));
    CHECK(e256 == doctest::Approx(pi * pi).epsilon(2e-5));
}

TEST_CASE("first Neumann eigenvalue of the disk") {
    // Oracle: (j'_{1,1} / R)^2 with j'_{1,1} = 1.8411837813406593.
    double R = Domain::unit_ball(2).radius;
    double exact = std::pow(1.8411837813406593 / R, 2);
    auto ev = neumann_eigenvalue_1(*build_grid(Domain::unit_ball(2), 48));
    CHECK(ev.value == doctest::Approx(exact).epsilon(5e-3));
}

TEST_CASE("gradient of the first mode is second order") {
    double prev = 0.0;
    for (int n : {32, 64, 128}) {
        auto g = build_grid(Domain::unit_ball(1), n);
        auto f = sample(g, [](const Point& x) { return std::cos(pi * (x[0] + 0.5)); });
        auto gr = neumann_gradient(*g, f);
        Field err(g);
        for (std::size_t i = 0; i < g->size(); ++i)
            err[i] = gr[i][0] + pi * std::sin(pi * (g->centers[i][0] + 0.5));
        double e = l2_norm(*g, err);
        if (prev > 0) CHECK(std::log2(prev / e) >= 1.9);
        prev = e;
    }
}

TEST_CASE("grid summary") {
    auto g = build_grid(Domain::unit_ball(1), 64);
    auto j = g->summary();
    CHECK(j["dim"] == 1);
    CHECK(j["cells"] == 64);
}
