#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "degrd/ledger.hpp"

using namespace degrd;
using std::numbers::pi;

namespace {

SimConfig reference_config() {
    SimConfig c;
    c.resolution = 256;
    c.catalyst.kind = CatalystKind::bump;
    c.catalyst.k0 = 1.0;
    c.catalyst.k_max = 1.0;
    c.catalyst.x0 = 0.25;
    c.catalyst.r = 0.1;
    c.a0 = {ProfileKind::cosine, 1.3, 0.2, 1};
    c.b0 = {ProfileKind::cosine, 0.7, 0.1, 2};
    c.weight.x0_norm = 0.25;
    c.weight.r = 0.1;
    c.weight.T = 2.0;
    c.t_end = 2.0;
    return c;
}

const ConstantLedger& reference_ledger() {
    static const ConstantLedger L = compute_ledger(ledger_inputs(reference_config()));
    return L;
}

// M_ell straight from its definition: composite Simpson in t on both windows.
double direct_M_ell(double C0, double C1, double ell, double h, double T) {
    auto w = [&](double t) { return std::exp(t * C1) / std::pow(T - t + h, 1.0 + C0); };
    auto simpson = [&](double a, double b) {
        const int n = 200000;
        double dx = (b - a) / n, s = w(a) + w(b);
        for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * w(a + i * dx);
        return s * dx / 3.0;
    };
    return 3.0 * simpson(T - ell * h, T) / simpson(T - 2 * ell * h, T - ell * h);
}

}  // namespace

TEST_CASE("K0 formula") {
    CHECK(compute_K0(2.0, 1.0) == doctest::Approx(32.0));
    CHECK(compute_K0(2.0, 0.0) == doctest::Approx(std::pow(12.0, 2.0 / 3.0)));
    CHECK(std::pow(12.0, 2.0 / 3.0) == doctest::Approx(5.2415).epsilon(1e-4));
    CHECK(compute_K0(0.0, 2.0) == doctest::Approx(4.0 * compute_K0(0.0, 1.0)));
}

TEST_CASE("Sobolev constant") {
    auto g = build_grid(Domain::unit_ball(1), 128);
    CHECK(sobolev_ratio(*g, Field(g, 1.0)) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(sobolev_ratio(*g, Field(g, 3.0)) == doctest::Approx(1.0).epsilon(1e-14));
    auto est = compute_sobolev_constant(g, 0, 600);
    CHECK(est.value >= 1.0);

    // Audit with trial fields the estimate never saw.
    int above = 0;
    for (int i = 1; i <= 1000; ++i)
        if (sobolev_ratio(*g, sobolev_trial_field(g, 12345, i)) > est.value) ++above;
    CHECK(above == 0);

    auto g2 = build_grid(Domain::unit_ball(1), 256);
    auto est2 = compute_sobolev_constant(g2, 0, 600);
    CHECK(std::fabs(est2.value / est.value - 1.0) < 0.05);
}

TEST_CASE("Sobolev constant on the disk") {
    auto g = build_grid(Domain::unit_ball(2), 24);
    auto est = compute_sobolev_constant(g, 7, 200);
    CHECK(est.value >= 1.0);
    for (int i = 1; i <= 200; ++i) CHECK(sobolev_ratio(*g, sobolev_trial_field(g, 99, i)) <= est.value);
}

TEST_CASE("M_ell quadrature matches the definition") {
    struct Case {
        double C0, C1, ell, T;
    };
    for (auto cs : {Case{0.5, 3.0, 5.0, 2.0}, Case{0.9, 10.0, 20.0, 1.0}, Case{0.2, 1.0, 2.0, 5.0},
                    Case{0.99, 40.0, 100.0, 2.0}}) {
        double h = std::min(1.0 / (2 * cs.ell), cs.T / (4 * cs.ell)) / 2;
        double kappa = cs.C1 * cs.ell * h;
        double expect = direct_M_ell(cs.C0, cs.C1, cs.ell, h, cs.T);
        double got = std::exp(log_M_ell(cs.C0, kappa, std::log(cs.ell)));
        CHECK(got == doctest::Approx(expect).epsilon(1e-8));
        CHECK(log_M_ell(cs.C0, kappa, std::log(cs.ell)) <= log_M_ell_bound(cs.C0, cs.C1, std::log(cs.ell)));
    }
}

TEST_CASE("M_ell stays finite for astronomically large ell") {
    double lm = log_M_ell(0.999, 2000.0, 4e6);
    CHECK(std::isfinite(lm));
    // J1 -> 1/C0 and J2 ~ e^{-C0 L - kappa} / (kappa + C0).
    double approx = std::log(3.0) - std::log(0.999) + 0.999 * 4e6 + 2000.0 + std::log(2000.0 * (1 + 0.0) + 0.999);
    CHECK(lm == doctest::Approx(approx).epsilon(1e-9));
    CHECK(lm <= log_M_ell_bound(0.999, 4000.0, 4e6));
}

TEST_CASE("ell search returns the smallest admissible integer") {
    double C0 = 0.3, C1 = 1.0, mu0 = 0.05, mu1 = 0.25;
    double log_ell = search_log_ell(C0, C1, mu0, mu1);
    double ell = std::round(std::exp(log_ell));
    auto holds = [&](double e) {
        double Mbar = std::exp(log_M_ell_bound(C0, C1, std::log(e)));
        return mu1 * (1 + Mbar) / (e + 1) <= mu0 / 2;
    };
    CHECK(ell > 1);
    CHECK(holds(ell));
    if (ell > 2) CHECK_FALSE(holds(ell - 1));
    CHECK(search_log_ell(0.3, 1.0, 100.0, 0.25) == doctest::Approx(std::log(2.0)));
}

TEST_CASE("reference ledger invariants") {
    const auto& L = reference_ledger();
    CHECK(L.C0 > 0);
    CHECK(L.C0 < 1);
    CHECK(L.C1 > 1);
    CHECK(L.s2 > 0);
    CHECK(L.s2 <= std::min(L.s0, L.s1));
    CHECK(L.s2 <= 1);
    CHECK(L.M > ExtReal::from_double(1.0));
    CHECK(L.c > ExtReal::from_double(1.0));
    CHECK(L.Cp == doctest::Approx(1.0 / (pi * pi)).epsilon(1e-4));
    CHECK(L.K0 == doctest::Approx(32.0));
    CHECK(L.M_ell <= L.M_ell_bound);
    CHECK(L.M_ell <= L.M_sup);
    CHECK(L.log_ell > 0);

    // mu1 (1 + M_bar) / (ell + 1) <= mu0 / 2 in logs.
    double lhs = std::log(L.geometry.mu1) + L.M_ell_bound.log_abs() - L.log_ell;
    CHECK(lhs <= std::log(L.geometry.mu0 / 2) + 1e-9 * std::fabs(lhs));

    // theta in (0, 1): |ln theta| is a positive finite extended real.
    CHECK(L.log_abs_log_theta.sign() != 0);
    CHECK(L.log_log_gamma == L.log_abs_log_theta);
    CHECK(L.log_beta == L.log_abs_log_theta - ExtReal::from_double(std::log(2.0)));
}

TEST_CASE("C4 matches a dense scan of psi''") {
    const auto& L = reference_ledger();
    const double a = 0.25, R = 0.5;
    auto psi = [&](double x) { return 2 * a * R * (R * R - x * x) / (a * a + R * R - 2 * a * x); };
    double best = 0.0;
    const double dx = 1e-3;
    for (int i = 0; i <= 20000; ++i) {
        double x = -R + 2 * R * i / 20000.0;
        double d2 = (-psi(x + 2 * dx) + 16 * psi(x + dx) - 30 * psi(x) + 16 * psi(x - dx) - psi(x - 2 * dx)) /
                    (12 * dx * dx);
        best = std::max(best, std::fabs(d2));
    }
    CHECK(L.C4 / kGeometrySafety == doctest::Approx(best).epsilon(1e-4));
}

TEST_CASE("s0 and s1 do not increase with the largest diffusivity") {
    auto in = ledger_inputs(reference_config());
    in.sobolev_trials = 50;
    auto base = compute_analysis_constants(in);
    in.d2 = 3.0;
    auto big = compute_analysis_constants(in);
    CHECK(big.s0 <= base.s0);
    CHECK(big.s1 <= base.s1);
}

TEST_CASE("ledger is deterministic and serializes every constant") {
    const auto& L = reference_ledger();
    CHECK(ledger_is_reproducible(L));
    auto j = L.to_json();
    CHECK(j["constants"].size() == L.entries().size());
    bool saw_theta = false;
    for (const auto& e : j["constants"]) {
        CHECK(e.contains("provenance"));
        CHECK(e.contains("reference"));
        if (e["name"] == "theta") {
            saw_theta = true;
            CHECK(e["value"].is_string());
        }
    }
    CHECK(saw_theta);
}

TEST_CASE("ledger rejects a catalyst without a floor on the ball") {
    auto c = reference_config();
    c.catalyst.k0 = 0.0;
    CHECK_THROWS(compute_ledger(ledger_inputs(c)));
}
