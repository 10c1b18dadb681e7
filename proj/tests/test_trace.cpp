#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "degrd/trace.hpp"

using namespace degrd;

namespace {

TraceSeries series_of(auto fn, int n = 101, double t_end = 1.0) {
    TraceSeries s;
    s.add_channel("x", "test", "");
    for (int i = 0; i < n; ++i) {
        double t = t_end * i / (n - 1);
        s.times.push_back(t);
        s.channels[0].values.push_back(fn(t));
    }
    return s;
}

}  // namespace

TEST_CASE("exact exponential is fitted exactly") {
    auto s = series_of([](double t) { return 3.0 * std::exp(-2.0 * t); });
    auto fit = fit_decay_rate(s, "x");
    CHECK(fit.rate == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(fit.r_squared == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(fit.intercept == doctest::Approx(std::log(3.0)).epsilon(1e-10));
    CHECK(fit.samples == 91);
}

TEST_CASE("constant series has rate zero") {
    auto s = series_of([](double) { return 0.7; });
    auto fit = fit_decay_rate(s, "x");
    CHECK(fit.rate == doctest::Approx(0.0));
    CHECK(fit.r_squared == 1.0);
}

TEST_CASE("rate is invariant under positive scaling") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        double rate = 5.0 * u(rng), noise_seed = u(rng);
        auto f = [&](double t) { return std::exp(-rate * t + 0.05 * std::sin(37.0 * t + noise_seed)); };
        auto s = series_of(f);
        double scale = std::exp(20.0 * (u(rng) - 0.5));
        auto scaled = series_of([&](double t) { return scale * f(t); });
        auto a = fit_decay_rate(s, "x"), b = fit_decay_rate(scaled, "x");
        CHECK(a.rate == doctest::Approx(b.rate).epsilon(1e-9));
        CHECK(b.intercept - a.intercept == doctest::Approx(std::log(scale)).epsilon(1e-9));
    }
}

TEST_CASE("default window skips the transient and stops at underflow") {
    auto s = series_of([](double t) { return t < 0.5 ? std::exp(-100.0 * t) : 0.0; });
    auto w = default_fit_window(s, "x");
    CHECK(w.t_begin == doctest::Approx(0.1));
    CHECK(w.t_end < 0.5);
    auto fit = fit_decay_rate(s, "x");
    CHECK(fit.rate == doctest::Approx(100.0).epsilon(1e-9));
}

TEST_CASE("fit errors") {
    auto s = series_of([](double t) { return t - 0.5; });
    CHECK_THROWS_AS(fit_decay_rate(s, "x", FitWindow{0.0, 1.0}), std::domain_error);
    auto short_series = series_of([](double t) { return 1.0 + t; }, 8);
    CHECK_THROWS_AS(fit_decay_rate(short_series, "x"), std::invalid_argument);
    CHECK_THROWS_AS(fit_decay_rate(s, "missing"), std::out_of_range);
}

TEST_CASE("series checks") {
    TraceSeries s;
    s.add_channel("a", "", "");
    CHECK_THROWS(s.add_channel("a", "", ""));
    s.times = {0.0, 1.0};
    s.channel("a").values = {1.0};
    CHECK_THROWS_AS(s.check(), std::logic_error);
    s.channel("a").values.push_back(2.0);
    CHECK_NOTHROW(s.check());
    s.times = {0.0, 0.0};
    CHECK_THROWS_AS(s.check(), std::logic_error);
}
