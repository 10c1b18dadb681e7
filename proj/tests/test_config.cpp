#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "degrd/config.hpp"

using namespace degrd;

namespace {

const char* kBump = R"([domain]
dim = 1

[grid]
resolution = 128

[physics]
d1 = 1.0
d2 = 0.5

[catalyst]
kind = bump
k0 = 1.0
k_max = 1.0
x0 = 0.3
r = 0.08
smoothness = 0.05

[initial]
a_kind = cosine
a_base = 1.3
a_amplitude = 0.2
a_mode = 1
b_kind = cosine
b_base = 0.7
b_amplitude = 0.1
b_mode = 2

[stepper]
t_end = 4
snapshot_every = 0.025

[output]
seed = 7
)";

std::string with_line(const std::string& text, const std::string& find, const std::string& repl) {
    std::string s = text;
    auto p = s.find(find);
    REQUIRE(p != std::string::npos);
    return s.replace(p, find.size(), repl);
}

}  // namespace

TEST_CASE("parses every section and defaults the observation ball to the catalyst bump") {
    auto c = parse_config(kBump);
    CHECK(c.resolution == 128);
    CHECK(c.d2 == 0.5);
    CHECK(c.catalyst.kind == CatalystKind::bump);
    CHECK(c.catalyst.x0 == 0.3);
    CHECK(c.a0.kind == ProfileKind::cosine);
    CHECK(c.b0.mode == 2);
    CHECK(c.t_end == 4.0);
    CHECK(c.seed == 7);
    CHECK(c.weight.x0_norm == 0.3);
    CHECK(c.weight.r == 0.08);
}

TEST_CASE("canonical INI round-trips bit for bit") {
    auto c = parse_config(kBump);
    c.d1 = 0.1 + 0.2;  // not exactly representable in short decimal
    auto text = to_ini(c);
    auto d = parse_config(text);
    CHECK(to_ini(d) == text);
    CHECK(d.d1 == c.d1);
    for (const auto& k : config_keys()) CHECK(get_config_value(c, k) == get_config_value(d, k));
}

TEST_CASE("errors name the line and key") {
    auto bad_num = with_line(kBump, "d2 = 0.5", "d2 = half");
    try {
        parse_config(bad_num, "bump.cfg");
        FAIL("expected an error");
    } catch (const ConfigError& e) {
        CHECK(e.line == 9);
        CHECK(e.key == "physics.d2");
        CHECK(std::string(e.what()).find("bump.cfg:9 [physics.d2]") == 0);
    }
    auto unknown = with_line(kBump, "k_max = 1.0", "kmax = 1.0");
    try {
        parse_config(unknown);
        FAIL("expected an error");
    } catch (const ConfigError& e) {
        CHECK(e.line == 14);
        CHECK(e.key == "catalyst.kmax");
    }
    auto section = with_line(kBump, "[stepper]", "[stepping]");
    CHECK_THROWS_AS(parse_config(section), ConfigError);
    auto syntax = with_line(kBump, "[grid]", "[grid");
    try {
        parse_config(syntax);
        FAIL("expected an error");
    } catch (const ConfigError& e) {
        CHECK(e.line == 4);
    }
    auto kind = with_line(kBump, "kind = bump", "kind = blob");
    CHECK_THROWS_AS(parse_config(kind), ConfigError);
}

TEST_CASE("semantic validation runs before returning") {
    CHECK_THROWS_AS(parse_config(with_line(kBump, "d1 = 1.0", "d1 = -1")), ConfigError);
    CHECK_THROWS_AS(parse_config(with_line(kBump, "resolution = 128", "resolution = 4")), ConfigError);
    CHECK_THROWS_AS(load_config("/nonexistent/file.cfg"), ConfigError);
}

TEST_CASE("overrides go through the same table") {
    auto c = parse_config(kBump);
    set_config_value(c, "catalyst.k0", "0.25");
    CHECK(c.catalyst.k0 == 0.25);
    set_config_value(c, "output.keep_snapshots", "false");
    CHECK_FALSE(c.keep_snapshots);
    CHECK_THROWS_AS(set_config_value(c, "catalyst.k00", "1"), ConfigError);
    CHECK_THROWS_AS(set_config_value(c, "catalyst.k0", "1x"), ConfigError);
}
