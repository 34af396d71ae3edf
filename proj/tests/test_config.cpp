#include <doctest.h>

#include <fstream>

#include "pcity/config.hpp"
#include "pcity/errors.hpp"
#include "pcity/toml.hpp"

using namespace pcity;

namespace {

const char* kMinimal = R"cfg(
[scenario]
label = "t"            # comment after value
city_kind = "dense"

[emissions.co2]
f = [0.553, 0.161, -0.00289, 0.266, 0.511, 0.183]
provenance = "Int Panis et al. (2006)"
)cfg";

} // namespace

TEST_CASE("toml subset: tables, scalars, arrays, comments") {
    auto t = toml::Table::parse(R"(
# leading comment
[a]
x = 1.5
y = "hash # inside string"
flag = true
nums = [1, 2.5, 3e-2]
names = ["p", "q"]
[a.b]
z = -2
)");
    CHECK(t.get_number("a.x") == 1.5);
    CHECK(t.get_string("a.y") == "hash # inside string");
    CHECK(t.get_bool("a.flag"));
    auto nums = t.get_numbers("a.nums");
    REQUIRE(nums.size() == 3);
    CHECK(nums[2] == doctest::Approx(0.03));
    CHECK(t.get_strings("a.names")[1] == "q");
    CHECK(t.get_number("a.b.z") == -2.0);
    CHECK(t.unused_keys().empty());
}

TEST_CASE("toml subset rejects malformed lines and duplicates") {
    CHECK_THROWS_AS(toml::Table::parse("x 1\n"), ConfigError);
    CHECK_THROWS_AS(toml::Table::parse("x = \n"), ConfigError);
    CHECK_THROWS_AS(toml::Table::parse("x = [1, \"a\"]nope\n"), ConfigError);
    CHECK_THROWS_AS(toml::Table::parse("x = 1\nx = 2\n"), ConfigError);
    CHECK_THROWS_AS(toml::Table::parse("[t\nx = 1\n"), ConfigError);
}

TEST_CASE("unknown keys are rejected, fail closed") {
    std::string text = std::string(kMinimal) + "\n[traffic]\nwarp_speed = 9.9\n";
    CHECK_THROWS_WITH_AS(config_from_table(toml::Table::parse(text)),
                         doctest::Contains("unknown key traffic.warp_speed"), ConfigError);
}

TEST_CASE("minimal config gets defaults and validates") {
    ScenarioConfig cfg = config_from_table(toml::Table::parse(kMinimal));
    validate_config(cfg);
    CHECK(cfg.u_max == 45.0);
    CHECK(cfg.porosity_center() == 0.38);
    cfg.city_kind = "disperse";
    CHECK(cfg.porosity_center() == 0.68);
}

TEST_CASE("missing emission table is a named error") {
    CHECK_THROWS_WITH_AS(
        [] {
            ScenarioConfig cfg =
                config_from_table(toml::Table::parse("[scenario]\nlabel = \"x\"\n"));
            validate_config(cfg);
        }(),
        doctest::Contains("emissions.co2"), ConfigError);
}

TEST_CASE("invariant violations name the key") {
    ScenarioConfig cfg = config_from_table(toml::Table::parse(kMinimal));
    cfg.eps_center = 1.2; // above the layout porosity
    CHECK_THROWS_WITH_AS(validate_config(cfg), doctest::Contains("porosity.center"), ConfigError);
    cfg = config_from_table(toml::Table::parse(kMinimal));
    cfg.zeta2 = 0.5;
    CHECK_THROWS_WITH_AS(validate_config(cfg), doctest::Contains("zeta2"), ConfigError);
    cfg = config_from_table(toml::Table::parse(kMinimal));
    cfg.tau = 0.0;
    CHECK_THROWS_WITH_AS(validate_config(cfg), doctest::Contains("tau_h"), ConfigError);
}

TEST_CASE("canonical config echo and hash are deterministic and sensitive") {
    ScenarioConfig a = config_from_table(toml::Table::parse(kMinimal));
    ScenarioConfig b = a;
    CHECK(canonical_config(a) == canonical_config(b));
    CHECK(config_hash(a) == config_hash(b));
    CHECK(config_hash(a).size() == 16);
    b.u_max = 30.0;
    CHECK(config_hash(a) != config_hash(b));
    // echo carries the headline speed limit value
    CHECK(canonical_config(a).find("traffic.u_max_kmh = 45") != std::string::npos);
}

TEST_CASE("the shipped scenario file loads and validates") {
    ScenarioConfig cfg = load_config("configs/city.toml");
    CHECK(cfg.u_max == 45.0);
    CHECK(cfg.city_kind == "dense");
    CHECK(cfg.horizon == 2.0);
    CHECK(cfg.co2.provenance.find("Panis") != std::string::npos);
    CHECK(cfg.synth.selected.size() == 5);
}
