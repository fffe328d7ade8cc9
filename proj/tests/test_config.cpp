#include "catch_amalgamated.hpp"

#include <numbers>

#include "dfrc/config.hpp"

using namespace dfrc;
using Catch::Approx;
using Catch::Matchers::ContainsSubstring;

TEST_CASE("desk preset", "[config]")
{
    const ScenarioConfig c = preset("desk");
    CHECK(c.Nt == 16);
    CHECK(c.Nr == 16);
    CHECK(c.M == 16);
    CHECK(c.nTrials == 200);
    CHECK(c.nSlots == 40);
    CHECK_NOTHROW(c.validate());
}

TEST_CASE("paper preset", "[config]")
{
    const ScenarioConfig c = preset("paper");
    CHECK(c.Nt == 64);
    CHECK(c.nTrials == 1000);
    REQUIRE(c.positions.size() == 4);
    CHECK(c.positions[0] == std::array<double, 2>{100, 20});
    CHECK(c.positions[3] == std::array<double, 2>{70, 20});
    CHECK(c.xi == std::complex<double>(10, 10));
    CHECK(c.fc == 30e9);
    CHECK(c.T == 0.02);
    CHECK(c.sigmaTau == 0.67e-6);
    CHECK_NOTHROW(c.validate());
}

TEST_CASE("fine delay preset", "[config]")
{
    CHECK(preset("desk-fine-delay").sigmaTau == 0.67e-9);
    CHECK_THROWS_AS(preset("huge"), ConfigError);
}

TEST_CASE("overlay keeps unspecified fields", "[config]")
{
    const ScenarioConfig c = parse_config(R"(
array:
  nt: 32
noise:
  sigma_theta_deg: 0.02
vehicles:
  positions: [[50, 10]]
  speed_range: [20, 20]
tracker:
  relaxed_schedule: false
run:
  seed: 7
  beamwidth_antennas: [8, 64]
)",
                                          desk_preset());
    CHECK(c.Nt == 32);
    CHECK(c.Nr == 16);
    CHECK(c.sigmaTheta == Approx(0.02 * std::numbers::pi / 180));
    CHECK(c.K() == 1);
    CHECK(c.speedMin == 20);
    CHECK_FALSE(c.relaxedSchedule);
    CHECK(c.seed == 7u);
    CHECK(c.beamwidthAntennas == std::vector<int>{8, 64});
    CHECK(c.p() == Approx(std::sqrt(1.0 / 32)));
}

TEST_CASE("empty document is the base", "[config]")
{
    CHECK(parse_config("", paper_preset()).Nt == 64);
}

TEST_CASE("unknown key reports line and field", "[config]")
{
    CHECK_THROWS_WITH(parse_config("array:\n  nt: 8\n  nq: 3\n", desk_preset()),
                      ContainsSubstring("line 3") && ContainsSubstring("array.nq"));
    CHECK_THROWS_WITH(parse_config("radar:\n  x: 1\n", desk_preset()), ContainsSubstring("unknown section"));
}

TEST_CASE("wrong type reports line and field", "[config]")
{
    CHECK_THROWS_WITH(parse_config("noise:\n  sigma_y: loud\n", desk_preset()),
                      ContainsSubstring("line 2") && ContainsSubstring("noise.sigma_y"));
    CHECK_THROWS_AS(parse_config("scenario:\n  rcs: 3\n", desk_preset()), ConfigError);
}

TEST_CASE("syntax error reports a line", "[config]")
{
    CHECK_THROWS_WITH(parse_config("array:\n  nt: [1, 2\n", desk_preset()), ContainsSubstring("line"));
}

TEST_CASE("validation", "[config]")
{
    CHECK_THROWS_AS(parse_config("noise:\n  sigma_v: -1\n", desk_preset()), ConfigError);
    CHECK_THROWS_AS(parse_config("scenario:\n  slot_duration: 0\n", desk_preset()), ConfigError);
    CHECK_THROWS_AS(parse_config("array:\n  nr: 0\n", desk_preset()), ConfigError);
    CHECK_THROWS_AS(parse_config("tracker:\n  damping: 1.0\n", desk_preset()), ConfigError);
    CHECK_THROWS_AS(parse_config("vehicles:\n  positions: [[10, -1]]\n", desk_preset()), ConfigError);
}

TEST_CASE("missing file", "[config]")
{
    CHECK_THROWS_AS(load_config("/nonexistent/cfg.yaml", desk_preset()), ConfigError);
}
