#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>

#include <nlohmann/json.hpp>

#include "sawphoton/config.hpp"

using namespace sawphoton;
using io::ConfigError;

TEST_CASE("empty document parses to the paper defaults") {
    const auto config = io::parse_config_text("{}");
    CHECK(config.saw.frequency_hz == 3e9);
    CHECK(config.saw.amplitude_v == 0.030);
    CHECK(config.recombination.radiative_rate_per_s == 1e10);
    CHECK(config.pump.spec.electrons_per_packet == 1);
    CHECK(config.pump.spec.divider == 1);
    CHECK(config.pump.spec.saw_frequency_hz == 3e9);
    // detector defaults to ideal, jitters to zero
    CHECK(config.detector.efficiency == 1.0);
    CHECK(config.detector.dark_rate_per_s == 0.0);
    CHECK(config.detector.dead_time_s == 0.0);
    CHECK(config.detector.jitter_s == 0.0);
    CHECK(config.pump.cycle_jitter_s == 0.0);
    // pump error defaults consistent with ~1e-4 plateau accuracy
    CHECK(config.pump.p_miss + config.pump.p_extra == 1e-4);
}

TEST_CASE("paper operating point parses and binds the pump to the SAW clock") {
    const std::string text = R"({
      "saw": {"frequency_hz": 3e9, "amplitude_v": 0.03},
      "pump": {"electrons_per_packet": 1, "divider": 5},
      "recombination": {"radiative_rate_per_s": 1e10},
      "run": {"n_cycles": 1000, "seed": 42}
    })";
    const auto config = io::parse_config_text(text);
    CHECK(config.pump.spec.saw_frequency_hz == 3e9);
    CHECK(config.pump.spec.injection_period_s() == doctest::Approx(5.0 / 3e9).epsilon(1e-12));
    CHECK(config.run.seed == 42);
    CHECK(config.run.n_cycles == 1000);
}

TEST_CASE("invariant violations name the offending path") {
    CHECK_THROWS_WITH_AS(io::parse_config_text(R"({"pump": {"p_miss": -0.1}})"),
                         "config: pump.p_miss must be >= 0", ConfigError);
    CHECK_THROWS_WITH_AS(io::parse_config_text(R"({"run": {"n_cycles": 0}})"),
                         "config: run.n_cycles must be >= 1", ConfigError);
    CHECK_THROWS_AS(io::parse_config_text(R"({"detector": {"efficiency": 1.2}})"), ConfigError);
    CHECK_THROWS_AS(io::parse_config_text(R"({"saw": {"frequency_hz": 0}})"), ConfigError);
    CHECK_THROWS_AS(
        io::parse_config_text(R"({"pump": {"p_miss": 0.6, "p_extra": 0.6}})"), ConfigError);
}

TEST_CASE("unknown keys are rejected with their path") {
    CHECK_THROWS_WITH_AS(io::parse_config_text(R"({"pump": {"p_mis": 0.1}})"),
                         "config: pump.p_mis: unknown key", ConfigError);
    CHECK_THROWS_WITH_AS(io::parse_config_text(R"({"sawparams": {}})"),
                         "config: sawparams: unknown key", ConfigError);
}

TEST_CASE("type errors are rejected") {
    CHECK_THROWS_AS(io::parse_config_text(R"({"saw": {"frequency_hz": "fast"}})"), ConfigError);
    CHECK_THROWS_AS(io::parse_config_text(R"({"run": {"n_cycles": 10.5}})"), ConfigError);
    CHECK_THROWS_AS(io::parse_config_text(R"({"run": {"seed": -3}})"), ConfigError);
    CHECK_THROWS_AS(io::parse_config_text(R"({"pump": {"divider": 2.5}})"), ConfigError);
    CHECK_THROWS_AS(io::parse_config_text(R"({"saw": 7})"), ConfigError);
    CHECK_THROWS_AS(io::parse_config_text("[1, 2]"), ConfigError);
}

TEST_CASE("malformed JSON is rejected") {
    CHECK_THROWS_AS(io::parse_config_text("{"), ConfigError);
    CHECK_THROWS_AS(io::parse_config_text(""), ConfigError);
}

TEST_CASE("serialize and re-parse is the identity") {
    const std::string text = R"({
      "saw": {"frequency_hz": 2.7182e9, "sound_velocity_mps": 2864.3, "amplitude_v": 0.025},
      "junction": {"band_drop_v": 1.45, "dielectric_constant": 12.9,
                   "hole_density_per_m2": 3.3e15, "iregion_length_m": 4.2e-5},
      "pump": {"electrons_per_packet": 2, "divider": 7, "p_miss": 1.5e-4,
               "p_extra": 0.5e-4, "cycle_jitter_s": 1e-12},
      "recombination": {"radiative_rate_per_s": 0.97e10, "nonradiative_rate_per_s": 1.3e7},
      "detector": {"efficiency": 0.31, "dark_rate_per_s": 220.5, "dead_time_s": 4.4e-9,
                   "jitter_s": 3e-11},
      "run": {"n_cycles": 123457, "seed": 18446744073709551615, "shards": 6,
              "horizon_multiple": 41.5},
      "stats": {"count_window_cycles": 250, "g2_bin_width_s": 1e-11,
                "g2_max_delay_s": 2e-8, "phase_bins": 64}
    })";
    const auto config = io::parse_config_text(text);
    const auto round_tripped = io::parse_config_text(io::to_json(config).dump());
    CHECK(round_tripped == config);
    CHECK(config.run.seed == 18446744073709551615ull);
}

TEST_CASE("experiment bundle carries the run parameters") {
    const auto config = io::parse_config_text(
        R"({"run": {"n_cycles": 777, "shards": 3, "horizon_multiple": 20}})");
    const auto spec = config.experiment();
    CHECK(spec.n_cycles == 777);
    CHECK(spec.shards == 3);
    CHECK(spec.horizon_multiple == 20);
    CHECK(spec.pump == config.pump);
    CHECK(spec.recombination == config.recombination);
    CHECK(spec.detector == config.detector);
}

TEST_CASE("file loading reports missing files") {
    CHECK_THROWS_AS(io::parse_config_file("/nonexistent/config.json"), ConfigError);
}
