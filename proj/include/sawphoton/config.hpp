#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "sawphoton/device.hpp"
#include "sawphoton/mc.hpp"

namespace sawphoton::io {

/// Configuration or input-file problem; the message names the offending
/// JSON path.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Analysis binning for simulate output. Zeros mean "derive from the
/// injection period": g2 bin = T/50, g2 max delay = 5T.
struct StatsConfig {
    std::int64_t count_window_cycles = 100;
    double g2_bin_width_s = 0;
    double g2_max_delay_s = 0;
    int phase_bins = 32;

    void validate() const {
        detail::require(count_window_cycles >= 1, "stats.count_window_cycles must be >= 1");
        detail::require(g2_bin_width_s >= 0, "stats.g2_bin_width_s must be >= 0");
        detail::require(g2_max_delay_s >= 0, "stats.g2_max_delay_s must be >= 0");
        detail::require(phase_bins >= 2, "stats.phase_bins must be >= 2");
    }

    bool operator==(const StatsConfig&) const = default;
};

struct RunSection {
    std::uint64_t n_cycles = 100000;
    std::uint64_t seed = 1;
    int shards = 1;
    double horizon_multiple = 50;

    void validate() const {
        detail::require(n_cycles >= 1, "run.n_cycles must be >= 1");
        detail::require(shards >= 1, "run.shards must be >= 1");
        detail::require(horizon_multiple >= 0, "run.horizon_multiple must be >= 0");
    }

    bool operator==(const RunSection&) const = default;
};

/// Full validated run configuration. Every block is optional in the JSON;
/// defaults are the paper's GaAs operating point with an ideal detector.
struct RunConfig {
    SawParams saw;
    JunctionParams junction;
    mc::PumpModel pump;  // pump.spec.saw_frequency_hz is bound to saw.frequency_hz
    RecombinationModel recombination;
    mc::DetectorModel detector;
    RunSection run;
    StatsConfig stats;

    mc::ExperimentSpec experiment() const;
    void validate() const;

    bool operator==(const RunConfig&) const = default;
};

RunConfig parse_config_text(const std::string& text);
RunConfig parse_config_file(const std::string& path);
nlohmann::json to_json(const RunConfig& config);

}  // namespace sawphoton::io
