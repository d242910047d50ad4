#include "sawphoton/config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <map>

#include <nlohmann/json.hpp>

namespace sawphoton::io {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw ConfigError("config: " + path + ": " + what);
}

// Typed field readers; every object walk rejects unknown keys so typos
// surface instead of silently keeping a default.
class Block {
  public:
    Block(const json& j, std::string path) : obj_(j), path_(std::move(path)) {
        if (!obj_.is_object()) fail(path_, "expected an object");
        for (const auto& [key, value] : obj_.items()) seen_[key] = false;
    }

    void finish() const {
        for (const auto& [key, used] : seen_)
            if (!used) fail(path_.empty() ? key : path_ + "." + key, "unknown key");
    }

    const json* get(const std::string& key) {
        auto it = obj_.find(key);
        if (it == obj_.end()) return nullptr;
        seen_[key] = true;
        return &*it;
    }

    void number(const std::string& key, double& out) {
        if (const json* v = get(key)) {
            if (!v->is_number()) fail(sub(key), "expected a number");
            out = v->get<double>();
        }
    }

    void integer(const std::string& key, int& out) {
        std::int64_t wide = out;
        integer64(key, wide);
        if (wide < std::numeric_limits<int>::min() || wide > std::numeric_limits<int>::max())
            fail(sub(key), "integer out of range");
        out = static_cast<int>(wide);
    }

    void integer64(const std::string& key, std::int64_t& out) {
        if (const json* v = get(key)) {
            if (v->is_number_integer()) {
                out = v->get<std::int64_t>();
            } else if (v->is_number_float()) {
                const double d = v->get<double>();
                if (std::nearbyint(d) != d) fail(sub(key), "expected an integer");
                out = static_cast<std::int64_t>(d);
            } else {
                fail(sub(key), "expected an integer");
            }
        }
    }

    void unsigned64(const std::string& key, std::uint64_t& out) {
        if (const json* v = get(key)) {
            if (v->is_number_unsigned()) {
                out = v->get<std::uint64_t>();
            } else if (v->is_number_integer()) {
                const auto i = v->get<std::int64_t>();
                if (i < 0) fail(sub(key), "must be >= 0");
                out = static_cast<std::uint64_t>(i);
            } else if (v->is_number_float()) {
                const double d = v->get<double>();
                if (std::nearbyint(d) != d || d < 0) fail(sub(key), "expected a non-negative integer");
                out = static_cast<std::uint64_t>(d);
            } else {
                fail(sub(key), "expected an integer");
            }
        }
    }

    std::string sub(const std::string& key) const {
        return path_.empty() ? key : path_ + "." + key;
    }

  private:
    const json& obj_;
    std::string path_;
    std::map<std::string, bool> seen_;
};

void parse_saw(const json& j, SawParams& saw) {
    Block b(j, "saw");
    b.number("frequency_hz", saw.frequency_hz);
    b.number("sound_velocity_mps", saw.sound_velocity_mps);
    b.number("amplitude_v", saw.amplitude_v);
    b.finish();
}

void parse_junction(const json& j, JunctionParams& junction) {
    Block b(j, "junction");
    b.number("band_drop_v", junction.band_drop_v);
    b.number("dielectric_constant", junction.dielectric_constant);
    b.number("hole_density_per_m2", junction.hole_density_per_m2);
    b.number("iregion_length_m", junction.iregion_length_m);
    b.finish();
}

void parse_pump(const json& j, mc::PumpModel& pump) {
    Block b(j, "pump");
    b.integer("electrons_per_packet", pump.spec.electrons_per_packet);
    b.integer("divider", pump.spec.divider);
    b.number("p_miss", pump.p_miss);
    b.number("p_extra", pump.p_extra);
    b.number("cycle_jitter_s", pump.cycle_jitter_s);
    b.finish();
}

void parse_recombination(const json& j, RecombinationModel& recombination) {
    Block b(j, "recombination");
    b.number("radiative_rate_per_s", recombination.radiative_rate_per_s);
    b.number("nonradiative_rate_per_s", recombination.nonradiative_rate_per_s);
    b.finish();
}

void parse_detector(const json& j, mc::DetectorModel& detector) {
    Block b(j, "detector");
    b.number("efficiency", detector.efficiency);
    b.number("dark_rate_per_s", detector.dark_rate_per_s);
    b.number("dead_time_s", detector.dead_time_s);
    b.number("jitter_s", detector.jitter_s);
    b.finish();
}

void parse_run(const json& j, RunSection& run) {
    Block b(j, "run");
    b.unsigned64("n_cycles", run.n_cycles);
    b.unsigned64("seed", run.seed);
    b.integer("shards", run.shards);
    b.number("horizon_multiple", run.horizon_multiple);
    b.finish();
}

void parse_stats(const json& j, StatsConfig& stats) {
    Block b(j, "stats");
    b.integer64("count_window_cycles", stats.count_window_cycles);
    b.number("g2_bin_width_s", stats.g2_bin_width_s);
    b.number("g2_max_delay_s", stats.g2_max_delay_s);
    b.integer("phase_bins", stats.phase_bins);
    b.finish();
}

}  // namespace

mc::ExperimentSpec RunConfig::experiment() const {
    mc::ExperimentSpec spec;
    spec.pump = pump;
    spec.recombination = recombination;
    spec.detector = detector;
    spec.n_cycles = run.n_cycles;
    spec.shards = run.shards;
    spec.horizon_multiple = run.horizon_multiple;
    return spec;
}

void RunConfig::validate() const {
    try {
        saw.validate();
        junction.validate();
        pump.validate();
        recombination.validate();
        detector.validate();
        run.validate();
        stats.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
}

RunConfig parse_config_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config: malformed JSON: ") + e.what());
    }

    RunConfig config;
    Block root(j, "");
    if (const json* v = root.get("saw")) parse_saw(*v, config.saw);
    if (const json* v = root.get("junction")) parse_junction(*v, config.junction);
    if (const json* v = root.get("pump")) parse_pump(*v, config.pump);
    if (const json* v = root.get("recombination")) parse_recombination(*v, config.recombination);
    if (const json* v = root.get("detector")) parse_detector(*v, config.detector);
    if (const json* v = root.get("run")) parse_run(*v, config.run);
    if (const json* v = root.get("stats")) parse_stats(*v, config.stats);
    root.finish();

    // The pump rides the SAW clock.
    config.pump.spec.saw_frequency_hz = config.saw.frequency_hz;
    config.validate();
    return config;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_config_text(text);
}

nlohmann::json to_json(const RunConfig& c) {
    return json{
        {"saw",
         {{"frequency_hz", c.saw.frequency_hz},
          {"sound_velocity_mps", c.saw.sound_velocity_mps},
          {"amplitude_v", c.saw.amplitude_v}}},
        {"junction",
         {{"band_drop_v", c.junction.band_drop_v},
          {"dielectric_constant", c.junction.dielectric_constant},
          {"hole_density_per_m2", c.junction.hole_density_per_m2},
          {"iregion_length_m", c.junction.iregion_length_m}}},
        {"pump",
         {{"electrons_per_packet", c.pump.spec.electrons_per_packet},
          {"divider", c.pump.spec.divider},
          {"p_miss", c.pump.p_miss},
          {"p_extra", c.pump.p_extra},
          {"cycle_jitter_s", c.pump.cycle_jitter_s}}},
        {"recombination",
         {{"radiative_rate_per_s", c.recombination.radiative_rate_per_s},
          {"nonradiative_rate_per_s", c.recombination.nonradiative_rate_per_s}}},
        {"detector",
         {{"efficiency", c.detector.efficiency},
          {"dark_rate_per_s", c.detector.dark_rate_per_s},
          {"dead_time_s", c.detector.dead_time_s},
          {"jitter_s", c.detector.jitter_s}}},
        {"run",
         {{"n_cycles", c.run.n_cycles},
          {"seed", c.run.seed},
          {"shards", c.run.shards},
          {"horizon_multiple", c.run.horizon_multiple}}},
        {"stats",
         {{"count_window_cycles", c.stats.count_window_cycles},
          {"g2_bin_width_s", c.stats.g2_bin_width_s},
          {"g2_max_delay_s", c.stats.g2_max_delay_s},
          {"phase_bins", c.stats.phase_bins}}},
    };
}

}  // namespace sawphoton::io
