#pragma once

#include <cstdint>

#include "sawphoton/device.hpp"
#include "sawphoton/rng.hpp"
#include "sawphoton/traces.hpp"

namespace sawphoton::mc {

/// Quantized pump with i.i.d. per-cycle error events: each injection carries
/// N electrons except with probability p_miss (one short) or p_extra (one
/// over). Defaults split the ~1e-4 plateau inaccuracy evenly.
struct PumpModel {
    InjectionSpec spec;
    double p_miss = 5e-5;
    double p_extra = 5e-5;
    double cycle_jitter_s = 0;

    void validate() const {
        spec.validate();
        detail::require(p_miss >= 0, "pump.p_miss must be >= 0");
        detail::require(p_extra >= 0, "pump.p_extra must be >= 0");
        detail::require(p_miss + p_extra <= 1, "pump.p_miss + pump.p_extra must be <= 1");
        detail::require(cycle_jitter_s >= 0, "pump.cycle_jitter_s must be >= 0");
    }

    bool operator==(const PumpModel&) const = default;
};

/// Binomial-thinning detector with Gaussian timing jitter, homogeneous dark
/// counts and a non-paralyzable dead time.
struct DetectorModel {
    double efficiency = 1.0;
    double dark_rate_per_s = 0;
    double dead_time_s = 0;
    double jitter_s = 0;

    void validate() const {
        detail::require(efficiency >= 0 && efficiency <= 1, "detector.efficiency must be in [0, 1]");
        detail::require(dark_rate_per_s >= 0, "detector.dark_rate_per_s must be >= 0");
        detail::require(dead_time_s >= 0, "detector.dead_time_s must be >= 0");
        detail::require(jitter_s >= 0, "detector.jitter_s must be >= 0");
    }

    bool operator==(const DetectorModel&) const = default;
};

/// Injection events for absolute cycles [first_cycle, first_cycle + count).
/// Randomness is keyed by absolute cycle index, so any partition of the
/// cycle range reproduces the same trace.
InjectionTrace generate_injections(const PumpModel& pump, std::uint64_t n_cycles,
                                   rng::RngSpec rng);
InjectionTrace generate_injections_range(const PumpModel& pump, std::uint64_t first_cycle,
                                         std::uint64_t count, rng::RngSpec rng);

/// One exponential lifetime at the total rate per electron, kept with the
/// radiative branching probability; events merged over cycles and sorted.
/// first_cycle offsets the per-cycle random substreams when the trace is a
/// slice of a larger run.
EmissionTrace generate_emissions(const InjectionTrace& injections,
                                 const RecombinationModel& recombination, rng::RngSpec rng,
                                 std::uint64_t first_cycle = 0);

/// Thin by efficiency, smear by jitter, add dark counts, then apply the
/// non-paralyzable dead-time filter. Events pushed outside [0, duration)
/// by jitter are dropped.
DetectionTrace apply_detector(const EmissionTrace& emissions, const DetectorModel& detector,
                              double duration_s, rng::RngSpec rng);

struct ExperimentSpec {
    PumpModel pump;
    RecombinationModel recombination;
    DetectorModel detector;
    std::uint64_t n_cycles = 1;
    int shards = 1;
    double horizon_multiple = 50;  // horizon = n_cycles*T + horizon_multiple/gamma

    double injection_period_s() const { return pump.spec.injection_period_s(); }
    double horizon_s() const {
        return static_cast<double>(n_cycles) * injection_period_s() +
               horizon_multiple / recombination.total_rate_per_s();
    }

    void validate() const {
        pump.validate();
        recombination.validate();
        detector.validate();
        detail::require(n_cycles >= 1, "run.n_cycles must be >= 1");
        detail::require(shards >= 1, "run.shards must be >= 1");
        detail::require(horizon_multiple >= 0, "run.horizon_multiple must be >= 0");
    }
};

struct RunResult {
    InjectionTrace injections;
    EmissionTrace emissions;  // truncated at the horizon
    DetectionTrace detections;
    double horizon_s = 0;

    std::uint64_t electrons_injected = 0;
    std::uint64_t photons_emitted = 0;
    std::uint64_t photons_detected = 0;  // excludes dark counts
    std::uint64_t dark_counts = 0;
};

/// Full pipeline: injections -> emissions -> detector. Cycle generation is
/// sharded across threads; the merged result is bit-identical for any shard
/// count because every draw is keyed by absolute cycle index.
RunResult run_experiment(const ExperimentSpec& spec, rng::RngSpec rng);

}  // namespace sawphoton::mc
