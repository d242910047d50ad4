#pragma once

#include <cstdint>
#include <vector>

namespace sawphoton {

/// One row per injection event: when the packet arrived and how many
/// electrons it carried. Times are nondecreasing; with zero jitter,
/// cycle_times[i] is exactly i * T.
struct InjectionTrace {
    std::vector<double> cycle_times_s;
    std::vector<std::uint32_t> electron_counts;

    std::size_t n_cycles() const { return cycle_times_s.size(); }
    std::uint64_t total_electrons() const;
    bool times_nondecreasing() const;
};

/// Photon emission events, sorted by timestamp, each tagged with the cycle
/// that injected its electron.
struct EmissionTrace {
    struct Event {
        double time_s;
        std::int64_t cycle;
    };
    std::vector<Event> events;
    double duration_s = 0;

    std::size_t size() const { return events.size(); }
    bool sorted() const;
};

/// Detector clicks, sorted, with a provenance flag separating dark counts
/// from real photons.
struct DetectionTrace {
    std::vector<double> times_s;
    std::vector<std::uint8_t> is_dark;
    double duration_s = 0;

    std::size_t size() const { return times_s.size(); }
    std::uint64_t photon_count() const;
    std::uint64_t dark_count() const;
    /// Structural dead-time invariant: consecutive gaps >= dead_time.
    bool respects_dead_time(double dead_time_s) const;
};

/// Copy of the trace keeping only events with time < horizon.
EmissionTrace truncated(const EmissionTrace& trace, double horizon_s);

}  // namespace sawphoton
