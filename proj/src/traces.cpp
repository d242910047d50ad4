#include "sawphoton/traces.hpp"

#include <algorithm>
#include <numeric>

namespace sawphoton {

std::uint64_t InjectionTrace::total_electrons() const {
    return std::accumulate(electron_counts.begin(), electron_counts.end(), std::uint64_t{0});
}

bool InjectionTrace::times_nondecreasing() const {
    return std::is_sorted(cycle_times_s.begin(), cycle_times_s.end());
}

bool EmissionTrace::sorted() const {
    return std::is_sorted(events.begin(), events.end(),
                          [](const Event& a, const Event& b) { return a.time_s < b.time_s; });
}

std::uint64_t DetectionTrace::photon_count() const {
    std::uint64_t n = 0;
    for (auto d : is_dark) n += (d == 0);
    return n;
}

std::uint64_t DetectionTrace::dark_count() const {
    return size() - photon_count();
}

bool DetectionTrace::respects_dead_time(double dead_time_s) const {
    for (std::size_t i = 1; i < times_s.size(); ++i)
        if (times_s[i] - times_s[i - 1] < dead_time_s) return false;
    return true;
}

EmissionTrace truncated(const EmissionTrace& trace, double horizon_s) {
    EmissionTrace out;
    out.duration_s = horizon_s;
    out.events.reserve(trace.events.size());
    for (const auto& e : trace.events)
        if (e.time_s < horizon_s) out.events.push_back(e);
    return out;
}

}  // namespace sawphoton
