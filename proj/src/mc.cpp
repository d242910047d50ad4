#include "sawphoton/mc.hpp"

#include <algorithm>
#include <future>
#include <stdexcept>
#include <utility>
#include <vector>

namespace sawphoton::mc {

namespace {

// Purpose slots within one experiment; rng.stream_index selects a block of
// eight so independent experiments (e.g. sweep rows) never share streams.
std::uint64_t slot(rng::RngSpec spec, rng::StreamId id) {
    return spec.stream_index * 8 + static_cast<std::uint64_t>(id);
}

rng::RngSpec stream_for(rng::RngSpec spec, rng::StreamId id) {
    return {spec.master_seed, slot(spec, id)};
}

// Splits [0, n) into at most `parts` contiguous ranges and runs fn on each,
// in parallel when parts > 1. Results are collected in range order.
template <typename T, typename Fn>
std::vector<T> sharded(std::uint64_t n, int parts, Fn&& fn) {
    const auto p = static_cast<std::uint64_t>(std::max(1, parts));
    std::vector<std::future<T>> futures;
    futures.reserve(p);
    for (std::uint64_t s = 0; s < p; ++s) {
        const std::uint64_t lo = n * s / p;
        const std::uint64_t hi = n * (s + 1) / p;
        futures.push_back(std::async(p > 1 ? std::launch::async : std::launch::deferred,
                                     [&fn, lo, hi] { return fn(lo, hi); }));
    }
    std::vector<T> out;
    out.reserve(p);
    for (auto& f : futures) out.push_back(f.get());
    return out;
}

}  // namespace

InjectionTrace generate_injections_range(const PumpModel& pump, std::uint64_t first_cycle,
                                         std::uint64_t count, rng::RngSpec rng) {
    pump.validate();
    const double period = pump.spec.injection_period_s();
    const int n = pump.spec.electrons_per_packet;
    const double p_lo = pump.p_miss;
    const double p_hi = pump.p_miss + pump.p_extra;

    InjectionTrace trace;
    trace.cycle_times_s.resize(count);
    trace.electron_counts.resize(count);
    const auto stream = stream_for(rng, rng::StreamId::injection);
    for (std::uint64_t i = 0; i < count; ++i) {
        const std::uint64_t cycle = first_cycle + i;
        rng::Stream st(stream, cycle);
        const double u = st.uniform();
        std::uint32_t electrons = static_cast<std::uint32_t>(n);
        if (u < p_lo) {
            electrons = static_cast<std::uint32_t>(n - 1);
        } else if (u < p_hi) {
            electrons = static_cast<std::uint32_t>(n + 1);
        }
        double t = static_cast<double>(cycle) * period;
        if (pump.cycle_jitter_s > 0) t += pump.cycle_jitter_s * st.gaussian();
        trace.cycle_times_s[i] = t;
        trace.electron_counts[i] = electrons;
    }
    return trace;
}

InjectionTrace generate_injections(const PumpModel& pump, std::uint64_t n_cycles,
                                   rng::RngSpec rng) {
    InjectionTrace trace = generate_injections_range(pump, 0, n_cycles, rng);
    // Jitter big enough to reorder cycles: relabel events in time order so
    // the nondecreasing-times invariant holds (cycles are i.i.d., so this
    // preserves the distribution).
    if (pump.cycle_jitter_s > 0 && !trace.times_nondecreasing()) {
        std::vector<std::size_t> order(trace.n_cycles());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return trace.cycle_times_s[a] < trace.cycle_times_s[b];
        });
        InjectionTrace sorted;
        sorted.cycle_times_s.reserve(order.size());
        sorted.electron_counts.reserve(order.size());
        for (std::size_t i : order) {
            sorted.cycle_times_s.push_back(trace.cycle_times_s[i]);
            sorted.electron_counts.push_back(trace.electron_counts[i]);
        }
        trace = std::move(sorted);
    }
    return trace;
}

EmissionTrace generate_emissions(const InjectionTrace& injections,
                                 const RecombinationModel& recombination, rng::RngSpec rng,
                                 std::uint64_t first_cycle) {
    recombination.validate();
    const double total_rate = recombination.total_rate_per_s();
    const double beta = recombination.branching_ratio();
    const auto stream = stream_for(rng, rng::StreamId::emission);

    EmissionTrace trace;
    for (std::size_t i = 0; i < injections.n_cycles(); ++i) {
        const std::uint64_t cycle = first_cycle + i;
        rng::Stream st(stream, cycle);
        const double t0 = injections.cycle_times_s[i];
        for (std::uint32_t e = 0; e < injections.electron_counts[i]; ++e) {
            const double lifetime = st.exponential(total_rate);
            const bool radiative = st.bernoulli(beta);
            if (radiative)
                trace.events.push_back({t0 + lifetime, static_cast<std::int64_t>(cycle)});
        }
    }
    std::stable_sort(trace.events.begin(), trace.events.end(),
                     [](const EmissionTrace::Event& a, const EmissionTrace::Event& b) {
                         return a.time_s < b.time_s;
                     });
    trace.duration_s = trace.events.empty() ? 0.0 : trace.events.back().time_s;
    return trace;
}

DetectionTrace apply_detector(const EmissionTrace& emissions, const DetectorModel& detector,
                              double duration_s, rng::RngSpec rng) {
    detector.validate();
    if (duration_s < emissions.duration_s)
        throw std::invalid_argument("apply_detector: duration must cover the emission trace");

    struct Click {
        double t;
        std::uint8_t dark;
    };
    std::vector<Click> clicks;
    clicks.reserve(emissions.size());

    rng::Stream ph(stream_for(rng, rng::StreamId::detector));
    for (const auto& ev : emissions.events) {
        if (!ph.bernoulli(detector.efficiency)) continue;
        double t = ev.time_s;
        if (detector.jitter_s > 0) t += detector.jitter_s * ph.gaussian();
        if (t >= 0 && t < duration_s) clicks.push_back({t, 0});
    }

    if (detector.dark_rate_per_s > 0) {
        rng::Stream dk(stream_for(rng, rng::StreamId::dark_counts));
        double t = dk.exponential(detector.dark_rate_per_s);
        while (t < duration_s) {
            clicks.push_back({t, 1});
            t += dk.exponential(detector.dark_rate_per_s);
        }
    }

    std::stable_sort(clicks.begin(), clicks.end(),
                     [](const Click& a, const Click& b) { return a.t < b.t; });

    DetectionTrace trace;
    trace.duration_s = duration_s;
    double last_kept = -1.0;
    bool any = false;
    for (const Click& c : clicks) {
        if (any && c.t - last_kept < detector.dead_time_s) continue;  // non-paralyzable
        trace.times_s.push_back(c.t);
        trace.is_dark.push_back(c.dark);
        last_kept = c.t;
        any = true;
    }
    return trace;
}

RunResult run_experiment(const ExperimentSpec& spec, rng::RngSpec rng) {
    spec.validate();
    const std::uint64_t n = spec.n_cycles;

    // Phase 1: injections, sharded over cycle ranges.
    auto inj_parts = sharded<InjectionTrace>(n, spec.shards, [&](std::uint64_t lo, std::uint64_t hi) {
        return generate_injections_range(spec.pump, lo, hi - lo, rng);
    });
    InjectionTrace injections;
    injections.cycle_times_s.reserve(n);
    injections.electron_counts.reserve(n);
    for (auto& part : inj_parts) {
        injections.cycle_times_s.insert(injections.cycle_times_s.end(), part.cycle_times_s.begin(),
                                        part.cycle_times_s.end());
        injections.electron_counts.insert(injections.electron_counts.end(),
                                          part.electron_counts.begin(), part.electron_counts.end());
    }
    if (spec.pump.cycle_jitter_s > 0 && !injections.times_nondecreasing()) {
        // Same global relabel as generate_injections; must happen after the
        // merge so the result is independent of the shard layout.
        injections = generate_injections(spec.pump, n, rng);
    }

    // Phase 2: emissions, sharded over rows of the merged trace.
    auto em_parts =
        sharded<std::vector<EmissionTrace::Event>>(n, spec.shards, [&](std::uint64_t lo, std::uint64_t hi) {
            InjectionTrace slice;
            slice.cycle_times_s.assign(injections.cycle_times_s.begin() + lo,
                                       injections.cycle_times_s.begin() + hi);
            slice.electron_counts.assign(injections.electron_counts.begin() + lo,
                                         injections.electron_counts.begin() + hi);
            return generate_emissions(slice, spec.recombination, rng, lo).events;
        });
    EmissionTrace emissions;
    for (auto& part : em_parts)
        emissions.events.insert(emissions.events.end(), part.begin(), part.end());
    std::stable_sort(emissions.events.begin(), emissions.events.end(),
                     [](const EmissionTrace::Event& a, const EmissionTrace::Event& b) {
                         return a.time_s < b.time_s;
                     });
    emissions.duration_s = emissions.events.empty() ? 0.0 : emissions.events.back().time_s;

    RunResult result;
    result.horizon_s = spec.horizon_s();
    result.injections = std::move(injections);
    result.emissions = truncated(emissions, result.horizon_s);
    result.detections =
        apply_detector(result.emissions, spec.detector, result.horizon_s, rng);

    result.electrons_injected = result.injections.total_electrons();
    result.photons_emitted = result.emissions.size();
    result.photons_detected = result.detections.photon_count();
    result.dark_counts = result.detections.dark_count();
    return result;
}

}  // namespace sawphoton::mc
