#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "sawphoton/mc.hpp"
#include "sawphoton/physics.hpp"
#include "sawphoton/stats.hpp"

using namespace sawphoton;

namespace {

mc::PumpModel ideal_pump(int n_electrons = 1, int divider = 1, double f = 3e9) {
    mc::PumpModel pump;
    pump.spec.electrons_per_packet = n_electrons;
    pump.spec.divider = divider;
    pump.spec.saw_frequency_hz = f;
    pump.p_miss = 0;
    pump.p_extra = 0;
    return pump;
}

RecombinationModel recomb(double gamma_r, double gamma_nr = 0) {
    RecombinationModel r;
    r.radiative_rate_per_s = gamma_r;
    r.nonradiative_rate_per_s = gamma_nr;
    return r;
}

std::vector<double> delays(const EmissionTrace& em, const InjectionTrace& inj) {
    std::vector<double> out;
    out.reserve(em.size());
    for (const auto& e : em.events)
        out.push_back(e.time_s - inj.cycle_times_s[static_cast<std::size_t>(e.cycle)]);
    return out;
}

}  // namespace

TEST_CASE("deterministic pump: one electron per cycle on the SAW clock") {
    const auto trace = mc::generate_injections(ideal_pump(), 10, {1, 0});
    REQUIRE(trace.n_cycles() == 10);
    const double period = 1.0 / 3e9;
    for (std::size_t i = 0; i < 10; ++i) {
        CHECK(trace.electron_counts[i] == 1);
        CHECK(trace.cycle_times_s[i] == static_cast<double>(i) * period);
    }
    CHECK(trace.times_nondecreasing());
}

TEST_CASE("pump that always misses injects nothing") {
    auto pump = ideal_pump();
    pump.p_miss = 1;
    const auto trace = mc::generate_injections(pump, 100, {1, 0});
    for (auto c : trace.electron_counts) CHECK(c == 0);
    CHECK(trace.total_electrons() == 0);
}

TEST_CASE("pump miss rate shows up in the mean electron count") {
    auto pump = ideal_pump();
    pump.p_miss = 1e-2;
    const std::uint64_t n = 1000000;
    const auto trace = mc::generate_injections(pump, n, {11, 0});
    const double mean =
        static_cast<double>(trace.total_electrons()) / static_cast<double>(n);
    // Bernoulli(0.99): sd of the mean = sqrt(0.99 * 0.01 / n)
    CHECK(std::abs(mean - 0.99) < 3.0 * std::sqrt(0.0099 / static_cast<double>(n)));
}

TEST_CASE("pump errors can add an electron") {
    auto pump = ideal_pump(2);
    pump.p_extra = 0.5;
    const auto trace = mc::generate_injections(pump, 10000, {5, 0});
    std::uint64_t threes = 0;
    for (auto c : trace.electron_counts) {
        CHECK(c >= 2);
        CHECK(c <= 3);
        threes += (c == 3);
    }
    CHECK(std::abs(static_cast<double>(threes) / 10000.0 - 0.5) < 3.0 * 0.005);
}

TEST_CASE("cycle jitter keeps times nondecreasing") {
    auto pump = ideal_pump();
    pump.cycle_jitter_s = 2.0 / 3e9;  // deliberately larger than the period
    const auto trace = mc::generate_injections(pump, 5000, {3, 0});
    CHECK(trace.times_nondecreasing());
    CHECK(trace.n_cycles() == 5000);
}

TEST_CASE("pure radiative recombination emits exactly one photon per electron") {
    const auto inj = mc::generate_injections(ideal_pump(), 1000000, {2, 0});
    const auto em = mc::generate_emissions(inj, recomb(1e10), {2, 0});
    CHECK(em.size() == inj.total_electrons());
    CHECK(em.sorted());

    const auto d = delays(em, inj);
    double sum = 0;
    for (double x : d) {
        REQUIRE(x >= 0.0);
        sum += x;
    }
    const double mean = sum / static_cast<double>(d.size());
    const double sd_of_mean = 1e-10 / std::sqrt(static_cast<double>(d.size()));
    CHECK(std::abs(mean - 1e-10) < 3.0 * sd_of_mean);
}

TEST_CASE("strong non-radiative branching suppresses emission") {
    const auto inj = mc::generate_injections(ideal_pump(), 1000, {4, 0});
    // beta = 1e-9: expect ~1e-6 photons from 1e3 electrons
    const auto em = mc::generate_emissions(inj, recomb(1.0, 1e9 - 1.0), {4, 0});
    CHECK(em.size() == 0);
}

TEST_CASE("non-radiative branching thins emission by beta") {
    const auto inj = mc::generate_injections(ideal_pump(), 200000, {6, 0});
    const auto em = mc::generate_emissions(inj, recomb(3e9, 1e9), {6, 0});
    const double beta = 0.75;
    const double n = static_cast<double>(inj.total_electrons());
    CHECK(std::abs(static_cast<double>(em.size()) - beta * n) <
          3.0 * std::sqrt(n * beta * (1 - beta)));
}

TEST_CASE("emission delays pass a Kolmogorov-Smirnov test against Exponential(gamma)") {
    const double gamma = 1e10;
    const auto inj = mc::generate_injections(ideal_pump(), 100000, {7, 0});
    const auto em = mc::generate_emissions(inj, recomb(gamma), {7, 0});
    auto d = delays(em, inj);
    std::sort(d.begin(), d.end());
    const auto n = static_cast<double>(d.size());
    double ks = 0;
    for (std::size_t i = 0; i < d.size(); ++i) {
        const double cdf = -std::expm1(-gamma * d[i]);
        ks = std::max(ks, std::abs(cdf - static_cast<double>(i) / n));
        ks = std::max(ks, std::abs(static_cast<double>(i + 1) / n - cdf));
    }
    // asymptotic 1% critical value
    CHECK(ks < 1.628 / std::sqrt(n));
}

TEST_CASE("per-cycle emitted-by-t counts reproduce the closed-form pmf") {
    const double gamma = 1e10;
    const int n_electrons = 2;
    const std::uint64_t cycles = 100000;
    const auto inj = mc::generate_injections(ideal_pump(n_electrons, 1, 1e9), cycles, {8, 0});
    const auto em = mc::generate_emissions(inj, recomb(gamma), {8, 0});

    for (double gt : {0.5, 2.0}) {
        const double t = gt / gamma;
        std::vector<std::int64_t> counts(static_cast<std::size_t>(n_electrons) + 1, 0);
        std::vector<int> per_cycle(cycles, 0);
        for (const auto& e : em.events) {
            const auto c = static_cast<std::size_t>(e.cycle);
            if (e.time_s - inj.cycle_times_s[c] <= t) ++per_cycle[c];
        }
        for (int k : per_cycle) ++counts[static_cast<std::size_t>(k)];
        const double tv = stats::distribution_distance(
            counts, physics::emitted_count_pmf(n_electrons, gamma, t));
        CHECK(tv < 0.01);
    }
}

TEST_CASE("transparent detector returns the emission times untouched") {
    const auto inj = mc::generate_injections(ideal_pump(), 5000, {9, 0});
    const auto em = mc::generate_emissions(inj, recomb(1e10), {9, 0});
    const auto det = mc::apply_detector(em, mc::DetectorModel{}, em.duration_s + 1e-9, {9, 0});
    REQUIRE(det.size() == em.size());
    for (std::size_t i = 0; i < det.size(); ++i) {
        CHECK(det.times_s[i] == em.events[i].time_s);
        CHECK(det.is_dark[i] == 0);
    }
}

TEST_CASE("blind detector returns an empty trace") {
    const auto inj = mc::generate_injections(ideal_pump(), 1000, {10, 0});
    const auto em = mc::generate_emissions(inj, recomb(1e10), {10, 0});
    mc::DetectorModel det;
    det.efficiency = 0;
    CHECK(mc::apply_detector(em, det, em.duration_s + 1e-9, {10, 0}).size() == 0);
}

TEST_CASE("efficiency thins the photon stream binomially") {
    const auto inj = mc::generate_injections(ideal_pump(), 1000000, {12, 0});
    const auto em = mc::generate_emissions(inj, recomb(1e10), {12, 0});
    mc::DetectorModel det;
    det.efficiency = 0.5;
    const auto kept = mc::apply_detector(em, det, em.duration_s + 1e-9, {12, 0});
    const double n = static_cast<double>(em.size());
    CHECK(std::abs(static_cast<double>(kept.size()) - 0.5 * n) < 3.0 * std::sqrt(0.25 * n));
}

TEST_CASE("dark counts arrive at the configured rate and are flagged") {
    EmissionTrace empty;
    empty.duration_s = 0;
    mc::DetectorModel det;
    det.dark_rate_per_s = 5e6;
    const double duration = 1e-2;  // expect 5e4 counts
    const auto trace = mc::apply_detector(empty, det, duration, {13, 0});
    CHECK(trace.photon_count() == 0);
    const double expected = det.dark_rate_per_s * duration;
    CHECK(std::abs(static_cast<double>(trace.dark_count()) - expected) <
          3.0 * std::sqrt(expected));
    for (std::size_t i = 0; i < trace.size(); ++i) {
        CHECK(trace.is_dark[i] == 1);
        CHECK(trace.times_s[i] >= 0);
        CHECK(trace.times_s[i] <= duration);
    }
}

TEST_CASE("dead time filter is non-paralyzable and structural") {
    const auto inj = mc::generate_injections(ideal_pump(1, 1, 1e9), 20000, {14, 0});
    const auto em = mc::generate_emissions(inj, recomb(5e9), {14, 0});
    mc::DetectorModel det;
    det.dead_time_s = 3e-9;  // three SAW periods
    const auto trace = mc::apply_detector(em, det, em.duration_s + 1e-9, {14, 0});
    CHECK(trace.respects_dead_time(det.dead_time_s));
    CHECK(trace.size() < em.size());
    CHECK(trace.size() > 0);
}

TEST_CASE("detector jitter keeps the trace sorted and within the duration") {
    const auto inj = mc::generate_injections(ideal_pump(), 20000, {15, 0});
    const auto em = mc::generate_emissions(inj, recomb(1e10), {15, 0});
    mc::DetectorModel det;
    det.jitter_s = 2e-10;
    const double duration = em.duration_s + 1e-8;
    const auto trace = mc::apply_detector(em, det, duration, {15, 0});
    CHECK(std::is_sorted(trace.times_s.begin(), trace.times_s.end()));
    for (double t : trace.times_s) {
        CHECK(t >= 0);
        CHECK(t < duration);
    }
}

TEST_CASE("detector requires the duration to cover the emission trace") {
    const auto inj = mc::generate_injections(ideal_pump(), 10, {16, 0});
    const auto em = mc::generate_emissions(inj, recomb(1e10), {16, 0});
    CHECK_THROWS_AS(mc::apply_detector(em, mc::DetectorModel{}, em.duration_s / 2, {16, 0}),
                    std::invalid_argument);
}

TEST_CASE("merged run is independent of the shard count") {
    mc::ExperimentSpec spec;
    spec.pump = ideal_pump(2, 2, 3e9);
    spec.pump.p_miss = 1e-3;
    spec.pump.p_extra = 1e-3;
    spec.recombination = recomb(1e10, 1e8);
    spec.detector.efficiency = 0.7;
    spec.detector.dark_rate_per_s = 1e6;
    spec.detector.dead_time_s = 1e-10;
    spec.n_cycles = 40000;

    spec.shards = 1;
    const auto one = mc::run_experiment(spec, {123, 0});
    spec.shards = 8;
    const auto eight = mc::run_experiment(spec, {123, 0});
    spec.shards = 3;
    const auto three = mc::run_experiment(spec, {123, 0});

    CHECK(one.injections.cycle_times_s == eight.injections.cycle_times_s);
    CHECK(one.injections.electron_counts == eight.injections.electron_counts);
    REQUIRE(one.emissions.size() == eight.emissions.size());
    for (std::size_t i = 0; i < one.emissions.size(); ++i) {
        CHECK(one.emissions.events[i].time_s == eight.emissions.events[i].time_s);
        CHECK(one.emissions.events[i].cycle == eight.emissions.events[i].cycle);
    }
    CHECK(one.detections.times_s == eight.detections.times_s);
    CHECK(one.detections.is_dark == eight.detections.is_dark);
    CHECK(one.detections.times_s == three.detections.times_s);
}

TEST_CASE("ideal experiment detects exactly N photons per cycle") {
    mc::ExperimentSpec spec;
    spec.pump = ideal_pump(2, 10, 2.5e9);  // gamma*T = 40
    spec.recombination = recomb(1e10);
    spec.n_cycles = 10000;
    const auto run = mc::run_experiment(spec, {31, 0});

    CHECK(run.photons_emitted == 2 * spec.n_cycles);
    CHECK(run.photons_detected == run.photons_emitted);
    CHECK(run.dark_counts == 0);

    const double period = spec.injection_period_s();
    const auto counts = stats::count_in_windows(
        run.detections.times_s, static_cast<double>(spec.n_cycles) * period, period);
    for (auto c : counts.counts) CHECK(c == 2);
}

TEST_CASE("run summary respects conservation and rate bookkeeping") {
    mc::ExperimentSpec spec;
    spec.pump = ideal_pump(1, 2, 3e9);
    spec.pump.p_miss = 5e-3;
    spec.recombination = recomb(1e10, 1e9);  // beta = 10/11
    spec.detector.efficiency = 0.8;
    spec.n_cycles = 200000;
    spec.shards = 4;
    const auto run = mc::run_experiment(spec, {77, 0});

    CHECK(run.photons_emitted <= run.electrons_injected);
    CHECK(run.photons_detected <= run.photons_emitted);
    CHECK(run.detections.size() == run.photons_detected + run.dark_counts);

    // photons ~ Binomial(electrons, beta)
    const double n = static_cast<double>(run.electrons_injected);
    const double beta = spec.recombination.branching_ratio();
    CHECK(std::abs(static_cast<double>(run.photons_emitted) - beta * n) <
          3.0 * std::sqrt(n * beta * (1 - beta)) + 1.0);

    // detections ~ electrons * beta * eta
    const double expected = n * beta * 0.8;
    CHECK(std::abs(static_cast<double>(run.photons_detected) - expected) <
          3.0 * std::sqrt(expected) + 1.0);
}

TEST_CASE("conservation holds across randomized configurations") {
    rng::Stream gen(555, rng::StreamId::sweep);
    for (int trial = 0; trial < 25; ++trial) {
        mc::ExperimentSpec spec;
        spec.pump = ideal_pump(1 + static_cast<int>(gen.next_u32() % 3),
                               1 + static_cast<int>(gen.next_u32() % 8),
                               1e9 * (1 + 4 * gen.uniform()));
        spec.pump.p_miss = 0.2 * gen.uniform();
        spec.pump.p_extra = 0.2 * gen.uniform();
        spec.recombination = recomb(1e10 * (0.2 + gen.uniform()), 1e9 * gen.uniform());
        spec.detector.efficiency = gen.uniform();
        spec.detector.dark_rate_per_s = gen.bernoulli(0.5) ? 1e6 : 0.0;
        spec.detector.dead_time_s = gen.bernoulli(0.5) ? 2e-10 : 0.0;
        spec.n_cycles = 2000;
        spec.shards = 1 + static_cast<int>(gen.next_u32() % 4);

        const auto run = mc::run_experiment(spec, {gen.next_u64(), 0});
        CHECK(run.photons_emitted <= run.electrons_injected);
        CHECK(run.photons_detected <= run.photons_emitted);
        CHECK(run.detections.size() == run.photons_detected + run.dark_counts);
        CHECK(run.emissions.sorted());
        CHECK(run.detections.respects_dead_time(spec.detector.dead_time_s));
        CHECK(run.injections.times_nondecreasing());
        for (double t : run.detections.times_s) {
            CHECK(t >= 0);
            CHECK(t <= run.horizon_s);
        }
    }
}

TEST_CASE("emission timestamps never precede their cycle's injection") {
    mc::ExperimentSpec spec;
    spec.pump = ideal_pump(3, 1, 3e9);
    spec.pump.p_extra = 0.01;
    spec.recombination = recomb(5e9, 5e8);
    spec.n_cycles = 20000;
    const auto run = mc::run_experiment(spec, {41, 0});
    CHECK(run.emissions.sorted());
    for (const auto& e : run.emissions.events) {
        const auto c = static_cast<std::size_t>(e.cycle);
        CHECK(e.time_s >= run.injections.cycle_times_s[c]);
        CHECK(e.time_s < run.horizon_s);
    }
}
