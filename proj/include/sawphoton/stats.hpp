#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "sawphoton/physics.hpp"
#include "sawphoton/traces.hpp"

namespace sawphoton::stats {

/// Event counts over consecutive equal windows; the trailing partial window
/// is discarded.
struct CountHistogram {
    double window_s = 0;
    std::vector<std::int64_t> counts;

    std::size_t n_windows() const { return counts.size(); }
    double mean() const;
    /// Unbiased (n-1) sample variance.
    double sample_variance() const;
};

CountHistogram count_in_windows(std::span<const double> times, double duration_s,
                                double window_s);
CountHistogram count_in_windows(const DetectionTrace& trace, double window_s);
CountHistogram count_in_windows(const EmissionTrace& trace, double window_s);

/// Windows from consecutive shards concatenate; window lengths must match.
CountHistogram merge(const CountHistogram& a, const CountHistogram& b);

/// Mandel Q = Var/mean - 1; negative is sub-Poissonian.
double mandel_q(const CountHistogram& hist);
/// Fano factor Var/mean; satisfies fano - mandel_q == 1 exactly.
double fano_factor(const CountHistogram& hist);

/// Multi-stop autocorrelogram: every ordered pair (i < j) with
/// t_j - t_i < max_delay lands in bin floor(dt / bin_width).
struct CorrelationHistogram {
    double bin_width_s = 0;
    double max_delay_s = 0;
    std::vector<std::int64_t> bins;
    std::uint64_t total_events = 0;

    std::uint64_t total_pairs() const;
};

CorrelationHistogram g2_histogram(std::span<const double> times, double bin_width_s,
                                  double max_delay_s);
/// Pairs whose *first* member index lies in [start_lo, start_hi); summing
/// over a partition of start indices reproduces the full histogram exactly.
CorrelationHistogram g2_histogram_partial(std::span<const double> times, std::size_t start_lo,
                                          std::size_t start_hi, double bin_width_s,
                                          double max_delay_s);
CorrelationHistogram merge(const CorrelationHistogram& a, const CorrelationHistogram& b);

/// Pulsed antibunching figure of merit. Areas are raw pair counts; the
/// ratio compares per-delay densities (the zero window [0, T/2) is half as
/// long as the side windows [kT - T/2, kT + T/2)), so a Poissonian stream
/// gives 1 and an ideal n-photon pulse train gives (n-1)/n.
struct PulsePeakAreas {
    double zero_peak_area = 0;
    double mean_side_peak_area = 0;
    double ratio = 0;
    int n_side_peaks = 0;
    double zero_window_s = 0;  // [0, period/2)
    double side_window_s = 0;  // kT +- period/2
};

PulsePeakAreas pulse_peak_areas(const CorrelationHistogram& g2, double period_s);

/// Histogram of t mod period. Visibility (max-min)/(max+min) of the bin
/// counts measures how strongly events lock to the drive phase.
struct PhaseHistogram {
    double period_s = 0;
    std::vector<std::int64_t> bins;

    double visibility() const;
};

PhaseHistogram phase_correlation(std::span<const double> times, double period_s, int n_bins);
PhaseHistogram merge(const PhaseHistogram& a, const PhaseHistogram& b);

/// Total-variation distance between two distributions on the same support.
double tv_distance(std::span<const double> p, std::span<const double> q);

/// TV distance between an empirical count vector (index = photon number)
/// and an analytic number-state distribution.
double distribution_distance(std::span<const std::int64_t> empirical_counts,
                             const NumberStateDistribution& analytic);

}  // namespace sawphoton::stats
