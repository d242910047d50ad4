#include "sawphoton/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sawphoton::stats {

namespace {

std::vector<double> times_of(const EmissionTrace& trace) {
    std::vector<double> t;
    t.reserve(trace.size());
    for (const auto& e : trace.events) t.push_back(e.time_s);
    return t;
}

}  // namespace

double CountHistogram::mean() const {
    if (counts.empty()) throw std::invalid_argument("count histogram is empty");
    double sum = 0;
    for (auto c : counts) sum += static_cast<double>(c);
    return sum / static_cast<double>(counts.size());
}

double CountHistogram::sample_variance() const {
    if (counts.size() < 2) throw std::invalid_argument("sample variance needs >= 2 windows");
    const double m = mean();
    double ss = 0;
    for (auto c : counts) {
        const double d = static_cast<double>(c) - m;
        ss += d * d;
    }
    return ss / static_cast<double>(counts.size() - 1);
}

CountHistogram count_in_windows(std::span<const double> times, double duration_s,
                                double window_s) {
    if (!(window_s > 0)) throw std::invalid_argument("count_in_windows: window must be > 0");
    if (window_s > duration_s)
        throw std::invalid_argument("count_in_windows: window exceeds trace duration");
    // Rescue ratios that sit one rounding error below an integer.
    const double ratio = duration_s / window_s;
    const auto n_windows = static_cast<std::size_t>(ratio * (1.0 + 1e-12));
    CountHistogram hist;
    hist.window_s = window_s;
    hist.counts.assign(n_windows, 0);
    for (double t : times) {
        if (t < 0) continue;
        const auto idx = static_cast<std::size_t>(t / window_s);
        if (idx < n_windows) ++hist.counts[idx];
    }
    return hist;
}

CountHistogram count_in_windows(const DetectionTrace& trace, double window_s) {
    return count_in_windows(trace.times_s, trace.duration_s, window_s);
}

CountHistogram count_in_windows(const EmissionTrace& trace, double window_s) {
    return count_in_windows(times_of(trace), trace.duration_s, window_s);
}

CountHistogram merge(const CountHistogram& a, const CountHistogram& b) {
    if (a.window_s != b.window_s)
        throw std::invalid_argument("merge: count histograms have different windows");
    CountHistogram out = a;
    out.counts.insert(out.counts.end(), b.counts.begin(), b.counts.end());
    return out;
}

double mandel_q(const CountHistogram& hist) {
    return fano_factor(hist) - 1.0;
}

double fano_factor(const CountHistogram& hist) {
    const double m = hist.mean();
    if (!(m > 0)) throw std::invalid_argument("fano/mandel: mean count is zero");
    return hist.sample_variance() / m;
}

std::uint64_t CorrelationHistogram::total_pairs() const {
    std::uint64_t n = 0;
    for (auto b : bins) n += static_cast<std::uint64_t>(b);
    return n;
}

CorrelationHistogram g2_histogram_partial(std::span<const double> times, std::size_t start_lo,
                                          std::size_t start_hi, double bin_width_s,
                                          double max_delay_s) {
    if (!(bin_width_s > 0) || !(max_delay_s > bin_width_s))
        throw std::invalid_argument("g2_histogram: need 0 < bin_width < max_delay");
    CorrelationHistogram hist;
    hist.bin_width_s = bin_width_s;
    hist.max_delay_s = max_delay_s;
    hist.total_events = times.size();
    const double ratio = max_delay_s / bin_width_s;
    const auto n_bins = static_cast<std::size_t>(std::ceil(ratio * (1.0 - 1e-12)));
    hist.bins.assign(n_bins, 0);

    start_hi = std::min(start_hi, times.size());
    for (std::size_t i = start_lo; i < start_hi; ++i) {
        for (std::size_t j = i + 1; j < times.size(); ++j) {
            const double dt = times[j] - times[i];
            if (dt >= max_delay_s) break;
            if (dt < 0) continue;  // tolerates unsorted input instead of miscounting
            const auto bin = static_cast<std::size_t>(dt / bin_width_s);
            if (bin < n_bins) ++hist.bins[bin];
        }
    }
    return hist;
}

CorrelationHistogram g2_histogram(std::span<const double> times, double bin_width_s,
                                  double max_delay_s) {
    return g2_histogram_partial(times, 0, times.size(), bin_width_s, max_delay_s);
}

CorrelationHistogram merge(const CorrelationHistogram& a, const CorrelationHistogram& b) {
    if (a.bin_width_s != b.bin_width_s || a.max_delay_s != b.max_delay_s ||
        a.total_events != b.total_events)
        throw std::invalid_argument("merge: correlation histograms are not partials of one trace");
    CorrelationHistogram out = a;
    for (std::size_t i = 0; i < out.bins.size(); ++i) out.bins[i] += b.bins[i];
    return out;
}

PulsePeakAreas pulse_peak_areas(const CorrelationHistogram& g2, double period_s) {
    if (!(period_s > 2 * g2.bin_width_s))
        throw std::invalid_argument("pulse_peak_areas: period must exceed two bins");
    if (!(g2.max_delay_s >= 3 * period_s))
        throw std::invalid_argument("pulse_peak_areas: max_delay must cover >= 3 periods");

    PulsePeakAreas out;
    out.zero_window_s = period_s / 2;
    out.side_window_s = period_s;

    // Bins are assigned to windows by their centers. Effective window
    // lengths are counted in bins so ragged edges do not bias the ratio.
    std::int64_t zero_area = 0;
    std::size_t zero_bins = 0;
    std::vector<std::int64_t> side_area;
    std::vector<std::size_t> side_bins;
    for (std::size_t b = 0; b < g2.bins.size(); ++b) {
        const double center = (static_cast<double>(b) + 0.5) * g2.bin_width_s;
        if (center < period_s / 2) {
            zero_area += g2.bins[b];
            ++zero_bins;
            continue;
        }
        const auto k = static_cast<std::size_t>(std::floor(center / period_s + 0.5));
        if (k < 1) continue;
        const double lo = (static_cast<double>(k) - 0.5) * period_s;
        const double hi = (static_cast<double>(k) + 0.5) * period_s;
        if (hi > g2.max_delay_s) continue;  // incomplete trailing window
        if (center < lo || center >= hi) continue;
        if (k > side_area.size()) {
            side_area.resize(k, 0);
            side_bins.resize(k, 0);
        }
        side_area[k - 1] += g2.bins[b];
        ++side_bins[k - 1];
    }
    if (side_area.empty())
        throw std::invalid_argument("pulse_peak_areas: no complete side peak within max_delay");

    out.zero_peak_area = static_cast<double>(zero_area);
    out.n_side_peaks = static_cast<int>(side_area.size());
    double side_total = 0;
    double density_sum = 0;
    for (std::size_t k = 0; k < side_area.size(); ++k) {
        side_total += static_cast<double>(side_area[k]);
        density_sum += static_cast<double>(side_area[k]) /
                       (static_cast<double>(side_bins[k]) * g2.bin_width_s);
    }
    out.mean_side_peak_area = side_total / static_cast<double>(side_area.size());

    const double zero_density =
        static_cast<double>(zero_area) / (static_cast<double>(zero_bins) * g2.bin_width_s);
    const double side_density = density_sum / static_cast<double>(side_area.size());
    out.ratio = zero_density / side_density;
    return out;
}

double PhaseHistogram::visibility() const {
    const auto [mn, mx] = std::minmax_element(bins.begin(), bins.end());
    const double lo = static_cast<double>(*mn);
    const double hi = static_cast<double>(*mx);
    return (hi - lo) / (hi + lo);
}

PhaseHistogram phase_correlation(std::span<const double> times, double period_s, int n_bins) {
    if (!(period_s > 0)) throw std::invalid_argument("phase_correlation: period must be > 0");
    if (n_bins < 2) throw std::invalid_argument("phase_correlation: need >= 2 bins");
    if (times.empty()) throw std::invalid_argument("phase_correlation: empty input");
    PhaseHistogram hist;
    hist.period_s = period_s;
    hist.bins.assign(static_cast<std::size_t>(n_bins), 0);
    for (double t : times) {
        double phase = std::fmod(t, period_s);
        if (phase < 0) phase += period_s;
        auto bin = static_cast<std::size_t>(phase / period_s * n_bins);
        if (bin >= hist.bins.size()) bin = hist.bins.size() - 1;  // fp edge
        ++hist.bins[bin];
    }
    return hist;
}

PhaseHistogram merge(const PhaseHistogram& a, const PhaseHistogram& b) {
    if (a.period_s != b.period_s || a.bins.size() != b.bins.size())
        throw std::invalid_argument("merge: phase histograms have different binning");
    PhaseHistogram out = a;
    for (std::size_t i = 0; i < out.bins.size(); ++i) out.bins[i] += b.bins[i];
    return out;
}

double tv_distance(std::span<const double> p, std::span<const double> q) {
    if (p.size() != q.size())
        throw std::invalid_argument("tv_distance: distributions have different support");
    double acc = 0;
    for (std::size_t i = 0; i < p.size(); ++i) acc += std::abs(p[i] - q[i]);
    return acc / 2;
}

double distribution_distance(std::span<const std::int64_t> empirical_counts,
                             const NumberStateDistribution& analytic) {
    if (empirical_counts.size() != analytic.probabilities.size())
        throw std::invalid_argument("distribution_distance: support mismatch");
    double total = 0;
    for (auto c : empirical_counts) total += static_cast<double>(c);
    if (!(total > 0)) throw std::invalid_argument("distribution_distance: empty counts");
    std::vector<double> empirical(empirical_counts.size());
    for (std::size_t i = 0; i < empirical.size(); ++i)
        empirical[i] = static_cast<double>(empirical_counts[i]) / total;
    return tv_distance(empirical, analytic.probabilities);
}

}  // namespace sawphoton::stats
