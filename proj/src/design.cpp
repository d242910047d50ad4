#include "sawphoton/design.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <set>
#include <stdexcept>
#include <thread>

#include "sawphoton/physics.hpp"
#include "sawphoton/stats.hpp"

namespace sawphoton::design {

namespace {

struct CountCategory {
    int electrons;
    double weight;
};

// Electron-count outcomes of one injection event: {N-1, N, N+1}.
std::vector<CountCategory> count_categories(const mc::PumpModel& pump) {
    const int n = pump.spec.electrons_per_packet;
    std::vector<CountCategory> cats;
    if (pump.p_miss > 0) cats.push_back({n - 1, pump.p_miss});
    cats.push_back({n, 1.0 - pump.p_miss - pump.p_extra});
    if (pump.p_extra > 0) cats.push_back({n + 1, pump.p_extra});
    return cats;
}

// pmf of photons a single injection event contributes to a window, where
// each of its electrons lands there independently with probability q,
// averaged over the pump's electron-count outcomes.
std::vector<double> window_contribution_pmf(const std::vector<CountCategory>& cats, double q) {
    int max_k = 0;
    for (const auto& c : cats) max_k = std::max(max_k, c.electrons);
    std::vector<double> pmf(max_k + 1, 0.0);
    for (const auto& c : cats) {
        const std::vector<double> b = physics::binomial_pmf(c.electrons, q);
        for (std::size_t i = 0; i < b.size(); ++i) pmf[i] += c.weight * b[i];
    }
    return pmf;
}

std::vector<double> convolve(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> out(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    return out;
}

const std::vector<std::string>& axis_name_order() {
    static const std::vector<std::string> names = {
        "f_saw_hz", "gamma_r_per_s", "gamma_nr_per_s", "divider",
        "n_electrons", "p_miss", "p_extra", "efficiency"};
    return names;
}

void apply_axis(mc::ExperimentSpec& spec, const std::string& name, double value) {
    auto as_int = [&](const char* what) {
        const auto i = static_cast<std::int64_t>(std::llround(value));
        if (static_cast<double>(i) != value)
            throw std::invalid_argument(std::string("sweep: ") + what + " must be an integer");
        return static_cast<int>(i);
    };
    if (name == "f_saw_hz") {
        spec.pump.spec.saw_frequency_hz = value;
    } else if (name == "gamma_r_per_s") {
        spec.recombination.radiative_rate_per_s = value;
    } else if (name == "gamma_nr_per_s") {
        spec.recombination.nonradiative_rate_per_s = value;
    } else if (name == "divider") {
        spec.pump.spec.divider = as_int("divider");
    } else if (name == "n_electrons") {
        spec.pump.spec.electrons_per_packet = as_int("n_electrons");
    } else if (name == "p_miss") {
        spec.pump.p_miss = value;
    } else if (name == "p_extra") {
        spec.pump.p_extra = value;
    } else if (name == "efficiency") {
        spec.detector.efficiency = value;
    } else {
        throw std::invalid_argument("sweep: unknown axis '" + name + "'");
    }
}

SweepRow compute_row(const mc::ExperimentSpec& base, const AccuracyTarget& target,
                     const SweepRequest& request, const std::vector<std::size_t>& index) {
    mc::ExperimentSpec spec = base;
    SweepRow row;
    row.axis_values.reserve(request.axes.size());
    for (std::size_t a = 0; a < request.axes.size(); ++a) {
        const double v = request.axes[a].values[index[a]];
        row.axis_values.push_back(v);
        apply_axis(spec, request.axes[a].name, v);
    }
    spec.validate();

    const BudgetReport budget = accuracy_budget(spec.pump, spec.recombination, target);
    row.p_zero_photon = budget.p_zero_photon;
    row.p_multi_photon = budget.p_multi_photon;
    row.pass_zero = budget.pass_zero;
    row.pass_multi = budget.pass_multi;

    const double gamma = spec.recombination.total_rate_per_s();
    row.max_injection_frequency_hz =
        physics::max_injection_frequency_hz(gamma, target.epsilon);
    row.min_divider = min_divider(spec.pump.spec.saw_frequency_hz, gamma, target.epsilon);
    row.predicted_rate_per_s = spec.pump.spec.electrons_per_packet *
                               spec.pump.spec.saw_frequency_hz / spec.pump.spec.divider *
                               spec.recombination.branching_ratio() * spec.detector.efficiency;
    return row;
}

void add_mc_metrics(SweepRow& row, const mc::ExperimentSpec& base, const SweepRequest& request,
                    std::uint64_t row_index, const std::vector<SweepAxis>& axes) {
    mc::ExperimentSpec spec = base;
    for (std::size_t a = 0; a < axes.size(); ++a)
        apply_axis(spec, axes[a].name, row.axis_values[a]);
    spec.n_cycles = request.mc_cycles;
    const mc::RunResult run = mc::run_experiment(spec, {request.mc_seed, row_index});

    const double period = spec.injection_period_s();
    const double span = static_cast<double>(spec.n_cycles) * period;
    const std::uint64_t window_cycles =
        std::max<std::uint64_t>(1, std::min<std::uint64_t>(100, spec.n_cycles / 10));
    try {
        const auto hist = stats::count_in_windows(run.detections.times_s, span,
                                                  static_cast<double>(window_cycles) * period);
        row.mandel_q_mc = stats::mandel_q(hist);
    } catch (const std::invalid_argument&) {
        row.mandel_q_mc.reset();  // undefined for empty traces
    }
    try {
        const auto g2 =
            stats::g2_histogram(run.detections.times_s, period / 50, 4 * period);
        const auto peaks = stats::pulse_peak_areas(g2, period);
        if (peaks.mean_side_peak_area > 0) row.g2_ratio_mc = peaks.ratio;
    } catch (const std::invalid_argument&) {
        row.g2_ratio_mc.reset();
    }
}

}  // namespace

double BudgetReport::contribution(const std::string& label) const {
    for (const auto& c : contributions)
        if (c.label == label) return c.probability;
    throw std::invalid_argument("budget: no contribution labelled '" + label + "'");
}

std::int64_t min_divider(double f_saw_hz, double gamma_per_s, double epsilon) {
    if (!(f_saw_hz > 0)) throw std::invalid_argument("min_divider: f_saw must be > 0");
    const double f_max = physics::max_injection_frequency_hz(gamma_per_s, epsilon);
    const double x = f_saw_hz / f_max;
    // Tolerant ceiling: a boundary that lands on an integer up to rounding
    // noise must not be pushed to the next divider.
    const auto m = static_cast<std::int64_t>(std::ceil(x * (1.0 - 1e-12)));
    return std::max<std::int64_t>(1, m);
}

BudgetReport accuracy_budget(const mc::PumpModel& pump, const RecombinationModel& recombination,
                             const AccuracyTarget& target) {
    pump.validate();
    recombination.validate();
    target.validate();

    const int n = pump.spec.electrons_per_packet;
    const double period = pump.spec.injection_period_s();
    const double gamma = recombination.total_rate_per_s();
    const double beta = recombination.branching_ratio();
    const double survive = std::exp(-gamma * period);       // E
    const double emit_in_period = -std::expm1(-gamma * period);  // 1 - E

    // Per-electron probabilities of producing a photon inside a given
    // window: from the window's own injection, and from the previous one
    // (emission delayed by one period).
    const double q_own = beta * emit_in_period;
    const double q_next = beta * survive * emit_in_period;

    // Exact two-cycle enumeration: photon count in a steady-state window is
    // the sum of the own-cycle and previous-cycle contributions. Cycles two
    // or more back contribute O(E^2) and are outside this truncation.
    const auto cats = count_categories(pump);
    const std::vector<double> window_pmf =
        convolve(window_contribution_pmf(cats, q_next), window_contribution_pmf(cats, q_own));

    BudgetReport report;
    report.epsilon = target.epsilon;
    for (std::size_t c = 0; c < window_pmf.size(); ++c) {
        if (static_cast<int>(c) < n) report.p_zero_photon += window_pmf[c];
        if (static_cast<int>(c) > n) report.p_multi_photon += window_pmf[c];
    }
    report.pass_zero = report.p_zero_photon <= target.epsilon;
    report.pass_multi = report.p_multi_photon <= target.epsilon;

    report.contributions = {
        {"pump_miss", pump.p_miss},
        {"pump_extra", pump.p_extra * std::pow(q_own, n + 1)},
        {"nonradiative_loss", 1.0 - std::pow(beta, n)},
        {"late_emission_spillover", 1.0 - std::pow(1.0 - beta * survive, n)},
    };
    return report;
}

SweepResult sweep(const mc::ExperimentSpec& base, const AccuracyTarget& target,
                  const SweepRequest& request) {
    base.validate();
    target.validate();

    std::set<std::string> seen;
    for (const auto& axis : request.axes) {
        if (std::find(axis_name_order().begin(), axis_name_order().end(), axis.name) ==
            axis_name_order().end())
            throw std::invalid_argument("sweep: unknown axis '" + axis.name + "'");
        if (!seen.insert(axis.name).second)
            throw std::invalid_argument("sweep: duplicate axis '" + axis.name + "'");
    }

    std::uint64_t total = 1;
    for (const auto& axis : request.axes) {
        if (axis.values.empty()) throw std::invalid_argument("sweep: grid has 0 points");
        // total * size > cap, tested without overflow
        if (total > request.max_points / axis.values.size())
            throw std::invalid_argument("sweep: grid exceeds max_points cap");
        total *= axis.values.size();
    }

    SweepResult result;
    result.has_mc = request.mc_verify;
    for (const auto& axis : request.axes) result.axis_names.push_back(axis.name);

    // Lexicographic odometer over axis indices.
    std::vector<std::vector<std::size_t>> indices;
    indices.reserve(total);
    std::vector<std::size_t> index(request.axes.size(), 0);
    for (std::uint64_t r = 0; r < total; ++r) {
        indices.push_back(index);
        for (std::size_t a = index.size(); a-- > 0;) {
            if (++index[a] < request.axes[a].values.size()) break;
            index[a] = 0;
        }
    }

    result.rows.resize(total);
    for (std::uint64_t r = 0; r < total; ++r)
        result.rows[r] = compute_row(base, target, request, indices[r]);

    if (request.mc_verify) {
        // Rows are independent; each owns RNG stream block mc_seed/row.
        const unsigned workers =
            std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(),
                                            static_cast<unsigned>(total)));
        std::vector<std::future<void>> futures;
        futures.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            futures.push_back(std::async(std::launch::async, [&, w] {
                for (std::uint64_t r = w; r < total; r += workers)
                    add_mc_metrics(result.rows[r], base, request, r, request.axes);
            }));
        }
        for (auto& f : futures) f.get();
    }
    return result;
}

}  // namespace sawphoton::design
