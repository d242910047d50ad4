#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sawphoton/device.hpp"
#include "sawphoton/mc.hpp"

namespace sawphoton::design {

/// Per-cycle bad-event probability target.
struct AccuracyTarget {
    double epsilon = 1e-6;

    void validate() const {
        detail::require(epsilon > 0 && epsilon < 1, "target.epsilon must be in (0, 1)");
    }
};

/// Per-injection-window bad-event probabilities, from an exact enumeration
/// of the window's own cycle and its predecessor (spillover source).
/// p_zero_photon is the probability of fewer than N photons in the window
/// (literally zero for the N=1 source); p_multi_photon of more than N.
struct BudgetReport {
    double p_zero_photon = 0;
    double p_multi_photon = 0;
    bool pass_zero = false;
    bool pass_multi = false;
    double epsilon = 0;

    /// Leading-order labelled terms; the exact probabilities above come from
    /// the two-cycle enumeration, not from adding these up.
    struct Contribution {
        std::string label;
        double probability;
    };
    std::vector<Contribution> contributions;

    double contribution(const std::string& label) const;
};

/// Smallest divider M for which f_saw / M stays at or below the maximum
/// injection frequency gamma / ln(1/epsilon).
std::int64_t min_divider(double f_saw_hz, double gamma_per_s, double epsilon);

BudgetReport accuracy_budget(const mc::PumpModel& pump, const RecombinationModel& recombination,
                             const AccuracyTarget& target);

/// One grid axis: a sweepable parameter name and its values. Valid names:
/// f_saw_hz, gamma_r_per_s, gamma_nr_per_s, divider, n_electrons, p_miss,
/// p_extra, efficiency.
struct SweepAxis {
    std::string name;
    std::vector<double> values;
};

struct SweepRequest {
    std::vector<SweepAxis> axes;
    std::uint64_t max_points = 10000;
    bool mc_verify = false;
    std::uint64_t mc_cycles = 100000;
    std::uint64_t mc_seed = 1;
};

struct SweepRow {
    std::vector<double> axis_values;  // aligned with request.axes
    double p_zero_photon = 0;
    double p_multi_photon = 0;
    bool pass_zero = false;
    bool pass_multi = false;
    double max_injection_frequency_hz = 0;
    std::int64_t min_divider = 0;
    double predicted_rate_per_s = 0;  // N f / M * beta * eta
    std::optional<double> mandel_q_mc;
    std::optional<double> g2_ratio_mc;
};

struct SweepResult {
    std::vector<std::string> axis_names;
    std::vector<SweepRow> rows;
    bool has_mc = false;
};

/// Cartesian sweep in lexicographic axis order. Throws before any work if
/// the grid is empty or exceeds request.max_points. Rows are computed
/// concurrently when MC verification is on; ordering is deterministic.
SweepResult sweep(const mc::ExperimentSpec& base, const AccuracyTarget& target,
                  const SweepRequest& request);

}  // namespace sawphoton::design
