#include "sawphoton/physics.hpp"

#include <cmath>
#include <stdexcept>

#include "sawphoton/constants.hpp"

namespace sawphoton {

namespace {

// Compensated (Kahan) accumulator; keeps 1000-term pmf sums at ~1e-15.
struct KahanSum {
    double sum = 0, carry = 0;
    void add(double x) {
        const double y = x - carry;
        const double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
};

void check_pmf_args(int n, double gamma, double t) {
    if (n < 1) throw std::invalid_argument("pmf: n_electrons must be >= 1");
    if (!(gamma > 0)) throw std::invalid_argument("pmf: gamma must be > 0");
    if (!(t >= 0)) throw std::invalid_argument("pmf: t must be >= 0");
    if (!std::isfinite(gamma * t)) throw std::invalid_argument("pmf: gamma*t must be finite");
}

}  // namespace

double NumberStateDistribution::mean() const {
    KahanSum s;
    for (int m = 0; m <= max_photons; ++m) s.add(m * probabilities[m]);
    return s.sum;
}

double NumberStateDistribution::total() const {
    KahanSum s;
    for (double p : probabilities) s.add(p);
    return s.sum;
}

namespace physics {

double quantized_current_a(int electrons_per_cycle, double frequency_hz) {
    if (electrons_per_cycle < 1) throw std::invalid_argument("quantized_current: N must be >= 1");
    if (!(frequency_hz >= 0)) throw std::invalid_argument("quantized_current: f must be >= 0");
    return electrons_per_cycle * (constants::elementary_charge * frequency_hz);
}

std::vector<double> binomial_pmf(int n, double p) {
    if (n < 0) throw std::invalid_argument("binomial_pmf: n must be >= 0");
    if (!(p >= 0.0) || !(p <= 1.0)) throw std::invalid_argument("binomial_pmf: p must be in [0, 1]");
    std::vector<double> w(n + 1, 0.0);
    const double q = 1.0 - p;
    if (n == 0 || p == 0.0) {
        w[0] = 1.0;
        return w;
    }
    if (q == 0.0) {
        w[n] = 1.0;
        return w;
    }

    // Mode-anchored multiplicative recurrence, normalized by a compensated
    // sum. Avoids the overflow of binom(1000, m) and the underflow of
    // q^1000 in the tails.
    const int mode = std::min(n, static_cast<int>((n + 1) * p));
    w[mode] = 1.0;
    const double up = p / q;  // ratio w[m+1]/w[m] carries (n-m)/(m+1) * p/q
    for (int m = mode; m < n; ++m) w[m + 1] = w[m] * (static_cast<double>(n - m) / (m + 1)) * up;
    const double down = q / p;
    for (int m = mode; m > 0; --m) w[m - 1] = w[m] * (static_cast<double>(m) / (n - m + 1)) * down;

    KahanSum norm;
    for (double v : w) norm.add(v);
    for (double& v : w) v /= norm.sum;
    return w;
}

NumberStateDistribution emitted_count_pmf(int n, double gamma, double t) {
    check_pmf_args(n, gamma, t);
    NumberStateDistribution dist;
    dist.max_photons = n;
    dist.eval_time_s = t;
    dist.probabilities = binomial_pmf(n, -std::expm1(-gamma * t));
    return dist;
}

NumberStateDistribution field_state_diagonal(int n, double gamma, double t) {
    check_pmf_args(n, gamma, t);
    NumberStateDistribution dist;
    dist.max_photons = n;
    dist.eval_time_s = t;
    dist.probabilities.assign(n + 1, 0.0);

    // Weight of |N-n'> for n' = N-m emitted photons, evaluated directly in
    // log space: binom(N, n') e^(-n' gt) s^(N-n'). Long double keeps the
    // log-binomial cancellation below 1e-12 at N = 1000.
    const long double gt = static_cast<long double>(gamma) * t;
    const long double log_s = std::log(-std::expm1(-gt));  // log(1 - e^-gt)
    const long double lg_n1 = std::lgamma(static_cast<long double>(n) + 1);
    for (int m = 0; m <= n; ++m) {
        const int surviving = n - m;  // n' in the state sum
        long double lp = lg_n1 - std::lgamma(static_cast<long double>(surviving) + 1) -
                         std::lgamma(static_cast<long double>(m) + 1);
        lp += surviving * (-gt);
        if (m > 0) lp += m * log_s;  // skip 0 * (-inf) at t = 0
        dist.probabilities[m] = static_cast<double>(std::exp(lp));
    }
    return dist;
}

double max_injection_frequency_hz(double gamma, double epsilon) {
    if (!(gamma > 0)) throw std::invalid_argument("max_injection_frequency: gamma must be > 0");
    if (!(epsilon > 0.0) || !(epsilon < 1.0))
        throw std::domain_error("max_injection_frequency: epsilon must be in (0, 1)");
    return gamma / std::log(1.0 / epsilon);
}

double screening_potential_v(double charge_amplitude, double k, double eps_r) {
    if (!(k > 0)) throw std::domain_error("screening: wavevector must be > 0");
    if (!(eps_r >= 1)) throw std::domain_error("screening: dielectric constant must be >= 1");
    if (!(charge_amplitude >= 0)) throw std::invalid_argument("screening: charge amplitude must be >= 0");
    return charge_amplitude / (constants::vacuum_permittivity * k * (eps_r + 1.0));
}

double screening_charge_c_per_m2(double potential, double k, double eps_r) {
    if (!(k > 0)) throw std::domain_error("screening: wavevector must be > 0");
    if (!(eps_r >= 1)) throw std::domain_error("screening: dielectric constant must be >= 1");
    if (!(potential >= 0)) throw std::invalid_argument("screening: potential must be >= 0");
    return potential * constants::vacuum_permittivity * k * (eps_r + 1.0);
}

double screening_hole_density_per_m2(double amplitude, double k, double eps_r) {
    return screening_charge_c_per_m2(amplitude, k, eps_r) / constants::elementary_charge;
}

double min_iregion_length_m(double band_drop, const SawParams& saw, double safety) {
    if (!(band_drop >= 0)) throw std::invalid_argument("min_iregion_length: band drop must be >= 0");
    if (!(safety > 0.0) || !(safety <= 1.0))
        throw std::domain_error("min_iregion_length: safety must be in (0, 1]");
    const double peak_field = saw.peak_field_v_per_m();
    if (!(peak_field > 0) || !std::isfinite(peak_field))
        throw std::domain_error("min_iregion_length: SAW confinement field is zero");
    return band_drop / (safety * peak_field);
}

}  // namespace physics
}  // namespace sawphoton
