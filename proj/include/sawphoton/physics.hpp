#pragma once

#include <vector>

#include "sawphoton/device.hpp"

namespace sawphoton {

/// Diagonal of the optical field state: probabilities over photon numbers
/// 0..max_photons a time eval_time after injecting a packet.
struct NumberStateDistribution {
    int max_photons = 0;  // N
    double eval_time_s = 0;
    std::vector<double> probabilities;  // indexed by photon number m = 0..N

    double mean() const;
    double total() const;
};

namespace physics {

/// Plateau current I = N e f.
double quantized_current_a(int electrons_per_cycle, double frequency_hz);

/// Binomial(n, p) pmf over 0..n, stable for n up to at least 1000
/// (mode-anchored multiplicative recurrence, compensated normalization).
std::vector<double> binomial_pmf(int n, double p);

/// Probability of having emitted m photons a time t after injecting N
/// electrons, for m = 0..N: a binomial pmf with per-electron emission
/// probability 1 - exp(-gamma t). Stable up to N = 1000 (mode-anchored
/// multiplicative recurrence, compensated normalization).
NumberStateDistribution emitted_count_pmf(int n_electrons, double gamma_per_s, double t_s);

/// Diagonal weights of the field state rho(t): the |N-n> component carries
/// binom(N,n) exp(-n gamma t) (1 - exp(-gamma t))^(N-n), reported indexed by
/// photon number N-n. Evaluated per element in log space, independently of
/// emitted_count_pmf, so the two routes cross-check each other.
NumberStateDistribution field_state_diagonal(int n_electrons, double gamma_per_s, double t_s);

/// Largest injection frequency keeping the probability of an unfinished
/// emission per cycle at or below epsilon: f = gamma / ln(1/epsilon).
double max_injection_frequency_hz(double gamma_per_s, double epsilon);

/// In-plane potential of a sinusoidal 2D charge density of amplitude rho:
/// psi = rho / (eps0 k (eps + 1)).
double screening_potential_v(double charge_amplitude_c_per_m2, double wavevector_per_m,
                             double dielectric_constant);

/// Inverse of screening_potential_v: charge density amplitude screening a
/// given potential.
double screening_charge_c_per_m2(double potential_v, double wavevector_per_m,
                                 double dielectric_constant);

/// Hole number density (per m^2) that completely screens a SAW of the given
/// amplitude: eps0 k (eps + 1) A / e.
double screening_hole_density_per_m2(double saw_amplitude_v, double wavevector_per_m,
                                     double dielectric_constant);

/// Shortest i-region over which the band drop stays adiabatic relative to
/// the SAW confinement: L = band_drop / (safety * k * A), requiring the
/// junction field to be at most safety times the peak SAW field.
double min_iregion_length_m(double band_drop_v, const SawParams& saw, double safety = 0.25);

}  // namespace physics
}  // namespace sawphoton
