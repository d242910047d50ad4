#pragma once

#include <stdexcept>
#include <string>

#include "sawphoton/constants.hpp"

namespace sawphoton {

namespace detail {

inline void require(bool ok, const std::string& what) {
    if (!ok) throw std::invalid_argument(what);
}

}  // namespace detail

/// Surface acoustic wave drive: frequency f, sound velocity v, potential
/// amplitude A. Wavelength and wavevector are derived, never stored.
struct SawParams {
    double frequency_hz = 3.0e9;       // f, order GHz
    double sound_velocity_mps = 3000;  // v, order 1e3 m/s in III-V materials
    double amplitude_v = 0.030;        // A, 30 mV gives a well quantized current

    double wavelength_m() const { return sound_velocity_mps / frequency_hz; }
    double wavevector_per_m() const { return 2.0 * constants::pi / wavelength_m(); }
    /// Peak in-plane electric field of the travelling potential, k*A.
    double peak_field_v_per_m() const { return wavevector_per_m() * amplitude_v; }

    void validate() const {
        detail::require(frequency_hz > 0, "saw.frequency_hz must be > 0");
        detail::require(sound_velocity_mps > 0, "saw.sound_velocity_mps must be > 0");
        detail::require(amplitude_v > 0, "saw.amplitude_v must be > 0");
    }

    bool operator==(const SawParams&) const = default;
};

/// Lateral n-i-p junction parameters.
struct JunctionParams {
    double band_drop_v = 1.5;          // linear potential drop across the i-region
    double dielectric_constant = 12;   // GaAs
    double hole_density_per_m2 = 1e16; // typical 2DHG density, ~1e12 cm^-2
    double iregion_length_m = 50e-6;

    void validate() const {
        detail::require(band_drop_v > 0, "junction.band_drop_v must be > 0");
        detail::require(dielectric_constant >= 1, "junction.dielectric_constant must be >= 1");
        detail::require(hole_density_per_m2 > 0, "junction.hole_density_per_m2 must be > 0");
        detail::require(iregion_length_m > 0, "junction.iregion_length_m must be > 0");
    }

    bool operator==(const JunctionParams&) const = default;
};

/// Quantized injection: N electrons per packet, one packet every M SAW
/// cycles, so the injection period is T = M / f.
struct InjectionSpec {
    int electrons_per_packet = 1;  // N
    int divider = 1;               // M
    double saw_frequency_hz = 3.0e9;

    double injection_period_s() const { return divider / saw_frequency_hz; }

    void validate() const {
        detail::require(electrons_per_packet >= 1, "injection.electrons_per_packet must be >= 1");
        detail::require(divider >= 1, "injection.divider must be >= 1");
        detail::require(saw_frequency_hz > 0, "injection.saw_frequency_hz must be > 0");
    }

    bool operator==(const InjectionSpec&) const = default;
};

/// Electron-hole recombination rates. The total rate gamma governs the
/// exponential lifetime; the branching ratio beta = gamma_r / gamma is the
/// probability that a recombination is radiative.
struct RecombinationModel {
    double radiative_rate_per_s = 1e10;  // gamma_r, lifetime of order 100 ps
    double nonradiative_rate_per_s = 0;  // gamma_nr

    double total_rate_per_s() const { return radiative_rate_per_s + nonradiative_rate_per_s; }
    double branching_ratio() const { return radiative_rate_per_s / total_rate_per_s(); }

    void validate() const {
        detail::require(radiative_rate_per_s > 0, "recombination.radiative_rate_per_s must be > 0");
        detail::require(nonradiative_rate_per_s >= 0, "recombination.nonradiative_rate_per_s must be >= 0");
    }

    bool operator==(const RecombinationModel&) const = default;
};

}  // namespace sawphoton
