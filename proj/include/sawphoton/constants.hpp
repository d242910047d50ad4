#pragma once

namespace sawphoton::constants {

// CODATA / 2019 SI exact values. Pinned, not configurable.
inline constexpr double elementary_charge = 1.602176634e-19;     // C
inline constexpr double vacuum_permittivity = 8.8541878128e-12;  // F/m

inline constexpr double pi = 3.14159265358979323846;

}  // namespace sawphoton::constants
