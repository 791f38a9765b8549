/// @file units.hpp
/// @brief Conversion factors into atomic units (hartree, bohr, electron mass, a.u. time).

#pragma once

#include <string_view>

namespace naf::units {

inline constexpr double hartree_per_ev = 1.0 / 27.211386245988;
inline constexpr double hartree_per_wavenumber = 1.0 / 219474.6313632;
inline constexpr double au_time_per_fs = 41.341374575751;
inline constexpr double boltzmann = 3.166811563e-6; ///< hartree per kelvin
inline constexpr double speed_of_light = 137.036;

/// @brief Factor converting an energy given in @p unit ("au", "hartree", "ev", "cm-1") to hartree.
double energy_factor(std::string_view unit);

/// @brief Factor converting a time given in @p unit ("au", "fs") to atomic units.
double time_factor(std::string_view unit);

/// @brief Inverse temperature in 1/hartree.
inline double beta_from_kelvin(double kelvin) { return 1.0 / (boltzmann * kelvin); }

} // namespace naf::units
