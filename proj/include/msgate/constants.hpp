// constants.hpp — physical constants and unit helpers
#pragma once

#include <cmath>
#include <complex>

namespace msgate {

using cplx = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double two_pi = 2.0 * pi;

inline constexpr double hbar = 1.054571817e-34;          // J s
inline constexpr double atomic_mass_unit = 1.66053906660e-27;  // kg
inline constexpr double mass_ca43 = 42.95876 * atomic_mass_unit;

// Config files and the paper quote ordinary frequencies (kHz, MHz);
// everything internal is angular frequency in rad/s.
inline constexpr double khz_to_rad(double f_khz) { return two_pi * 1e3 * f_khz; }
inline constexpr double mhz_to_rad(double f_mhz) { return two_pi * 1e6 * f_mhz; }
inline constexpr double rad_to_khz(double w) { return w / (two_pi * 1e3); }
inline constexpr double rad_to_mhz(double w) { return w / (two_pi * 1e6); }

inline constexpr double us_to_s(double t_us) { return 1e-6 * t_us; }
inline constexpr double s_to_us(double t_s) { return 1e6 * t_s; }

}  // namespace msgate
