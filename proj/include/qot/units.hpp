#pragma once

#include <cmath>
#include <numbers>

namespace qot {

inline constexpr double kSpeedOfLight = 299792458.0;   // m/s
inline constexpr double kPlanck = 6.62607015e-34;      // J*s

inline constexpr double kTera = 1e12;
inline constexpr double kGiga = 1e9;
inline constexpr double kNano = 1e-9;
inline constexpr double kPico = 1e-12;
inline constexpr double kKilo = 1e3;

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double ratio) { return 10.0 * std::log10(ratio); }

/// dBm is referenced to 1 mW.
inline double dbm_to_watt(double dbm) { return 1e-3 * db_to_linear(dbm); }
inline double watt_to_dbm(double watt) { return linear_to_db(watt / 1e-3); }

inline double wavelength_to_frequency(double wavelength_m) { return kSpeedOfLight / wavelength_m; }
inline double frequency_to_wavelength(double frequency_hz) { return kSpeedOfLight / frequency_hz; }

/// Power attenuation: dB/km -> 1/m (natural-log units).
inline double db_per_km_to_per_m(double db_per_km) {
  return db_per_km * std::numbers::ln10 / 10.0 / kKilo;
}
inline double per_m_to_db_per_km(double per_m) {
  return per_m * kKilo * 10.0 / std::numbers::ln10;
}

}  // namespace qot
