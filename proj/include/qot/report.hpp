#pragma once

// Tabular outputs behind the command-line front end. Every table carries a
// header naming units; CSV is comma-separated with LF line endings.

#include <span>
#include <string>
#include <vector>

#include "qot/config.hpp"

namespace qot {

struct Table {
  std::string title;  // shown in pretty mode only
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::string to_csv() const;
  std::string to_pretty() const;
};

/// Default NLI powers of the per-channel noise profile: 0, -5, -7.5 dBm.
std::vector<double> default_profile_powers();

/// Per channel: frequency, wavelength, band, ASE power and eta*P^3 per power.
Table noise_profile_table(const BuiltLink& built, std::span<const double> powers_dbm);

/// Worst-FSU SNR of every band at every swept power, optimum rows flagged.
Table snr_sweep_table(const BuiltLink& built, const SweepConfig& sweep);

/// Worst-FSU SNR per band versus span count at one launch power.
Table snr_vs_spans_table(const BuiltLink& built, double launch_dbm, int max_spans);

/// Optimal launch power and peak worst-FSU SNR per band.
Table band_optima_table(const BuiltLink& built, const SweepConfig& sweep);

/// SNR needed by each format at each BER threshold.
Table thresholds_table(const BuiltLink& built, std::span<const ModulationFormat> formats,
                       std::span<const BerThreshold> thresholds);

/// Net bit rate per format for each threshold, single FSU.
Table rates_table(const BuiltLink& built, std::span<const ModulationFormat> formats,
                  std::span<const BerThreshold> thresholds);

/// BER versus SNR (0..35 dB, 1 dB steps) for each format.
Table ber_curves_table(const BuiltLink& built, std::span<const ModulationFormat> formats);

/// Reach report in long form, one row per band/format/threshold entry.
Table reach_table(const ReachReport& report);

/// One bands x formats matrix per threshold with the SNR threshold row on top.
std::vector<Table> reach_matrices(const ReachReport& report, std::span<const BerThreshold> thresholds);

/// Reach report at `fixed_dbm` for every band, or at each band's optimum.
ReachReport reach_report(const BuiltLink& built, const LinkConfig& config, double fixed_dbm,
                         bool per_band_optimum);

/// Formats named in the config, in catalog order.
std::vector<ModulationFormat> configured_formats(const LinkConfig& config);

}  // namespace qot
