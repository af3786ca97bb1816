#pragma once

// Link description file: one `section.key_unit = value` per line, `#` starts a
// comment. Every key is optional and defaults to the reference E-to-L system
// (2720 x 12.5 GHz FSUs, 100 km SMF spans, 5 dB noise figure). Unknown keys
// are rejected. README.md lists every key.

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "qot/link_model.hpp"
#include "qot/reach_planner.hpp"

namespace qot {

struct SignalConfig {
  double center_frequency_hz = 200.67e12;
  double symbol_rate_baud = 12.5e9;
  double channel_spacing_hz = 12.5e9;
  double reference_bandwidth_hz = 12.5e9;
  int fsu_count = 2720;
};

struct SweepConfig {
  double min_dbm = -25.0;
  double max_dbm = 10.0;
  double step_db = 0.25;
};

struct LinkConfig {
  FiberSpec fiber;
  AmplifierSpec amplifier;
  SignalConfig signal;
  std::vector<Band> bands;  // wavelength ranges only
  SweepConfig sweep;
  std::vector<BerThreshold> thresholds;
  std::vector<std::string> formats;
  double fixed_launch_dbm = -7.5;
};

/// Reference system values for every field.
LinkConfig default_config();

/// Parses and validates. Throws ConfigError with the offending key path.
LinkConfig parse_config(std::string_view text);
LinkConfig load_config(const std::filesystem::path& path);

/// "4.7e-3@1.087, 1e-6": BER values with optional FEC overhead factor.
std::vector<BerThreshold> parse_thresholds(std::string_view text);

/// Every accepted key, in documentation order.
std::vector<std::string> config_keys();

struct BuiltLink {
  Link link;
  std::vector<Band> bands;  // non-empty bands with member ranges, E..L
  PlanningParams planning;
};

/// Builds the channel grid centred on the configured frequency, interpolates
/// per-channel attenuation and partitions the channels into bands.
BuiltLink build_grid(const LinkConfig& config);

}  // namespace qot
