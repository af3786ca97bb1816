#pragma once

// Operator-facing planning on top of the link model: BER/SNR relations per
// modulation format, per-band launch-power optimisation on the worst FSU, and
// maximum-reach / net-bit-rate tables.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qot/link_model.hpp"

namespace qot {

enum class BandId { E, S, C, L };

std::string_view to_string(BandId id);

struct Band {
  BandId id = BandId::C;
  double min_wavelength_m = 0.0;
  double max_wavelength_m = 0.0;
  std::size_t begin = 0;  // member channels are [begin, end) in grid order
  std::size_t end = 0;

  std::size_t size() const { return end - begin; }
  bool empty() const { return begin >= end; }
  bool contains(std::size_t i) const { return i >= begin && i < end; }
};

/// E 1365-1460, S 1460-1530, C 1530-1565, L 1565-1615 nm, without members.
std::vector<Band> default_band_plan();

enum class Family { PSK, QAM };

struct ModulationFormat {
  std::string name;
  Family family = Family::PSK;
  int cardinality = 2;
  int bits_per_symbol = 1;
};

/// BPSK, QPSK, 8QAM, 16QAM, 32QAM, 64QAM, 256QAM in ascending bits/symbol.
const std::vector<ModulationFormat>& format_catalog();
const ModulationFormat& find_format(std::string_view name);

struct BerThreshold {
  double value = 1e-9;
  double fec_overhead_factor = 1.0;  // raw rate / net rate
};

/// 4.7e-3 (hard-decision FEC, 1.087 overhead), 1e-6 and 1e-9 (no FEC).
std::vector<BerThreshold> default_thresholds();

struct PlanningParams {
  double reference_bandwidth_hz = 12.5e9;
  double channel_bandwidth_hz = 12.5e9;
  double symbol_rate_baud = 12.5e9;
  int polarizations = 2;
};

double ber_psk(double snr_linear, int bits_per_symbol, double reference_bandwidth_hz,
               double channel_bandwidth_hz);
double ber_qam(double snr_linear, int cardinality, double reference_bandwidth_hz,
               double channel_bandwidth_hz);
double ber(const ModulationFormat& format, double snr_linear, const PlanningParams& params);

/// SNR [dB] at which the format hits the BER threshold. Bisection over
/// [-10, 50] dB; throws NumericError when the threshold is not bracketed.
double snr_threshold_db(const ModulationFormat& format, const BerThreshold& threshold,
                        const PlanningParams& params);

struct BandWorst {
  double snr_db = 0.0;
  std::size_t channel = 0;  // grid position of the worst FSU
};

/// Lowest-SNR member of the band. First minimum wins on ties.
BandWorst band_worst_snr(const Band& band, std::span<const NoiseBreakdown> profile);
BandWorst band_worst_snr(const Band& band, const Link& link, const LaunchPlan& plan, int span_count);

struct BandResult {
  Band band;
  double optimal_launch_dbm = 0.0;
  double max_snr_db = 0.0;
  std::size_t worst_channel = 0;
};

/// Launch powers min, min + step, ... up to max inclusive.
std::vector<double> power_grid(double min_dbm, double max_dbm, double step_db);

/// Worst-FSU SNR of every band at every uniform launch power: worst[p][b].
struct LaunchSweep {
  std::vector<double> powers_dbm;
  std::vector<std::vector<BandWorst>> worst;
};

LaunchSweep sweep_launch_power(const Link& link, const UniformNliTable& nli, std::span<const Band> bands,
                               std::span<const double> powers_dbm, int span_count = 1);

/// Maximum of the band's worst-FSU SNR over the sweep, ties toward lower power.
BandResult optimize_launch(const LaunchSweep& sweep, std::span<const Band> bands, std::size_t band_pos);
BandResult optimize_launch(const Band& band, const Link& link, const UniformNliTable& nli,
                           std::span<const double> powers_dbm);

/// Largest N with snr_1 - 10 log10 N >= threshold, 0 when even one span fails.
std::int64_t max_reach(double single_span_snr_db, double snr_threshold_db);

/// Net rate in integer Gb/s for one FSU: polarizations * bits * symbol rate / overhead.
int net_bit_rate_gbps(const ModulationFormat& format, const BerThreshold& threshold,
                      const PlanningParams& params);

struct ReachEntry {
  BandId band = BandId::C;
  std::string format;
  int bits_per_symbol = 1;
  double ber_threshold = 0.0;
  double snr_threshold_db = 0.0;
  double launch_dbm = 0.0;
  double single_span_snr_db = 0.0;
  std::int64_t reach_spans = 0;
  int net_bit_rate_gbps = 0;
};

struct ReachReport {
  std::vector<ReachEntry> entries;

  std::optional<ReachEntry> find(BandId band, std::string_view format, double ber_threshold) const;
};

/// Bands x formats x thresholds, bands in the given order, formats by
/// ascending bits/symbol. `launch_dbm[b]` is the uniform launch power used for
/// band b (a fixed power for every band or each band's optimum).
ReachReport build_reach_report(const Link& link, const UniformNliTable& nli, std::span<const Band> bands,
                               std::span<const double> launch_dbm, std::span<const ModulationFormat> formats,
                               std::span<const BerThreshold> thresholds, const PlanningParams& params);

}  // namespace qot
