#include "qot/reach_planner.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include "qot/errors.hpp"
#include "qot/units.hpp"

namespace qot {

namespace {

constexpr double kBracketLowDb = -10.0;
constexpr double kBracketHighDb = 50.0;
constexpr double kBisectionResolutionDb = 1e-6;

}  // namespace

std::string_view to_string(BandId id) {
  switch (id) {
    case BandId::E: return "E";
    case BandId::S: return "S";
    case BandId::C: return "C";
    case BandId::L: return "L";
  }
  return "?";
}

std::vector<Band> default_band_plan() {
  return {
      {BandId::E, 1365e-9, 1460e-9, 0, 0},
      {BandId::S, 1460e-9, 1530e-9, 0, 0},
      {BandId::C, 1530e-9, 1565e-9, 0, 0},
      {BandId::L, 1565e-9, 1615e-9, 0, 0},
  };
}

const std::vector<ModulationFormat>& format_catalog() {
  static const std::vector<ModulationFormat> catalog = {
      {"BPSK", Family::PSK, 2, 1},    {"QPSK", Family::PSK, 4, 2},    {"8QAM", Family::QAM, 8, 3},
      {"16QAM", Family::QAM, 16, 4},  {"32QAM", Family::QAM, 32, 5},  {"64QAM", Family::QAM, 64, 6},
      {"256QAM", Family::QAM, 256, 8},
  };
  return catalog;
}

const ModulationFormat& find_format(std::string_view name) {
  for (const auto& f : format_catalog()) {
    if (f.name == name) return f;
  }
  throw std::invalid_argument(fmt::format("unknown modulation format '{}'", name));
}

std::vector<BerThreshold> default_thresholds() { return {{4.7e-3, 1.087}, {1e-6, 1.0}, {1e-9, 1.0}}; }

double ber_psk(double snr_linear, int bits_per_symbol, double reference_bandwidth_hz,
               double channel_bandwidth_hz) {
  if (bits_per_symbol < 1) throw std::invalid_argument("PSK needs at least one bit per symbol");
  if (snr_linear < 0.0) throw std::invalid_argument("SNR must be non-negative");
  const double arg = snr_linear / bits_per_symbol * reference_bandwidth_hz / channel_bandwidth_hz;
  return 0.5 * std::erfc(std::sqrt(arg));
}

double ber_qam(double snr_linear, int cardinality, double reference_bandwidth_hz,
               double channel_bandwidth_hz) {
  if (cardinality < 4 || !std::has_single_bit(static_cast<unsigned>(cardinality))) {
    throw std::invalid_argument(fmt::format("QAM cardinality {} is not a power of two >= 4", cardinality));
  }
  if (snr_linear < 0.0) throw std::invalid_argument("SNR must be non-negative");
  const double bits = std::log2(static_cast<double>(cardinality));
  const double arg = 3.0 * snr_linear / (2.0 * (cardinality - 1)) * reference_bandwidth_hz / channel_bandwidth_hz;
  return (1.0 / bits) * (1.0 - 1.0 / std::sqrt(static_cast<double>(cardinality))) * std::erfc(std::sqrt(arg));
}

double ber(const ModulationFormat& format, double snr_linear, const PlanningParams& params) {
  if (format.family == Family::PSK) {
    return ber_psk(snr_linear, format.bits_per_symbol, params.reference_bandwidth_hz, params.channel_bandwidth_hz);
  }
  return ber_qam(snr_linear, format.cardinality, params.reference_bandwidth_hz, params.channel_bandwidth_hz);
}

double snr_threshold_db(const ModulationFormat& format, const BerThreshold& threshold,
                        const PlanningParams& params) {
  const auto ber_at = [&](double snr_db) { return ber(format, db_to_linear(snr_db), params); };
  double lo = kBracketLowDb;
  double hi = kBracketHighDb;
  if (!(ber_at(lo) >= threshold.value && ber_at(hi) <= threshold.value)) {
    throw NumericError(fmt::format("BER {:g} for {} is not bracketed by [{}, {}] dB", threshold.value,
                                   format.name, kBracketLowDb, kBracketHighDb));
  }
  while (hi - lo > kBisectionResolutionDb) {
    const double mid = 0.5 * (lo + hi);
    if (ber_at(mid) > threshold.value) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

BandWorst band_worst_snr(const Band& band, std::span<const NoiseBreakdown> profile) {
  if (band.empty()) throw std::invalid_argument(fmt::format("band {} has no channels", to_string(band.id)));
  if (band.end > profile.size()) throw std::out_of_range("band extends past the noise profile");
  BandWorst worst{profile[band.begin].snr_db, band.begin};
  for (std::size_t i = band.begin + 1; i < band.end; ++i) {
    if (profile[i].snr_db < worst.snr_db) worst = {profile[i].snr_db, i};
  }
  return worst;
}

BandWorst band_worst_snr(const Band& band, const Link& link, const LaunchPlan& plan, int span_count) {
  if (band.empty()) throw std::invalid_argument(fmt::format("band {} has no channels", to_string(band.id)));
  BandWorst worst{0.0, band.begin};
  for (std::size_t i = band.begin; i < band.end; ++i) {
    const double snr = channel_snr(link, i, plan, span_count).snr_db;
    if (i == band.begin || snr < worst.snr_db) worst = {snr, i};
  }
  return worst;
}

std::vector<double> power_grid(double min_dbm, double max_dbm, double step_db) {
  if (!(step_db > 0.0)) throw std::invalid_argument("sweep step must be positive");
  if (!(min_dbm <= max_dbm)) throw std::invalid_argument("sweep minimum exceeds maximum");
  std::vector<double> out;
  const auto count = static_cast<std::size_t>(std::floor((max_dbm - min_dbm) / step_db + 1e-9)) + 1;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) out.push_back(min_dbm + static_cast<double>(k) * step_db);
  return out;
}

LaunchSweep sweep_launch_power(const Link& link, const UniformNliTable& nli, std::span<const Band> bands,
                               std::span<const double> powers_dbm, int span_count) {
  if (powers_dbm.empty()) throw std::invalid_argument("launch sweep is empty");
  const std::vector<double> ase = ase_profile(link);
  LaunchSweep sweep;
  sweep.powers_dbm.assign(powers_dbm.begin(), powers_dbm.end());
  sweep.worst.reserve(powers_dbm.size());
  for (double dbm : powers_dbm) {
    const auto profile = noise_profile(link, nli, ase, dbm_to_watt(dbm), span_count);
    std::vector<BandWorst> row;
    row.reserve(bands.size());
    for (const Band& band : bands) row.push_back(band_worst_snr(band, profile));
    sweep.worst.push_back(std::move(row));
  }
  return sweep;
}

BandResult optimize_launch(const LaunchSweep& sweep, std::span<const Band> bands, std::size_t band_pos) {
  if (sweep.powers_dbm.empty()) throw std::invalid_argument("launch sweep is empty");
  BandResult best{bands[band_pos], sweep.powers_dbm.front(), sweep.worst.front()[band_pos].snr_db,
                  sweep.worst.front()[band_pos].channel};
  for (std::size_t p = 1; p < sweep.powers_dbm.size(); ++p) {
    const BandWorst& w = sweep.worst[p][band_pos];
    const bool better = w.snr_db > best.max_snr_db ||
                        (w.snr_db == best.max_snr_db && sweep.powers_dbm[p] < best.optimal_launch_dbm);
    if (better) best = {bands[band_pos], sweep.powers_dbm[p], w.snr_db, w.channel};
  }
  return best;
}

BandResult optimize_launch(const Band& band, const Link& link, const UniformNliTable& nli,
                           std::span<const double> powers_dbm) {
  const Band single[] = {band};
  return optimize_launch(sweep_launch_power(link, nli, single, powers_dbm), single, 0);
}

std::int64_t max_reach(double single_span_snr_db, double snr_threshold_db) {
  const double margin_db = single_span_snr_db - snr_threshold_db;
  if (margin_db < 0.0) return 0;
  auto n = static_cast<std::int64_t>(std::floor(db_to_linear(margin_db)));
  // Guard the floor against rounding in 10^(x/10).
  while (single_span_snr_db - linear_to_db(static_cast<double>(n + 1)) >= snr_threshold_db) ++n;
  while (n > 0 && single_span_snr_db - linear_to_db(static_cast<double>(n)) < snr_threshold_db) --n;
  return n;
}

int net_bit_rate_gbps(const ModulationFormat& format, const BerThreshold& threshold,
                      const PlanningParams& params) {
  if (!(threshold.fec_overhead_factor >= 1.0)) throw std::invalid_argument("FEC overhead factor must be >= 1");
  const double raw_gbps = params.polarizations * format.bits_per_symbol * params.symbol_rate_baud / kGiga;
  return static_cast<int>(std::lround(raw_gbps / threshold.fec_overhead_factor));
}

std::optional<ReachEntry> ReachReport::find(BandId band, std::string_view format, double ber_threshold) const {
  for (const auto& e : entries) {
    if (e.band == band && e.format == format && e.ber_threshold == ber_threshold) return e;
  }
  return std::nullopt;
}

ReachReport build_reach_report(const Link& link, const UniformNliTable& nli, std::span<const Band> bands,
                               std::span<const double> launch_dbm, std::span<const ModulationFormat> formats,
                               std::span<const BerThreshold> thresholds, const PlanningParams& params) {
  if (launch_dbm.size() != bands.size()) {
    throw std::invalid_argument("one launch power per band is required");
  }
  std::vector<ModulationFormat> ordered(formats.begin(), formats.end());
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const auto& a, const auto& b) { return a.bits_per_symbol < b.bits_per_symbol; });

  std::vector<std::vector<double>> snr_th(ordered.size());
  for (std::size_t f = 0; f < ordered.size(); ++f) {
    for (const auto& t : thresholds) snr_th[f].push_back(snr_threshold_db(ordered[f], t, params));
  }

  const std::vector<double> ase = ase_profile(link);
  ReachReport report;
  report.entries.reserve(bands.size() * ordered.size() * thresholds.size());
  for (std::size_t b = 0; b < bands.size(); ++b) {
    const auto profile = noise_profile(link, nli, ase, dbm_to_watt(launch_dbm[b]), 1);
    const double snr1 = band_worst_snr(bands[b], profile).snr_db;
    for (std::size_t f = 0; f < ordered.size(); ++f) {
      for (std::size_t t = 0; t < thresholds.size(); ++t) {
        ReachEntry e;
        e.band = bands[b].id;
        e.format = ordered[f].name;
        e.bits_per_symbol = ordered[f].bits_per_symbol;
        e.ber_threshold = thresholds[t].value;
        e.snr_threshold_db = snr_th[f][t];
        e.launch_dbm = launch_dbm[b];
        e.single_span_snr_db = snr1;
        e.reach_spans = max_reach(snr1, e.snr_threshold_db);
        e.net_bit_rate_gbps = net_bit_rate_gbps(ordered[f], thresholds[t], params);
        report.entries.push_back(std::move(e));
      }
    }
  }
  return report;
}

}  // namespace qot
