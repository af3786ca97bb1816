#include "qot/report.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qot/units.hpp"

namespace qot {

namespace {

std::string db(double v) { return fmt::format("{:.4f}", v); }
std::string sci(double v) { return fmt::format("{:.6e}", v); }

std::string power_label(double dbm) { return fmt::format("{:g}dbm", dbm); }

}  // namespace

std::string Table::to_csv() const {
  std::string out;
  const auto emit = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += cells[i];
    }
    out += '\n';
  };
  emit(header);
  for (const auto& r : rows) emit(r);
  return out;
}

std::string Table::to_pretty() const {
  std::vector<std::size_t> width(header.size());
  for (std::size_t c = 0; c < header.size(); ++c) width[c] = header[c].size();
  for (const auto& r : rows) {
    for (std::size_t c = 0; c < r.size() && c < width.size(); ++c) width[c] = std::max(width[c], r[c].size());
  }
  std::string out;
  if (!title.empty()) out += title + '\n';
  const auto emit = [&](const std::vector<std::string>& cells) {
    for (std::size_t c = 0; c < cells.size(); ++c) {
      out += c == 0 ? fmt::format("{:<{}}", cells[c], width[c]) : fmt::format("  {:>{}}", cells[c], width[c]);
    }
    out += '\n';
  };
  emit(header);
  std::size_t total = 0;
  for (auto w : width) total += w + 2;
  out += std::string(total > 2 ? total - 2 : 0, '-') + '\n';
  for (const auto& r : rows) emit(r);
  return out;
}

std::vector<double> default_profile_powers() { return {0.0, -5.0, -7.5}; }

Table noise_profile_table(const BuiltLink& built, std::span<const double> powers_dbm) {
  const Link& link = built.link;
  const UniformNliTable nli(link);
  const auto ase = ase_profile(link);

  Table t;
  t.title = "Per-channel noise";
  t.header = {"channel", "frequency_thz", "wavelength_nm", "band", "p_ase_w"};
  for (double p : powers_dbm) t.header.push_back("p_nli_w_at_" + power_label(p));

  std::vector<std::vector<NoiseBreakdown>> profiles;
  for (double p : powers_dbm) profiles.push_back(noise_profile(link, nli, ase, dbm_to_watt(p), 1));

  for (std::size_t i = 0; i < link.grid.size(); ++i) {
    std::string band = "-";
    for (const Band& b : built.bands) {
      if (b.contains(i)) band = std::string(to_string(b.id));
    }
    const double f = link.grid[i].frequency_hz;
    std::vector<std::string> row = {std::to_string(link.grid[i].index), fmt::format("{:.5f}", f / kTera),
                                    fmt::format("{:.4f}", frequency_to_wavelength(f) / kNano), band, sci(ase[i])};
    for (const auto& prof : profiles) row.push_back(sci(prof[i].p_nli_w));
    t.rows.push_back(std::move(row));
  }
  return t;
}

Table snr_sweep_table(const BuiltLink& built, const SweepConfig& sweep) {
  const UniformNliTable nli(built.link);
  const auto powers = power_grid(sweep.min_dbm, sweep.max_dbm, sweep.step_db);
  const LaunchSweep result = sweep_launch_power(built.link, nli, built.bands, powers);

  std::vector<std::size_t> best(built.bands.size());
  for (std::size_t b = 0; b < built.bands.size(); ++b) {
    const BandResult opt = optimize_launch(result, built.bands, b);
    best[b] = static_cast<std::size_t>(
        std::find(powers.begin(), powers.end(), opt.optimal_launch_dbm) - powers.begin());
  }

  Table t;
  t.title = "Worst-FSU SNR versus launch power";
  t.header = {"power_dbm", "band", "worst_channel", "worst_frequency_thz", "snr_db", "is_optimum"};
  for (std::size_t p = 0; p < powers.size(); ++p) {
    for (std::size_t b = 0; b < built.bands.size(); ++b) {
      const BandWorst& w = result.worst[p][b];
      t.rows.push_back({db(powers[p]), std::string(to_string(built.bands[b].id)),
                        std::to_string(built.link.grid[w.channel].index),
                        fmt::format("{:.5f}", built.link.grid[w.channel].frequency_hz / kTera), db(w.snr_db),
                        best[b] == p ? "1" : "0"});
    }
  }
  return t;
}

Table snr_vs_spans_table(const BuiltLink& built, double launch_dbm, int max_spans) {
  if (max_spans < 1) throw std::invalid_argument("max spans must be at least 1");
  const Link& link = built.link;
  const UniformNliTable nli(link);
  const auto ase = ase_profile(link);
  const auto profile = noise_profile(link, nli, ase, dbm_to_watt(launch_dbm), 1);

  Table t;
  t.title = fmt::format("Worst-FSU SNR versus span count at {:g} dBm", launch_dbm);
  t.header = {"spans"};
  std::vector<BandWorst> single;
  for (const Band& b : built.bands) {
    t.header.push_back(fmt::format("snr_db_{}", to_string(b.id)));
    single.push_back(band_worst_snr(b, profile));
  }
  for (int n = 1; n <= max_spans; ++n) {
    std::vector<std::string> row = {std::to_string(n)};
    for (const BandWorst& w : single) {
      const auto& ch = profile[w.channel];
      const double p = dbm_to_watt(launch_dbm);
      row.push_back(db(combine_noise(ch.channel_index, p, ch.p_ase_w, ch.eta_per_w2, n).snr_db));
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

Table band_optima_table(const BuiltLink& built, const SweepConfig& sweep) {
  const UniformNliTable nli(built.link);
  const auto powers = power_grid(sweep.min_dbm, sweep.max_dbm, sweep.step_db);
  const LaunchSweep result = sweep_launch_power(built.link, nli, built.bands, powers);

  Table t;
  t.title = "Per-band optimum";
  t.header = {"band", "wavelength_range_nm", "channels", "optimal_launch_dbm", "max_snr_db", "worst_channel",
              "worst_frequency_thz"};
  for (std::size_t b = 0; b < built.bands.size(); ++b) {
    const BandResult r = optimize_launch(result, built.bands, b);
    const Band& band = built.bands[b];
    t.rows.push_back({std::string(to_string(band.id)),
                      fmt::format("{:g}-{:g}", band.min_wavelength_m / kNano, band.max_wavelength_m / kNano),
                      std::to_string(band.size()), db(r.optimal_launch_dbm), db(r.max_snr_db),
                      std::to_string(built.link.grid[r.worst_channel].index),
                      fmt::format("{:.5f}", built.link.grid[r.worst_channel].frequency_hz / kTera)});
  }
  return t;
}

Table thresholds_table(const BuiltLink& built, std::span<const ModulationFormat> formats,
                       std::span<const BerThreshold> thresholds) {
  Table t;
  t.title = "SNR thresholds";
  t.header = {"format", "bits_per_symbol"};
  for (const auto& th : thresholds) t.header.push_back(fmt::format("snr_db_at_ber_{:g}", th.value));
  for (const auto& f : formats) {
    std::vector<std::string> row = {f.name, std::to_string(f.bits_per_symbol)};
    for (const auto& th : thresholds) row.push_back(db(snr_threshold_db(f, th, built.planning)));
    t.rows.push_back(std::move(row));
  }
  return t;
}

Table rates_table(const BuiltLink& built, std::span<const ModulationFormat> formats,
                  std::span<const BerThreshold> thresholds) {
  Table t;
  t.title = "Net bit rate per FSU";
  t.header = {"format", "bits_per_symbol"};
  for (const auto& th : thresholds) t.header.push_back(fmt::format("net_gbps_at_ber_{:g}", th.value));
  for (const auto& f : formats) {
    std::vector<std::string> row = {f.name, std::to_string(f.bits_per_symbol)};
    for (const auto& th : thresholds) row.push_back(std::to_string(net_bit_rate_gbps(f, th, built.planning)));
    t.rows.push_back(std::move(row));
  }
  return t;
}

Table ber_curves_table(const BuiltLink& built, std::span<const ModulationFormat> formats) {
  Table t;
  t.title = "BER versus SNR";
  t.header = {"snr_db"};
  for (const auto& f : formats) t.header.push_back("ber_" + f.name);
  for (int snr = 0; snr <= 35; ++snr) {
    std::vector<std::string> row = {db(snr)};
    for (const auto& f : formats) row.push_back(sci(ber(f, db_to_linear(snr), built.planning)));
    t.rows.push_back(std::move(row));
  }
  return t;
}

Table reach_table(const ReachReport& report) {
  Table t;
  t.title = "Maximum reach";
  t.header = {"ber_threshold", "band", "format", "bits_per_symbol", "snr_threshold_db", "launch_dbm",
              "single_span_snr_db", "reach_spans", "net_bit_rate_gbps"};
  for (const auto& e : report.entries) {
    t.rows.push_back({fmt::format("{:g}", e.ber_threshold), std::string(to_string(e.band)), e.format,
                      std::to_string(e.bits_per_symbol), db(e.snr_threshold_db), db(e.launch_dbm),
                      db(e.single_span_snr_db), std::to_string(e.reach_spans), std::to_string(e.net_bit_rate_gbps)});
  }
  return t;
}

std::vector<Table> reach_matrices(const ReachReport& report, std::span<const BerThreshold> thresholds) {
  std::vector<Table> out;
  for (const auto& th : thresholds) {
    Table t;
    t.title = fmt::format("Maximum reach [spans] for BER threshold {:g}", th.value);
    t.header = {"band"};
    std::vector<std::string> snr_row = {"SNR threshold [dB]"};
    std::vector<std::string> bands;
    for (const auto& e : report.entries) {
      if (e.ber_threshold != th.value) continue;
      if (std::find(t.header.begin(), t.header.end(), e.format) == t.header.end()) {
        t.header.push_back(e.format);
        snr_row.push_back(fmt::format("{:.2f}", e.snr_threshold_db));
      }
      const std::string band(to_string(e.band));
      if (std::find(bands.begin(), bands.end(), band) == bands.end()) bands.push_back(band);
    }
    t.rows.push_back(snr_row);
    for (const auto& band : bands) {
      std::vector<std::string> row = {band};
      for (std::size_t c = 1; c < t.header.size(); ++c) {
        for (const auto& e : report.entries) {
          if (e.ber_threshold == th.value && to_string(e.band) == band && e.format == t.header[c]) {
            row.push_back(std::to_string(e.reach_spans));
          }
        }
      }
      t.rows.push_back(std::move(row));
    }
    out.push_back(std::move(t));
  }
  return out;
}

std::vector<ModulationFormat> configured_formats(const LinkConfig& config) {
  std::vector<ModulationFormat> out;
  for (const auto& f : format_catalog()) {
    if (std::find(config.formats.begin(), config.formats.end(), f.name) != config.formats.end()) out.push_back(f);
  }
  return out;
}

ReachReport reach_report(const BuiltLink& built, const LinkConfig& config, double fixed_dbm,
                         bool per_band_optimum) {
  const UniformNliTable nli(built.link);
  std::vector<double> launch(built.bands.size(), fixed_dbm);
  if (per_band_optimum) {
    const auto powers = power_grid(config.sweep.min_dbm, config.sweep.max_dbm, config.sweep.step_db);
    const LaunchSweep sweep = sweep_launch_power(built.link, nli, built.bands, powers);
    for (std::size_t b = 0; b < built.bands.size(); ++b) {
      launch[b] = optimize_launch(sweep, built.bands, b).optimal_launch_dbm;
    }
  }
  const auto formats = configured_formats(config);
  return build_reach_report(built.link, nli, built.bands, launch, formats, config.thresholds, built.planning);
}

}  // namespace qot
