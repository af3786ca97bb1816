#include "qot/config.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>

#include "qot/errors.hpp"
#include "qot/units.hpp"

namespace qot {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double parse_number(std::string_view text, const std::string& key) {
  text = trim(text);
  double value = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end || text.empty()) {
    throw ConfigError(key, fmt::format("'{}' is not a number", text));
  }
  return value;
}

int parse_integer(std::string_view text, const std::string& key) {
  text = trim(text);
  int value = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end || text.empty()) {
    throw ConfigError(key, fmt::format("'{}' is not an integer", text));
  }
  return value;
}

std::array<double, 2> parse_pair(std::string_view text, char sep, const std::string& key) {
  const auto parts = split(text, sep);
  if (parts.size() != 2) throw ConfigError(key, fmt::format("expected two values separated by '{}'", sep));
  return {parse_number(parts[0], key), parse_number(parts[1], key)};
}

// value[@fec_overhead_factor], comma separated.
std::vector<BerThreshold> parse_threshold_list(std::string_view text, const std::string& key) {
  std::vector<BerThreshold> out;
  for (auto item : split(text, ',')) {
    const auto at = item.find('@');
    BerThreshold t;
    t.value = parse_number(item.substr(0, at), key);
    if (at != std::string_view::npos) t.fec_overhead_factor = parse_number(item.substr(at + 1), key);
    out.push_back(t);
  }
  return out;
}

using Setter = std::function<void(LinkConfig&, std::string_view, const std::string&)>;

struct KeySpec {
  std::string section;
  std::string stem;
  std::string unit;  // empty for dimensionless keys
  Setter apply;

  std::string key() const { return section + "." + stem + (unit.empty() ? "" : "_" + unit); }
};

Setter band_setter(std::size_t pos) {
  return [pos](LinkConfig& c, std::string_view v, const std::string& k) {
    const auto [lo, hi] = parse_pair(v, ',', k);
    c.bands[pos].min_wavelength_m = lo * kNano;
    c.bands[pos].max_wavelength_m = hi * kNano;
  };
}

const std::vector<KeySpec>& schema() {
  static const std::vector<KeySpec> keys = {
      {"fiber", "attenuation", "nm_db_per_km",
       [](LinkConfig& c, std::string_view v, const std::string& k) {
         c.fiber.attenuation.clear();
         for (auto item : split(v, ',')) {
           const auto [nm, db] = parse_pair(item, ':', k);
           c.fiber.attenuation.push_back({nm * kNano, db});
         }
       }},
      {"fiber", "dispersion", "ps_per_nm_km",
       [](LinkConfig& c, std::string_view v, const std::string& k) {
         c.fiber.dispersion_s_per_m2 = parse_number(v, k) * kPico / (kNano * kKilo);
       }},
      {"fiber", "dispersion_slope", "ps_per_nm2_km",
       [](LinkConfig& c, std::string_view v, const std::string& k) {
         c.fiber.dispersion_slope_s_per_m3 = parse_number(v, k) * kPico / (kNano * kNano * kKilo);
       }},
      {"fiber", "dispersion_reference", "nm",
       [](LinkConfig& c, std::string_view v, const std::string& k) {
         c.fiber.dispersion_reference_m = parse_number(v, k) * kNano;
       }},
      {"fiber", "raman_gain", "per_w_km",
       [](LinkConfig& c, std::string_view v, const std::string& k) {
         c.fiber.raman_peak_gain_per_w_m = parse_number(v, k) / kKilo;
       }},
      {"fiber", "raman_peak_shift", "thz",
       [](LinkConfig& c, std::string_view v, const std::string& k) {
         c.fiber.raman_peak_shift_hz = parse_number(v, k) * kTera;
       }},
      {"fiber", "gamma", "per_w_km",
       [](LinkConfig& c, std::string_view v, const std::string& k) {
         c.fiber.gamma_per_w_m = parse_number(v, k) / kKilo;
       }},
      {"fiber", "span_length", "km",
       [](LinkConfig& c, std::string_view v, const std::string& k) {
         c.fiber.span_length_m = parse_number(v, k) * kKilo;
       }},
      {"amplifier", "noise_figure", "db",
       [](LinkConfig& c, std::string_view v, const std::string& k) {
         c.amplifier.noise_figure_db = parse_number(v, k);
       }},
      {"signal", "center_frequency", "thz",
       [](LinkConfig& c, std::string_view v, const std::string& k) {
         c.signal.center_frequency_hz = parse_number(v, k) * kTera;
       }},
      {"signal", "center_wavelength", "nm",
       [](LinkConfig& c, std::string_view v, const std::string& k) {
         const double nm = parse_number(v, k);
         if (!(nm > 0.0)) throw ConfigError(k, "must be positive");
         c.signal.center_frequency_hz = wavelength_to_frequency(nm * kNano);
       }},
      {"signal", "symbol_rate", "gbaud",
       [](LinkConfig& c, std::string_view v, const std::string& k) {
         c.signal.symbol_rate_baud = parse_number(v, k) * kGiga;
       }},
      {"signal", "channel_spacing", "ghz",
       [](LinkConfig& c, std::string_view v, const std::string& k) {
         c.signal.channel_spacing_hz = parse_number(v, k) * kGiga;
       }},
      {"signal", "reference_bandwidth", "ghz",
       [](LinkConfig& c, std::string_view v, const std::string& k) {
         c.signal.reference_bandwidth_hz = parse_number(v, k) * kGiga;
       }},
      {"signal", "fsu_count", "",
       [](LinkConfig& c, std::string_view v, const std::string& k) { c.signal.fsu_count = parse_integer(v, k); }},
      {"bands", "e", "nm", band_setter(0)},
      {"bands", "s", "nm", band_setter(1)},
      {"bands", "c", "nm", band_setter(2)},
      {"bands", "l", "nm", band_setter(3)},
      {"sweep", "min", "dbm",
       [](LinkConfig& c, std::string_view v, const std::string& k) { c.sweep.min_dbm = parse_number(v, k); }},
      {"sweep", "max", "dbm",
       [](LinkConfig& c, std::string_view v, const std::string& k) { c.sweep.max_dbm = parse_number(v, k); }},
      {"sweep", "step", "db",
       [](LinkConfig& c, std::string_view v, const std::string& k) { c.sweep.step_db = parse_number(v, k); }},
      {"planning", "ber_thresholds", "",
       [](LinkConfig& c, std::string_view v, const std::string& k) { c.thresholds = parse_threshold_list(v, k); }},
      {"planning", "formats", "",
       [](LinkConfig& c, std::string_view v, const std::string&) {
         c.formats.clear();
         for (auto item : split(v, ',')) c.formats.emplace_back(item);
       }},
      {"planning", "fixed_power", "dbm",
       [](LinkConfig& c, std::string_view v, const std::string& k) { c.fixed_launch_dbm = parse_number(v, k); }},
  };
  return keys;
}

[[noreturn]] void reject_unknown_key(const std::string& key) {
  // Longest stem wins so fiber.dispersion_slope_* is not read as fiber.dispersion_*.
  const KeySpec* match = nullptr;
  std::size_t match_len = 0;
  for (const auto& spec : schema()) {
    const std::string prefix = spec.section + "." + spec.stem + "_";
    if (!spec.unit.empty() && key.starts_with(prefix) && prefix.size() > match_len) {
      match = &spec;
      match_len = prefix.size();
    }
  }
  if (match != nullptr) {
    throw ConfigError(key, fmt::format("unit mismatch, expected '{}' ({})", match->unit, match->key()));
  }
  throw ConfigError(key, "unknown key");
}

void validate(const LinkConfig& c) {
  try {
    c.fiber.validate();
  } catch (const ModelError& e) {
    throw ConfigError("fiber", e.what());
  }
  try {
    c.amplifier.validate();
  } catch (const ModelError& e) {
    throw ConfigError("amplifier.noise_figure_db", e.what());
  }
  if (c.signal.fsu_count < 1) throw ConfigError("signal.fsu_count", "must be at least 1");
  if (!(c.signal.symbol_rate_baud > 0.0)) throw ConfigError("signal.symbol_rate_gbaud", "must be positive");
  if (!(c.signal.reference_bandwidth_hz > 0.0)) {
    throw ConfigError("signal.reference_bandwidth_ghz", "must be positive");
  }
  if (!(c.signal.center_frequency_hz > 0.0)) throw ConfigError("signal.center_frequency_thz", "must be positive");
  if (c.signal.channel_spacing_hz < c.signal.symbol_rate_baud) {
    throw ConfigError("signal.channel_spacing_ghz", "spacing is narrower than the symbol rate");
  }
  const double lowest = c.signal.center_frequency_hz - 0.5 * c.signal.fsu_count * c.signal.channel_spacing_hz;
  if (!(lowest > 0.0)) throw ConfigError("signal.fsu_count", "grid extends below 0 Hz");
  if (!(c.sweep.min_dbm < c.sweep.max_dbm)) throw ConfigError("sweep.min_dbm", "must be below sweep.max_dbm");
  if (!(c.sweep.step_db > 0.0)) throw ConfigError("sweep.step_db", "must be positive");
  for (std::size_t b = 0; b < c.bands.size(); ++b) {
    const Band& band = c.bands[b];
    std::string key = fmt::format("bands.{}_nm", to_string(band.id));
    key[6] = static_cast<char>(std::tolower(static_cast<unsigned char>(key[6])));
    if (!(band.min_wavelength_m < band.max_wavelength_m)) throw ConfigError(key, "range is empty");
    if (b > 0 && band.min_wavelength_m != c.bands[b - 1].max_wavelength_m) {
      throw ConfigError(key, "band ranges must be contiguous in E, S, C, L order");
    }
  }
  if (c.thresholds.empty()) throw ConfigError("planning.ber_thresholds", "needs at least one threshold");
  for (const auto& t : c.thresholds) {
    if (!(t.value > 0.0 && t.value < 0.5)) {
      throw ConfigError("planning.ber_thresholds", fmt::format("{:g} is outside (0, 0.5)", t.value));
    }
    if (!(t.fec_overhead_factor >= 1.0)) {
      throw ConfigError("planning.ber_thresholds", "FEC overhead factor must be >= 1");
    }
  }
  if (c.formats.empty()) throw ConfigError("planning.formats", "needs at least one format");
  for (const auto& name : c.formats) {
    const auto& catalog = format_catalog();
    if (std::none_of(catalog.begin(), catalog.end(), [&](const auto& f) { return f.name == name; })) {
      throw ConfigError("planning.formats", fmt::format("unknown format '{}'", name));
    }
  }
}

}  // namespace

LinkConfig default_config() {
  LinkConfig c;
  c.fiber.attenuation = {{1410e-9, 0.217}, {1495e-9, 0.177}, {1550e-9, 0.165}, {1590e-9, 0.171}};
  c.fiber.dispersion_s_per_m2 = 21.3e-6;        // 21.3 ps/nm/km
  c.fiber.dispersion_slope_s_per_m3 = 0.067e3;  // 0.067 ps/nm^2/km
  c.fiber.dispersion_reference_m = 1550e-9;
  c.fiber.raman_peak_gain_per_w_m = 0.028e-3;
  c.fiber.raman_peak_shift_hz = 13e12;
  c.fiber.gamma_per_w_m = 1.2e-3;
  c.fiber.span_length_m = 100e3;
  c.amplifier.noise_figure_db = 5.0;
  c.bands = default_band_plan();
  c.thresholds = default_thresholds();
  for (const auto& f : format_catalog()) c.formats.push_back(f.name);
  return c;
}

std::vector<std::string> config_keys() {
  std::vector<std::string> out;
  for (const auto& spec : schema()) out.push_back(spec.key());
  return out;
}

LinkConfig parse_config(std::string_view text) {
  LinkConfig config = default_config();
  std::map<std::string, int> seen;
  bool saw_frequency = false;
  bool saw_wavelength = false;

  int line_no = 0;
  for (auto raw : split(text, '\n')) {
    ++line_no;
    const auto hash = raw.find('#');
    const auto line = trim(raw.substr(0, hash));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("", fmt::format("line {}: expected 'key = value'", line_no));
    }
    const std::string key(trim(line.substr(0, eq)));
    const auto value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("", fmt::format("line {}: missing key", line_no));
    if (const auto [it, inserted] = seen.emplace(key, line_no); !inserted) {
      throw ConfigError(key, fmt::format("line {}: duplicate of line {}", line_no, it->second));
    }
    const auto& keys = schema();
    const auto spec = std::find_if(keys.begin(), keys.end(), [&](const KeySpec& s) { return s.key() == key; });
    if (spec == keys.end()) reject_unknown_key(key);
    saw_frequency |= key == "signal.center_frequency_thz";
    saw_wavelength |= key == "signal.center_wavelength_nm";
    spec->apply(config, value, key);
  }
  if (saw_frequency && saw_wavelength) {
    throw ConfigError("signal.center_wavelength_nm", "conflicts with signal.center_frequency_thz");
  }
  validate(config);
  return config;
}

std::vector<BerThreshold> parse_thresholds(std::string_view text) {
  auto out = parse_threshold_list(text, "--thresholds");
  for (const auto& t : out) {
    if (!(t.value > 0.0 && t.value < 0.5)) {
      throw ConfigError("--thresholds", fmt::format("{:g} is outside (0, 0.5)", t.value));
    }
    if (!(t.fec_overhead_factor >= 1.0)) throw ConfigError("--thresholds", "FEC overhead factor must be >= 1");
  }
  return out;
}

LinkConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("", fmt::format("cannot read config file '{}'", path.string()));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

BuiltLink build_grid(const LinkConfig& config) {
  validate(config);
  const SignalConfig& sig = config.signal;

  BuiltLink out;
  out.link.fiber = config.fiber;
  out.link.amplifier = config.amplifier;
  out.link.noise_bandwidth_hz = sig.reference_bandwidth_hz;
  out.planning.reference_bandwidth_hz = sig.reference_bandwidth_hz;
  out.planning.channel_bandwidth_hz = sig.symbol_rate_baud;
  out.planning.symbol_rate_baud = sig.symbol_rate_baud;

  ChannelGrid& grid = out.link.grid;
  grid.center_frequency_hz = sig.center_frequency_hz;
  grid.spacing_hz = sig.channel_spacing_hz;
  const auto beta = shift_dispersion(dispersion_coefficients(config.fiber, config.fiber.dispersion_reference_m),
                                     wavelength_to_frequency(config.fiber.dispersion_reference_m),
                                     sig.center_frequency_hz);
  grid.beta2_s2_per_m = beta.beta2_s2_per_m;
  grid.beta3_s3_per_m = beta.beta3_s3_per_m;
  grid.raman_cutoff_hz = config.fiber.raman_peak_shift_hz;
  grid.raman_slope_per_w_m_hz = config.fiber.raman_peak_gain_per_w_m / config.fiber.raman_peak_shift_hz;

  const int n = sig.fsu_count;
  grid.channels.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    Channel ch;
    ch.index = i;
    ch.frequency_hz = sig.center_frequency_hz + (i - 0.5 * (n - 1)) * sig.channel_spacing_hz;
    ch.bandwidth_hz = sig.symbol_rate_baud;
    const double lambda =
        std::clamp(frequency_to_wavelength(ch.frequency_hz), kModelWavelengthMin, kModelWavelengthMax);
    ch.alpha_per_m = interpolate_attenuation(config.fiber, lambda);
    grid.channels.push_back(ch);
  }

  // Channels ascend in frequency, so bands appear in L, C, S, E order along the
  // grid. A channel joins the first band (E..L) whose upper edge it does not
  // exceed; anything past the last edge joins the last band.
  const auto& plan = config.bands;
  std::vector<std::size_t> membership(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double lambda = frequency_to_wavelength(grid[i].frequency_hz);
    std::size_t b = 0;
    while (b + 1 < plan.size() && lambda > plan[b].max_wavelength_m) ++b;
    membership[i] = b;
  }
  for (std::size_t b = 0; b < plan.size(); ++b) {
    Band band = plan[b];
    const auto first = std::find(membership.begin(), membership.end(), b);
    if (first == membership.end()) continue;
    const auto last = std::find_if(first, membership.end(), [b](std::size_t m) { return m != b; });
    band.begin = static_cast<std::size_t>(first - membership.begin());
    band.end = static_cast<std::size_t>(last - membership.begin());
    out.bands.push_back(band);
  }
  grid.validate();
  return out;
}

}  // namespace qot
