// qot: multi-band link QoT and reach planning from the command line.
//
// Exit codes: 0 success, 1 I/O failure, 2 config or usage error, 3 numeric or model error.

#include <CLI11.hpp>
#include <fmt/format.h>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "qot/config.hpp"
#include "qot/errors.hpp"
#include "qot/report.hpp"

namespace {

constexpr int kExitIo = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;
constexpr const char* kConfigEnv = "QOT_CONFIG";

struct Options {
  std::string config_path;
  std::string output_path;
  std::string format = "csv";
  std::vector<double> powers;
  std::optional<double> fixed_power;
  bool per_band_optimum = false;
  std::string thresholds;
  int max_spans = 50;
};

qot::LinkConfig load(const Options& opt) {
  std::string path = opt.config_path;
  if (path.empty()) {
    if (const char* env = std::getenv(kConfigEnv)) path = env;
  }
  if (path.empty()) return qot::parse_config("");
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::ios_base::failure(fmt::format("cannot read config file '{}'", path));
  std::ostringstream text;
  text << in.rdbuf();
  return qot::parse_config(text.str());
}

std::string render(const std::vector<qot::Table>& tables, const std::string& format) {
  std::string out;
  for (std::size_t i = 0; i < tables.size(); ++i) {
    if (format == "table") {
      if (i) out += '\n';
      out += tables[i].to_pretty();
    } else {
      out += tables[i].to_csv();
    }
  }
  return out;
}

void write_output(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw std::ios_base::failure(fmt::format("cannot write output file '{}'", path));
}

std::vector<qot::Table> run(const std::string& command, const Options& opt) {
  qot::LinkConfig config = load(opt);
  if (!opt.thresholds.empty()) config.thresholds = qot::parse_thresholds(opt.thresholds);
  const qot::BuiltLink built = qot::build_grid(config);
  const auto formats = qot::configured_formats(config);

  if (command == "noise-profile") {
    const auto powers = opt.powers.empty() ? qot::default_profile_powers() : opt.powers;
    return {qot::noise_profile_table(built, powers)};
  }
  if (command == "snr-sweep") return {qot::snr_sweep_table(built, config.sweep)};
  if (command == "snr-vs-spans") {
    return {qot::snr_vs_spans_table(built, opt.fixed_power.value_or(config.fixed_launch_dbm), opt.max_spans)};
  }
  if (command == "band-optima") return {qot::band_optima_table(built, config.sweep)};
  if (command == "thresholds") return {qot::thresholds_table(built, formats, config.thresholds)};
  if (command == "rates") return {qot::rates_table(built, formats, config.thresholds)};
  if (command == "ber-curves") return {qot::ber_curves_table(built, formats)};
  if (command == "reach") {
    const auto report = qot::reach_report(built, config, opt.fixed_power.value_or(config.fixed_launch_dbm),
                                          opt.per_band_optimum);
    if (opt.format == "table") return qot::reach_matrices(report, config.thresholds);
    return {qot::reach_table(report)};
  }
  throw std::logic_error("unhandled command " + command);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-band optical link QoT: noise, launch-power optima and maximum reach"};
  app.require_subcommand(1);
  Options opt;
  app.add_option("--config", opt.config_path, fmt::format("Link description file (default: ${} or built-in)", kConfigEnv));
  app.add_option("--output", opt.output_path, "Output file (default: stdout)");
  app.add_option("--format", opt.format, "csv or table")->check(CLI::IsMember({"csv", "table"}));

  struct Command {
    const char* name;
    const char* help;
  };
  const Command commands[] = {
      {"noise-profile", "Per-channel ASE and NLI power"},
      {"snr-sweep", "Worst-FSU SNR per band versus launch power"},
      {"snr-vs-spans", "Worst-FSU SNR per band versus number of spans"},
      {"band-optima", "Optimal launch power and SNR per band"},
      {"thresholds", "SNR threshold per format and BER threshold"},
      {"reach", "Maximum reach per band, format and BER threshold"},
      {"rates", "Net bit rate per format for one FSU"},
      {"ber-curves", "BER versus SNR per format"},
  };
  std::string selected;
  for (const auto& c : commands) {
    CLI::App* sub = app.add_subcommand(c.name, c.help);
    sub->callback([&selected, name = c.name] { selected = name; });
    const std::string name = c.name;
    if (name == "noise-profile") {
      sub->add_option("--powers", opt.powers, "Launch powers in dBm (default 0,-5,-7.5)")->delimiter(',');
    }
    if (name == "reach" || name == "snr-vs-spans") {
      sub->add_option("--fixed-power", opt.fixed_power, "Launch power in dBm for every band");
    }
    if (name == "reach") {
      sub->add_flag("--per-band-optimum", opt.per_band_optimum, "Use each band's optimum launch power");
    }
    if (name == "reach" || name == "thresholds" || name == "rates") {
      sub->add_option("--thresholds", opt.thresholds, "BER thresholds, e.g. 4.7e-3@1.087,1e-6,1e-9");
    }
    if (name == "snr-vs-spans") sub->add_option("--max-spans", opt.max_spans, "Largest span count");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    write_output(render(run(selected, opt), opt.format), opt.output_path);
  } catch (const qot::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid argument: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    // NumericError, ModelError, DomainError
    std::cerr << "numeric error: " << e.what() << '\n';
    return kExitNumeric;
  }
  return 0;
}
