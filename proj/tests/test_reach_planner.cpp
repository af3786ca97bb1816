#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "qot/errors.hpp"
#include "qot/reach_planner.hpp"
#include "qot/units.hpp"

using namespace qot;

namespace {

const PlanningParams kParams{};

double ber_at_db(const char* format, double snr_db) { return ber(find_format(format), db_to_linear(snr_db), kParams); }

}  // namespace

TEST_CASE("BER goldens") {
  // Independent evaluations of the closed forms at 12.5 GHz reference and channel bandwidth.
  CHECK(ber_at_db("BPSK", 0.0) == doctest::Approx(0.0786496035251426).epsilon(1e-10));
  CHECK(ber_at_db("BPSK", 10.0) == doctest::Approx(3.87210821552204e-06).epsilon(1e-10));
  CHECK(ber_at_db("QPSK", 0.0) == doctest::Approx(0.158655253931457).epsilon(1e-10));
  CHECK(ber_at_db("QPSK", 12.0) == doctest::Approx(3.43026238664154e-05).epsilon(1e-10));
  CHECK(ber_at_db("16QAM", 0.0) == doctest::Approx(0.122760158628483).epsilon(1e-10));
  CHECK(ber_at_db("16QAM", 20.0) == doctest::Approx(1.45204058082076e-06).epsilon(1e-10));
  CHECK(ber_at_db("64QAM", 30.0) == doctest::Approx(7.54878404144402e-13).epsilon(1e-9));
  CHECK(ber_at_db("256QAM", 35.0) == doctest::Approx(1.24728913630848e-10).epsilon(1e-9));
}

TEST_CASE("BER edge cases") {
  CHECK(ber_psk(0.0, 1, 12.5e9, 12.5e9) == doctest::Approx(0.5));
  CHECK(ber_psk(1e6, 1, 12.5e9, 12.5e9) == 0.0);
  CHECK_THROWS_AS(ber_qam(1.0, 12, 12.5e9, 12.5e9), std::invalid_argument);
  CHECK_THROWS_AS(ber_qam(1.0, 2, 12.5e9, 12.5e9), std::invalid_argument);
  CHECK_THROWS_AS(ber_psk(-1.0, 1, 12.5e9, 12.5e9), std::invalid_argument);
  CHECK_THROWS_AS(find_format("128APSK"), std::invalid_argument);
  // Wider channel in a fixed reference bandwidth lowers the per-symbol SNR.
  CHECK(ber_psk(10.0, 1, 12.5e9, 25e9) > ber_psk(10.0, 1, 12.5e9, 12.5e9));
}

TEST_CASE("BER decreases with SNR for every format") {
  for (const auto& f : format_catalog()) {
    double last = 1.0;
    for (double db = -5.0; db <= 40.0; db += 0.5) {
      const double b = ber(f, db_to_linear(db), kParams);
      CHECK(b <= last);
      last = b;
    }
  }
}

TEST_CASE("SNR threshold inversion") {
  for (const auto& f : format_catalog()) {
    for (const auto& t : default_thresholds()) {
      const double th = snr_threshold_db(f, t, kParams);
      const double back = ber(f, db_to_linear(th), kParams);
      CHECK(std::abs(back - t.value) / t.value < 0.01);
    }
  }
  CHECK(snr_threshold_db(find_format("16QAM"), {1e-6, 1.0}, kParams) == doctest::Approx(20.152).epsilon(1e-4));
  CHECK(snr_threshold_db(find_format("BPSK"), {4.7e-3, 1.087}, kParams) == doctest::Approx(5.25).epsilon(0.01));
  CHECK_THROWS_AS(snr_threshold_db(find_format("BPSK"), {0.9, 1.0}, kParams), NumericError);
  CHECK_THROWS_AS(snr_threshold_db(find_format("256QAM"), {1e-300, 1.0}, kParams), NumericError);
}

TEST_CASE("net bit rate") {
  const BerThreshold fec{4.7e-3, 1.087};
  const BerThreshold clean{1e-9, 1.0};
  CHECK(net_bit_rate_gbps(find_format("BPSK"), fec, kParams) == 23);
  CHECK(net_bit_rate_gbps(find_format("QPSK"), fec, kParams) == 46);
  CHECK(net_bit_rate_gbps(find_format("8QAM"), fec, kParams) == 69);
  CHECK(net_bit_rate_gbps(find_format("16QAM"), fec, kParams) == 92);
  CHECK(net_bit_rate_gbps(find_format("32QAM"), fec, kParams) == 115);
  CHECK(net_bit_rate_gbps(find_format("256QAM"), clean, kParams) == 200);
  CHECK(net_bit_rate_gbps(find_format("64QAM"), clean, kParams) == 150);
  CHECK_THROWS_AS(net_bit_rate_gbps(find_format("BPSK"), {1e-3, 0.9}, kParams), std::invalid_argument);
}

TEST_CASE("maximum reach") {
  CHECK(max_reach(5.0, 5.3) == 0);
  CHECK(max_reach(5.3, 5.3) == 1);
  CHECK(max_reach(25.3, 5.3) == 100);
  CHECK(max_reach(20.0 + 5.3 - 1e-9, 5.3) == 99);
  CHECK(max_reach(15.3, 5.3) == 10);
  for (double margin = 0.0; margin < 30.0; margin += 0.37) {
    const auto n = max_reach(10.0 + margin, 10.0);
    CHECK(10.0 + margin - linear_to_db(static_cast<double>(n)) >= 10.0);
    CHECK(10.0 + margin - linear_to_db(static_cast<double>(n + 1)) < 10.0);
  }
}

TEST_CASE("power grid") {
  const auto grid = power_grid(-25.0, 10.0, 0.25);
  CHECK(grid.size() == 141);
  CHECK(grid.front() == -25.0);
  CHECK(grid.back() == doctest::Approx(10.0));
  CHECK(power_grid(0.0, 0.0, 1.0).size() == 1);
  CHECK_THROWS_AS(power_grid(0.0, 1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(power_grid(1.0, 0.0, 0.5), std::invalid_argument);
}

TEST_CASE("launch optimisation on a toy grid") {
  const BuiltLink toy = fixtures::toy_link(9, "signal.channel_spacing_ghz = 500\n");
  const UniformNliTable nli(toy.link);
  const auto powers = power_grid(-25.0, 10.0, 0.25);
  const auto sweep = sweep_launch_power(toy.link, nli, toy.bands, powers);

  for (std::size_t b = 0; b < toy.bands.size(); ++b) {
    const BandResult best = optimize_launch(sweep, toy.bands, b);
    CHECK(best.optimal_launch_dbm > powers.front());
    CHECK(best.optimal_launch_dbm < powers.back());

    // Single peak: non-decreasing up to the optimum, non-increasing after it.
    std::size_t peak = 0;
    while (sweep.powers_dbm[peak] != best.optimal_launch_dbm) ++peak;
    for (std::size_t p = 1; p <= peak; ++p) CHECK(sweep.worst[p][b].snr_db >= sweep.worst[p - 1][b].snr_db);
    for (std::size_t p = peak + 1; p < powers.size(); ++p) {
      CHECK(sweep.worst[p][b].snr_db <= sweep.worst[p - 1][b].snr_db);
    }

    // Same answer through the single-band route and the direct channel evaluation.
    const BandResult again = optimize_launch(toy.bands[b], toy.link, nli, powers);
    CHECK(again.optimal_launch_dbm == best.optimal_launch_dbm);
    const auto direct =
        band_worst_snr(toy.bands[b], toy.link, LaunchPlan::uniform(9, dbm_to_watt(best.optimal_launch_dbm)), 1);
    CHECK(direct.snr_db == doctest::Approx(best.max_snr_db).epsilon(1e-9));
    CHECK(direct.channel == best.worst_channel);
  }
}

TEST_CASE("without nonlinearity the optimum is the top of the sweep") {
  BuiltLink toy = fixtures::toy_link(5);
  toy.link.fiber.gamma_per_w_m = 0.0;
  const UniformNliTable nli(toy.link);
  const auto powers = power_grid(-10.0, 5.0, 0.5);
  const auto best = optimize_launch(toy.bands.front(), toy.link, nli, powers);
  CHECK(best.optimal_launch_dbm == doctest::Approx(5.0));
}

TEST_CASE("ties go to the lower launch power") {
  LaunchSweep sweep;
  sweep.powers_dbm = {-3.0, -2.0, -1.0};
  sweep.worst = {{{10.0, 0}}, {{12.0, 1}}, {{12.0, 2}}};
  const std::vector<Band> bands = {Band{BandId::C, 1530e-9, 1565e-9, 0, 3}};
  const BandResult r = optimize_launch(sweep, bands, 0);
  CHECK(r.optimal_launch_dbm == -2.0);
  CHECK(r.worst_channel == 1);
}

TEST_CASE("reach report on the reference system") {
  const BuiltLink& built = fixtures::reference_link();
  const UniformNliTable nli(built.link);
  const std::vector<double> launch(built.bands.size(), -7.5);
  const auto formats = format_catalog();
  const auto thresholds = default_thresholds();
  const ReachReport report = build_reach_report(built.link, nli, built.bands, launch, formats, thresholds,
                                                built.planning);

  REQUIRE(built.bands.size() == 4);
  CHECK(report.entries.size() == 4 * 7 * 3);
  CHECK(report.entries.front().band == BandId::E);
  CHECK(report.entries.front().format == "BPSK");
  CHECK(report.entries.back().band == BandId::L);
  CHECK(report.entries.back().format == "256QAM");

  for (BandId band : {BandId::E, BandId::S, BandId::C, BandId::L}) {
    for (const auto& t : thresholds) {
      std::int64_t last = INT64_MAX;
      for (const auto& f : formats) {
        const auto e = report.find(band, f.name, t.value);
        REQUIRE(e.has_value());
        CHECK(e->reach_spans <= last);
        last = e->reach_spans;
      }
    }
    for (const auto& f : formats) {
      std::int64_t last = INT64_MAX;
      for (const auto& t : thresholds) {
        const auto e = report.find(band, f.name, t.value);
        CHECK(e->reach_spans <= last);
        last = e->reach_spans;
      }
    }
  }
  CHECK_FALSE(report.find(BandId::C, "1024QAM", 1e-9).has_value());
  CHECK_THROWS_AS(build_reach_report(built.link, nli, built.bands, std::vector<double>{-7.5}, formats, thresholds,
                                     built.planning),
                  std::invalid_argument);
}
