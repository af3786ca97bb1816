#include <doctest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "qot/errors.hpp"
#include "qot/link_model.hpp"
#include "qot/units.hpp"

using namespace qot;
using fixtures::relative;

namespace {

FiberSpec reference_fiber() { return parse_config("").fiber; }

// Symmetric synthetic link: no Raman, no beta3, flat attenuation. S = 0 alone
// still leaves beta3 = (l^2 / 2 pi c)^2 2D/l, so beta3 is cleared on the grid.
BuiltLink symmetric_link(int channels) {
  BuiltLink built = fixtures::toy_link(channels,
                                       "fiber.raman_gain_per_w_km = 0\n"
                                       "fiber.attenuation_nm_db_per_km = 1500:0.2\n");
  built.link.grid.beta3_s3_per_m = 0.0;
  return built;
}

}  // namespace

TEST_CASE("attenuation interpolation") {
  const FiberSpec fiber = reference_fiber();
  SUBCASE("anchor at 1550 nm converts to natural units") {
    CHECK(interpolate_attenuation(fiber, 1550e-9) * kKilo == doctest::Approx(0.0380).epsilon(1e-3));
    CHECK(per_m_to_db_per_km(interpolate_attenuation(fiber, 1550e-9)) == doctest::Approx(0.165));
  }
  SUBCASE("anchor hit at 1410 nm") {
    CHECK(per_m_to_db_per_km(interpolate_attenuation(fiber, 1410e-9)) == doctest::Approx(0.217));
  }
  SUBCASE("midpoint between 1410 and 1495 nm") {
    CHECK(per_m_to_db_per_km(interpolate_attenuation(fiber, 1452.5e-9)) == doctest::Approx(0.197));
  }
  SUBCASE("clamped outside the anchors") {
    CHECK(per_m_to_db_per_km(interpolate_attenuation(fiber, 1365e-9)) == doctest::Approx(0.217));
    CHECK(per_m_to_db_per_km(interpolate_attenuation(fiber, 1615e-9)) == doctest::Approx(0.171));
  }
  SUBCASE("outside the band plan is a domain error naming the value") {
    CHECK_THROWS_AS(interpolate_attenuation(fiber, 1300e-9), DomainError);
    CHECK_THROWS_WITH_AS(interpolate_attenuation(fiber, 1700e-9), doctest::Contains("1700.0000"), DomainError);
  }
}

TEST_CASE("dispersion coefficients from D and S") {
  const FiberSpec fiber = reference_fiber();
  // Hand evaluation of -D l^2/(2 pi c) and (l^2/(2 pi c))^2 (S + 2D/l) at 1550 nm.
  const auto beta = dispersion_coefficients(fiber, 1550e-9);
  CHECK(beta.beta2_s2_per_m * 1e27 == doctest::Approx(-27.16705).epsilon(1e-6));
  CHECK(beta.beta3_s3_per_m * 1e39 == doctest::Approx(0.1537033).epsilon(1e-6));
  CHECK(beta.beta3_s3_per_m > 0.0);

  FiberSpec flat = fiber;
  flat.dispersion_s_per_m2 = 0.0;
  flat.dispersion_slope_s_per_m3 = 0.0;
  const auto zero = dispersion_coefficients(flat, 1480e-9);
  CHECK(zero.beta2_s2_per_m == 0.0);
  CHECK(zero.beta3_s3_per_m == 0.0);

  CHECK_THROWS_AS(dispersion_coefficients(fiber, 0.0), std::invalid_argument);

  SUBCASE("shift to the grid centre follows beta3") {
    const auto shifted = shift_dispersion(beta, 193.4e12, 200.67e12);
    CHECK(shifted.beta2_s2_per_m > beta.beta2_s2_per_m);
    CHECK(shifted.beta3_s3_per_m == beta.beta3_s3_per_m);
    const auto back = shift_dispersion(shifted, 200.67e12, 193.4e12);
    CHECK(back.beta2_s2_per_m == doctest::Approx(beta.beta2_s2_per_m).epsilon(1e-12));
  }
}

TEST_CASE("triangular Raman gain profile") {
  const ChannelGrid& grid = fixtures::reference_link().link.grid;
  CHECK(raman_gain_profile(grid, 13e12) * kKilo == doctest::Approx(0.028));
  CHECK(raman_gain_profile(grid, 0.0) == 0.0);
  CHECK(raman_gain_profile(grid, 6.5e12) * kKilo == doctest::Approx(0.014));
  CHECK(raman_gain_profile(grid, 13.5e12) == 0.0);
  CHECK(raman_gain_profile(grid, -6.5e12) == doctest::Approx(-raman_gain_profile(grid, 6.5e12)));
  CHECK(raman_gain_profile(grid, -20e12) == 0.0);
}

TEST_CASE("ASE power") {
  const FiberSpec fiber = reference_fiber();
  AmplifierSpec amp;
  CHECK(amp.spontaneous_emission_factor() == doctest::Approx(1.5811388));

  const Channel c1550{0, wavelength_to_frequency(1550e-9), 12.5e9, db_per_km_to_per_m(0.165)};
  // 2 n_sp h v (G - 1) B with G = 16.5 dB, evaluated independently.
  CHECK(ase_power(c1550, fiber, amp, 12.5e9) == doctest::Approx(2.212187435e-7).epsilon(1e-9));

  SUBCASE("zero-length span has no ASE") {
    FiberSpec none = fiber;
    none.span_length_m = 0.0;
    CHECK(ase_power(c1550, none, amp, 12.5e9) == 0.0);
  }
  SUBCASE("sub-unity gain is rejected") {
    Channel gainy = c1550;
    gainy.alpha_per_m = -1e-5;
    CHECK_THROWS_AS(ase_power(gainy, fiber, amp, 12.5e9), ModelError);
  }
  SUBCASE("strictly increasing in attenuation") {
    double last = 0.0;
    for (double db = 0.15; db < 0.25; db += 0.01) {
      const Channel ch{0, c1550.frequency_hz, 12.5e9, db_per_km_to_per_m(db)};
      const double p = ase_power(ch, fiber, amp, 12.5e9);
      CHECK(p > last);
      last = p;
    }
  }
}

TEST_CASE("SPM closed form") {
  const BuiltLink toy = fixtures::toy_link(3);
  const LaunchPlan plan = LaunchPlan::uniform(3, dbm_to_watt(0.0));

  SUBCASE("positive on the toy grid") { CHECK(eta_spm(toy.link, 1, plan) > 0.0); }

  SUBCASE("centre channel reduces to the Raman-free bracket") {
    // Channel 1 of 3 sits on the grid centre, so T = A^2 whatever the power.
    const LaunchPlan big = LaunchPlan::uniform(3, 1.0);
    CHECK(eta_spm(toy.link, 1, big) == doctest::Approx(eta_spm(toy.link, 1, plan)).epsilon(1e-14));
  }

  SUBCASE("zero nonlinearity gives zero") {
    Link quiet = toy.link;
    quiet.fiber.gamma_per_w_m = 0.0;
    CHECK(eta_spm(quiet, 0, plan) == 0.0);
    CHECK(eta_xpm(quiet, 0, plan) == 0.0);
  }

  SUBCASE("zero local dispersion is a model error") {
    Link flat = toy.link;
    flat.grid.beta2_s2_per_m = 0.0;
    flat.grid.beta3_s3_per_m = 0.0;
    CHECK_THROWS_AS(eta_spm(flat, 1, plan), ModelError);
  }
}

TEST_CASE("XPM closed form") {
  SUBCASE("single channel has no cross-channel term") {
    const BuiltLink one = fixtures::toy_link(1);
    CHECK(eta_xpm(one.link, 0, LaunchPlan::uniform(1, 1e-3)) == 0.0);
  }

  SUBCASE("doubling interferer power quadruples XPM without Raman") {
    const BuiltLink toy = fixtures::toy_link(5, "fiber.raman_gain_per_w_km = 0\n");
    const LaunchPlan base = LaunchPlan::uniform(5, 1e-3);
    LaunchPlan doubled({2e-3, 2e-3, 1e-3, 2e-3, 2e-3});
    CHECK(eta_xpm(toy.link, 2, doubled) == doctest::Approx(4.0 * eta_xpm(toy.link, 2, base)).epsilon(1e-12));
  }

  SUBCASE("zero pair dispersion uses the finite limit") {
    BuiltLink toy = fixtures::toy_link(3);
    toy.link.grid.beta2_s2_per_m = 0.0;
    toy.link.grid.beta3_s3_per_m = 0.0;
    const double eta = eta_xpm(toy.link, 1, LaunchPlan::uniform(3, 1e-3));
    CHECK(std::isfinite(eta));
    CHECK(eta > 0.0);
  }
}

TEST_CASE("span accumulation and SNR") {
  const BuiltLink toy = fixtures::toy_link(5);
  const LaunchPlan plan = LaunchPlan::uniform(5, dbm_to_watt(-3.0));
  const double one = eta_total(toy.link, 2, plan, 1);
  CHECK(one == doctest::Approx(eta_spm(toy.link, 2, plan) + eta_xpm(toy.link, 2, plan)).epsilon(1e-15));
  CHECK(eta_total(toy.link, 2, plan, 10) == doctest::Approx(10.0 * one).epsilon(1e-14));
  CHECK(eta_total(toy.link, 2, plan, 2) / one == doctest::Approx(2.0).epsilon(1e-15));
  CHECK_THROWS_AS(eta_total(toy.link, 2, plan, 0), std::invalid_argument);

  const NoiseBreakdown n1 = channel_snr(toy.link, 2, plan, 1);
  const NoiseBreakdown n100 = channel_snr(toy.link, 2, plan, 100);
  CHECK(n100.snr_db == doctest::Approx(n1.snr_db - 20.0).epsilon(1e-12));
  CHECK(n1.p_nli_w == doctest::Approx(n1.eta_per_w2 * std::pow(plan.power_w(2), 3)));
  CHECK(n1.snr_linear == doctest::Approx(plan.power_w(2) / (n1.p_ase_w + n1.p_nli_w)));

  SUBCASE("vanishing power is ASE limited") {
    const double p = 1e-9;
    const NoiseBreakdown tiny = combine_noise(0, p, n1.p_ase_w, n1.eta_per_w2, 3);
    CHECK(tiny.snr_linear == doctest::Approx(p / (3.0 * n1.p_ase_w)).epsilon(1e-10));
  }
}

TEST_CASE("uniform NLI table matches the direct sums") {
  const BuiltLink toy = fixtures::toy_link(41, "signal.channel_spacing_ghz = 400\n");
  const UniformNliTable table(toy.link);
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::size_t> pick(0, toy.link.grid.size() - 1);
  std::uniform_real_distribution<double> dbm(-25.0, 20.0);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t i = pick(rng);
    const double p = dbm_to_watt(dbm(rng));
    const LaunchPlan plan = LaunchPlan::uniform(toy.link.grid.size(), p);
    CHECK(relative(table.eta_spm(i, plan.total_power_w()), eta_spm(toy.link, i, plan)) < 1e-10);
    CHECK(relative(table.eta_xpm(i, plan.total_power_w()), eta_xpm(toy.link, i, plan)) < 1e-10);
  }
}

TEST_CASE("Raman-off spectral symmetry") {
  const BuiltLink sym = symmetric_link(21);
  const UniformNliTable table(sym.link);
  const double total = 21 * dbm_to_watt(0.0);
  const std::size_t n = sym.link.grid.size();
  for (std::size_t i = 0; i < n / 2; ++i) {
    CHECK(relative(table.eta(i, total), table.eta(n - 1 - i, total)) < 1e-10);
  }
}

TEST_CASE("launch plan") {
  const LaunchPlan plan = LaunchPlan::uniform(4, 2e-3);
  CHECK(plan.total_power_w() == doctest::Approx(8e-3));
  CHECK_THROWS_AS(LaunchPlan({1e-3, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(LaunchPlan(std::vector<double>{}), std::invalid_argument);
}

TEST_CASE("fiber and amplifier validation") {
  FiberSpec fiber = reference_fiber();
  CHECK_NOTHROW(fiber.validate());
  fiber.attenuation = {{1500e-9, 0.2}, {1400e-9, 0.2}};
  CHECK_THROWS_AS(fiber.validate(), ModelError);

  AmplifierSpec amp{-1.0};
  CHECK_THROWS_AS(amp.validate(), ModelError);
}
