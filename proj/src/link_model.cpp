#include "qot/link_model.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "qot/errors.hpp"
#include "qot/parallel.hpp"
#include "qot/units.hpp"

namespace qot {

namespace {

constexpr double kPi = std::numbers::pi;

// atan(phi * x) / phi, continuous through phi = 0.
double atan_ratio(double phi, double x) {
  if (phi == 0.0) return x;
  return std::atan(phi * x) / phi;
}

// SPM local dispersion term.
double spm_phase(const ChannelGrid& grid, std::size_t i) {
  return (2.0 / 3.0) * kPi * kPi *
         (grid.beta2_s2_per_m + 2.0 * kPi * grid.beta3_s3_per_m * grid.offset_hz(i));
}

// XPM pair dispersion term between channel under test i and interferer k.
double xpm_phase(const ChannelGrid& grid, std::size_t i, std::size_t k) {
  const double fi = grid.offset_hz(i);
  const double fk = grid.offset_hz(k);
  return 2.0 * kPi * kPi * (fk - fi) *
         (grid.beta2_s2_per_m + kPi * grid.beta3_s3_per_m * (fk + fi));
}

// Pieces of the SPM closed form that do not depend on launch power.
struct SpmTerms {
  double prefactor;  // (4/9) gamma^2 / B^2 * pi / (phi * a * 3a)
  double s1;         // asinh(phi B^2 / (pi a))
  double s2;         // asinh(phi B^2 / (pi A))
};

SpmTerms spm_terms(const Link& link, std::size_t i) {
  const ChannelGrid& grid = link.grid;
  const double phi = spm_phase(grid, i);
  if (phi == 0.0) {
    throw ModelError(fmt::format("SPM dispersion term vanishes at channel {} ({:.4f} THz)",
                                 grid[i].index, grid[i].frequency_hz / kTera));
  }
  const double a = grid[i].alpha_per_m;
  const double big_a = 2.0 * a;
  const double b = grid[i].bandwidth_hz;
  const double gamma = link.fiber.gamma_per_w_m;
  return {
      (4.0 / 9.0) * gamma * gamma / (b * b) * kPi / (phi * a * 3.0 * a),
      std::asinh(phi * b * b / (kPi * a)),
      std::asinh(phi * b * b / (kPi * big_a)),
  };
}

// Pieces of one XPM term (interferer k on channel i) independent of power.
struct XpmTerms {
  double prefactor;  // (32/27) gamma^2 / (B_k * 3a^2)
  double t1;         // atan(phi_ik B_i / a) / phi_ik
  double t2;         // atan(phi_ik B_i / A) / phi_ik
};

XpmTerms xpm_terms(const Link& link, std::size_t i, std::size_t k) {
  const ChannelGrid& grid = link.grid;
  const double a = grid[i].alpha_per_m;
  const double big_a = 2.0 * a;
  const double phi = xpm_phase(grid, i, k);
  const double bi = grid[i].bandwidth_hz;
  const double gamma = link.fiber.gamma_per_w_m;
  return {
      (32.0 / 27.0) * gamma * gamma / (grid[k].bandwidth_hz * 3.0 * a * a),
      atan_ratio(phi, bi / a),
      atan_ratio(phi, bi / big_a),
  };
}

// ISRS power-profile factor T = (A - P_tot C_r f)^2.
double isrs_factor(double big_a, double total_power_w, double raman_slope, double offset_hz) {
  const double t = big_a - total_power_w * raman_slope * offset_hz;
  return t * t;
}

}  // namespace

void FiberSpec::validate() const {
  if (attenuation.empty()) throw ModelError("fiber attenuation needs at least one anchor");
  for (std::size_t i = 0; i < attenuation.size(); ++i) {
    if (!(attenuation[i].alpha_db_per_km > 0.0)) {
      throw ModelError(fmt::format("attenuation anchor {} must be positive", i));
    }
    if (i > 0 && !(attenuation[i].wavelength_m > attenuation[i - 1].wavelength_m)) {
      throw ModelError("attenuation anchor wavelengths must be strictly increasing");
    }
  }
  if (!(span_length_m > 0.0)) throw ModelError("span length must be positive");
  if (!(gamma_per_w_m > 0.0)) throw ModelError("nonlinear coefficient must be positive");
  if (!(raman_peak_shift_hz > 0.0)) throw ModelError("Raman peak shift must be positive");
  if (!(dispersion_reference_m > 0.0)) throw ModelError("dispersion reference wavelength must be positive");
}

double AmplifierSpec::spontaneous_emission_factor() const {
  return db_to_linear(noise_figure_db) / 2.0;
}

void AmplifierSpec::validate() const {
  if (!(noise_figure_db > 0.0)) throw ModelError("noise figure must be positive");
  if (spontaneous_emission_factor() < 0.5) {
    throw ModelError("noise figure implies n_sp < 0.5");
  }
}

void ChannelGrid::validate() const {
  if (channels.empty()) throw ModelError("channel grid is empty");
  for (std::size_t i = 0; i < channels.size(); ++i) {
    const Channel& ch = channels[i];
    if (!(ch.bandwidth_hz > 0.0) || !(ch.alpha_per_m > 0.0) || !(ch.frequency_hz > 0.0)) {
      throw ModelError(fmt::format("channel {} has non-positive bandwidth, attenuation or frequency", ch.index));
    }
    if (i > 0) {
      const double step = ch.frequency_hz - channels[i - 1].frequency_hz;
      if (std::abs(step - spacing_hz) > 1e-6 * spacing_hz) {
        throw ModelError(fmt::format("channel {} breaks the uniform {} Hz spacing", ch.index, spacing_hz));
      }
    }
  }
  if (channels.size() > 1 && spacing_hz < channels.front().bandwidth_hz * (1.0 - 1e-12)) {
    throw ModelError("channel spacing is narrower than the channel bandwidth");
  }
}

LaunchPlan::LaunchPlan(std::vector<double> channel_power_w) : power_w_(std::move(channel_power_w)) {
  if (power_w_.empty()) throw std::invalid_argument("launch plan needs at least one channel");
  for (double p : power_w_) {
    if (!(p > 0.0)) throw std::invalid_argument("launch powers must be positive");
  }
  total_w_ = std::accumulate(power_w_.begin(), power_w_.end(), 0.0);
}

LaunchPlan LaunchPlan::uniform(std::size_t channel_count, double power_w) {
  return LaunchPlan(std::vector<double>(channel_count, power_w));
}

double interpolate_attenuation(const FiberSpec& fiber, double wavelength_m) {
  // Small slack so that rounding in c/f at the exact window edges is accepted.
  constexpr double kSlack = 1e-15;
  if (!(wavelength_m >= kModelWavelengthMin - kSlack && wavelength_m <= kModelWavelengthMax + kSlack)) {
    throw DomainError(fmt::format("wavelength {:.4f} nm is outside the {:.0f}-{:.0f} nm band plan",
                                  wavelength_m / kNano, kModelWavelengthMin / kNano,
                                  kModelWavelengthMax / kNano));
  }
  const auto& anchors = fiber.attenuation;
  if (anchors.empty()) throw ModelError("fiber attenuation needs at least one anchor");

  double alpha_db;
  if (wavelength_m <= anchors.front().wavelength_m) {
    alpha_db = anchors.front().alpha_db_per_km;
  } else if (wavelength_m >= anchors.back().wavelength_m) {
    alpha_db = anchors.back().alpha_db_per_km;
  } else {
    const auto hi = std::upper_bound(anchors.begin(), anchors.end(), wavelength_m,
                                     [](double w, const AttenuationAnchor& a) { return w < a.wavelength_m; });
    const auto lo = hi - 1;
    const double t = (wavelength_m - lo->wavelength_m) / (hi->wavelength_m - lo->wavelength_m);
    alpha_db = lo->alpha_db_per_km + t * (hi->alpha_db_per_km - lo->alpha_db_per_km);
  }
  return db_per_km_to_per_m(alpha_db);
}

DispersionCoefficients dispersion_coefficients(const FiberSpec& fiber, double reference_wavelength_m) {
  if (!(reference_wavelength_m > 0.0)) {
    throw std::invalid_argument("reference wavelength must be positive");
  }
  const double lambda = reference_wavelength_m;
  const double k = lambda * lambda / (2.0 * kPi * kSpeedOfLight);
  const double d = fiber.dispersion_s_per_m2;
  const double s = fiber.dispersion_slope_s_per_m3;
  return {-d * k, k * k * (s + 2.0 * d / lambda)};
}

DispersionCoefficients shift_dispersion(DispersionCoefficients at, double from_hz, double to_hz) {
  return {at.beta2_s2_per_m + 2.0 * kPi * at.beta3_s3_per_m * (to_hz - from_hz), at.beta3_s3_per_m};
}

double raman_gain_profile(const ChannelGrid& grid, double shift_hz) {
  const double magnitude = std::abs(shift_hz);
  if (magnitude > grid.raman_cutoff_hz) return 0.0;
  return grid.raman_slope_per_w_m_hz * shift_hz;
}

double span_gain(const Channel& ch, double span_length_m) {
  // 10^(alpha_dB L / 10) == exp(alpha_lin L)
  return std::exp(ch.alpha_per_m * span_length_m);
}

double ase_power(const Channel& ch, const FiberSpec& fiber, const AmplifierSpec& amp,
                 double noise_bandwidth_hz) {
  const double gain = span_gain(ch, fiber.span_length_m);
  if (gain < 1.0) {
    throw ModelError(fmt::format("span gain {} below unity at channel {}", gain, ch.index));
  }
  const double nsp = amp.spontaneous_emission_factor();
  return 2.0 * nsp * kPlanck * ch.frequency_hz * (gain - 1.0) * noise_bandwidth_hz;
}

double eta_spm(const Link& link, std::size_t i, const LaunchPlan& plan) {
  const ChannelGrid& grid = link.grid;
  const SpmTerms terms = spm_terms(link, i);
  const double a = grid[i].alpha_per_m;
  const double big_a = 2.0 * a;
  const double t = isrs_factor(big_a, plan.total_power_w(), grid.raman_slope_per_w_m_hz, grid.offset_hz(i));
  return terms.prefactor * ((t - a * a) / a * terms.s1 + (big_a * big_a - t) / big_a * terms.s2);
}

double eta_xpm(const Link& link, std::size_t i, const LaunchPlan& plan) {
  const ChannelGrid& grid = link.grid;
  const double a = grid[i].alpha_per_m;
  const double big_a = 2.0 * a;
  const double pi_w = plan.power_w(i);
  double sum = 0.0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (k == i) continue;
    const XpmTerms terms = xpm_terms(link, i, k);
    const double ratio = plan.power_w(k) / pi_w;
    const double t = isrs_factor(big_a, plan.total_power_w(), grid.raman_slope_per_w_m_hz, grid.offset_hz(k));
    sum += ratio * ratio * terms.prefactor *
           ((t - a * a) / a * terms.t1 + (big_a * big_a - t) / big_a * terms.t2);
  }
  return sum;
}

double eta_total(const Link& link, std::size_t i, const LaunchPlan& plan, int span_count) {
  if (span_count < 1) throw std::invalid_argument("span count must be at least 1");
  return span_count * (eta_spm(link, i, plan) + eta_xpm(link, i, plan));
}

NoiseBreakdown combine_noise(int channel_index, double power_w, double p_ase_w, double eta_per_w2,
                             int span_count) {
  if (span_count < 1) throw std::invalid_argument("span count must be at least 1");
  if (!(power_w > 0.0)) throw std::invalid_argument("channel power must be positive");
  NoiseBreakdown out;
  out.channel_index = channel_index;
  out.p_ase_w = p_ase_w;
  out.eta_per_w2 = eta_per_w2;
  out.p_nli_w = eta_per_w2 * power_w * power_w * power_w;
  out.span_count = span_count;
  out.snr_linear = power_w / (span_count * p_ase_w + span_count * out.p_nli_w);
  out.snr_db = linear_to_db(out.snr_linear);
  return out;
}

NoiseBreakdown channel_snr(const Link& link, std::size_t i, const LaunchPlan& plan, int span_count) {
  const double p_ase = ase_power(link.grid[i], link.fiber, link.amplifier, link.noise_bandwidth_hz);
  const double eta = eta_spm(link, i, plan) + eta_xpm(link, i, plan);
  return combine_noise(link.grid[i].index, plan.power_w(i), p_ase, eta, span_count);
}

UniformNliTable::UniformNliTable(const Link& link)
    : spm_(link.grid.size()), xpm_(link.grid.size()) {
  const ChannelGrid& grid = link.grid;
  const double cr = grid.raman_slope_per_w_m_hz;

  // With T = A^2 - 2 A C_r f x + C_r^2 f^2 x^2 (x = P_tot), each bracket
  // (T - a^2)/a s1 + (A^2 - T)/A s2 = T u - a s1 + A s2 with u = s1/a - s2/A.
  parallel_for(grid.size(), [&](std::size_t i) {
    const double a = grid[i].alpha_per_m;
    const double big_a = 2.0 * a;

    const SpmTerms s = spm_terms(link, i);
    const double fi = grid.offset_hz(i);
    const double us = s.s1 / a - s.s2 / big_a;
    spm_[i] = {s.prefactor * (big_a * big_a * us - a * s.s1 + big_a * s.s2),
               s.prefactor * us * (-2.0 * big_a * cr * fi),
               s.prefactor * us * cr * cr * fi * fi};

    Quadratic q;
    for (std::size_t k = 0; k < grid.size(); ++k) {
      if (k == i) continue;
      const XpmTerms x = xpm_terms(link, i, k);
      const double fk = grid.offset_hz(k);
      const double ux = x.prefactor * (x.t1 / a - x.t2 / big_a);
      q.c0 += big_a * big_a * ux + x.prefactor * (big_a * x.t2 - a * x.t1);
      q.c1 += ux * fk;
      q.c2 += ux * fk * fk;
    }
    q.c1 *= -2.0 * big_a * cr;
    q.c2 *= cr * cr;
    xpm_[i] = q;
  });
}

double UniformNliTable::eta_spm(std::size_t i, double total_power_w) const {
  return spm_[i].at(total_power_w);
}

double UniformNliTable::eta_xpm(std::size_t i, double total_power_w) const {
  return xpm_[i].at(total_power_w);
}

std::vector<double> ase_profile(const Link& link) {
  std::vector<double> out(link.grid.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = ase_power(link.grid[i], link.fiber, link.amplifier, link.noise_bandwidth_hz);
  }
  return out;
}

std::vector<NoiseBreakdown> noise_profile(const Link& link, const UniformNliTable& nli,
                                          std::span<const double> ase_w, double channel_power_w,
                                          int span_count) {
  const std::size_t n = link.grid.size();
  if (ase_w.size() != n || nli.size() != n) {
    throw std::invalid_argument("noise profile inputs do not match the grid size");
  }
  const double total = channel_power_w * static_cast<double>(n);
  std::vector<NoiseBreakdown> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = combine_noise(link.grid[i].index, channel_power_w, ase_w[i], nli.eta(i, total), span_count);
  }
  return out;
}

}  // namespace qot
