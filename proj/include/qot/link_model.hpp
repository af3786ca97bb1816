#pragma once

// Physical-layer model of a multi-span amplified link: per-channel ASE noise,
// ISRS-aware closed-form GN nonlinear interference (SPM + XPM) and the
// incoherent multi-span SNR. All quantities are SI (Hz, W, m, s) internally.

#include <cstddef>
#include <span>
#include <vector>

namespace qot {

struct AttenuationAnchor {
  double wavelength_m;
  double alpha_db_per_km;
};

struct FiberSpec {
  std::vector<AttenuationAnchor> attenuation;  // strictly increasing wavelength
  double dispersion_s_per_m2 = 0.0;            // D
  double dispersion_slope_s_per_m3 = 0.0;      // S
  double dispersion_reference_m = 1550e-9;     // wavelength at which D and S are quoted
  double raman_peak_gain_per_w_m = 0.0;        // Raman gain at the peak shift
  double raman_peak_shift_hz = 13e12;
  double gamma_per_w_m = 0.0;
  double span_length_m = 0.0;

  /// Throws ModelError naming the first violated invariant.
  void validate() const;
};

struct AmplifierSpec {
  double noise_figure_db = 5.0;

  /// n_sp in the high-gain limit, NF = 2 n_sp.
  double spontaneous_emission_factor() const;
  void validate() const;
};

struct Channel {
  int index = 0;
  double frequency_hz = 0.0;
  double bandwidth_hz = 0.0;
  double alpha_per_m = 0.0;  // power attenuation at this channel's wavelength
};

struct ChannelGrid {
  std::vector<Channel> channels;   // ascending frequency
  double center_frequency_hz = 0.0;
  double spacing_hz = 0.0;
  double beta2_s2_per_m = 0.0;     // at the grid center
  double beta3_s3_per_m = 0.0;
  double raman_slope_per_w_m_hz = 0.0;
  double raman_cutoff_hz = 13e12;

  std::size_t size() const { return channels.size(); }
  const Channel& operator[](std::size_t i) const { return channels[i]; }

  /// Frequency offset of channel i from the grid center.
  double offset_hz(std::size_t i) const { return channels[i].frequency_hz - center_frequency_hz; }

  void validate() const;
};

/// Launch powers per channel. The planning workflows use uniform plans; a
/// general vector is accepted so interferer scaling can be studied.
class LaunchPlan {
 public:
  explicit LaunchPlan(std::vector<double> channel_power_w);
  static LaunchPlan uniform(std::size_t channel_count, double power_w);

  double power_w(std::size_t i) const { return power_w_[i]; }
  double total_power_w() const { return total_w_; }
  std::size_t size() const { return power_w_.size(); }

 private:
  std::vector<double> power_w_;
  double total_w_ = 0.0;
};

/// Everything needed to evaluate the noise of one link.
struct Link {
  FiberSpec fiber;
  AmplifierSpec amplifier;
  ChannelGrid grid;
  double noise_bandwidth_hz = 12.5e9;
};

struct NoiseBreakdown {
  int channel_index = 0;
  double p_ase_w = 0.0;       // per span
  double eta_per_w2 = 0.0;    // per span
  double p_nli_w = 0.0;       // eta * P^3, per span
  double snr_linear = 0.0;
  double snr_db = 0.0;
  int span_count = 1;
};

struct DispersionCoefficients {
  double beta2_s2_per_m;
  double beta3_s3_per_m;
};

/// Wavelength window covered by the E..L band plan.
inline constexpr double kModelWavelengthMin = 1365e-9;
inline constexpr double kModelWavelengthMax = 1615e-9;

/// Piecewise-linear in wavelength over the dB/km anchors, clamped outside the
/// anchor range, returned as a power attenuation in 1/m. Throws DomainError
/// outside [kModelWavelengthMin, kModelWavelengthMax].
double interpolate_attenuation(const FiberSpec& fiber, double wavelength_m);

/// beta2 = -D l^2 / (2 pi c), beta3 = (l^2 / (2 pi c))^2 (S + 2 D / l).
DispersionCoefficients dispersion_coefficients(const FiberSpec& fiber, double reference_wavelength_m);

/// Taylor shift of beta2/beta3 from `from_hz` to `to_hz`.
DispersionCoefficients shift_dispersion(DispersionCoefficients at, double from_hz, double to_hz);

/// Triangular Raman gain: slope * shift up to the cutoff, zero beyond, odd in shift.
double raman_gain_profile(const ChannelGrid& grid, double shift_hz);

/// Linear amplifier gain that exactly compensates one span at this channel.
double span_gain(const Channel& ch, double span_length_m);

/// P_ASE = 2 n_sp h v (G - 1) B_noise. Throws ModelError when G < 1.
double ase_power(const Channel& ch, const FiberSpec& fiber, const AmplifierSpec& amp,
                 double noise_bandwidth_hz);

/// Single-span SPM coefficient of channel i [1/W^2]. Throws ModelError at zero dispersion.
double eta_spm(const Link& link, std::size_t i, const LaunchPlan& plan);

/// Single-span XPM coefficient of channel i summed over all other channels [1/W^2].
double eta_xpm(const Link& link, std::size_t i, const LaunchPlan& plan);

/// NLI coefficient accumulated over `span_count` identical spans.
double eta_total(const Link& link, std::size_t i, const LaunchPlan& plan, int span_count);

/// Incoherent SNR from per-span ASE and NLI: P / (N P_ase + N eta P^3).
NoiseBreakdown combine_noise(int channel_index, double power_w, double p_ase_w, double eta_per_w2,
                             int span_count);

/// Full noise breakdown of channel i after `span_count` spans.
NoiseBreakdown channel_snr(const Link& link, std::size_t i, const LaunchPlan& plan, int span_count);

/// Precomputed NLI for uniform launch plans.
///
/// Under a uniform plan the only power dependence of eta_SPM + eta_XPM enters
/// through T = (A - P_tot C_r f)^2, so each channel's coefficient is an exact
/// quadratic in total launch power. Building the table costs one O(N^2) pass;
/// every subsequent power point is O(N).
class UniformNliTable {
 public:
  explicit UniformNliTable(const Link& link);

  double eta_spm(std::size_t i, double total_power_w) const;
  double eta_xpm(std::size_t i, double total_power_w) const;
  double eta(std::size_t i, double total_power_w) const {
    return eta_spm(i, total_power_w) + eta_xpm(i, total_power_w);
  }
  std::size_t size() const { return spm_.size(); }

 private:
  struct Quadratic {
    double c0 = 0.0, c1 = 0.0, c2 = 0.0;
    double at(double x) const { return c0 + x * (c1 + x * c2); }
  };
  std::vector<Quadratic> spm_;
  std::vector<Quadratic> xpm_;
};

/// Per-channel ASE power for every channel of the grid.
std::vector<double> ase_profile(const Link& link);

/// Breakdown of every channel at a uniform per-channel launch power.
std::vector<NoiseBreakdown> noise_profile(const Link& link, const UniformNliTable& nli,
                                          std::span<const double> ase_w, double channel_power_w,
                                          int span_count);

}  // namespace qot
