#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tfr/types.hpp"

namespace tfr {

enum class ComponentKind { lfm, sfm };

/// One FM component of a synthetic mixture.
///
/// LFM phase:  2*pi * (chirp_rate * (n^2 - t0^2) + start_frequency * (n - t0)),
///             so IF(n) = 2 * chirp_rate * n + start_frequency (cycles/sample).
/// SFM phase:  carrier * (n - t0) + depth * sin(rate * (n - t0) - phase_offset)
///             - offset_gain * sin(phase_offset), everything in radians.
///             offset_gain defaults to depth.
struct ComponentSpec {
  ComponentKind kind = ComponentKind::lfm;

  double chirp_rate = 0.0;
  double start_frequency = 0.0;

  double carrier = 0.0;
  double depth = 0.0;
  double rate = 0.0;
  double phase_offset = 0.0;
  std::optional<double> offset_gain;

  bool amplitude_modulated = false;

  static ComponentSpec lfm(double chirp_rate, double start_frequency, bool am = false);
  static ComponentSpec sfm(double carrier, double depth, double rate, double phase_offset,
                           bool am = false);

  double phase(double n, double t0) const;
  /// Instantaneous frequency in cycles/sample.
  double instantaneous_frequency(double n, double t0) const;
};

struct MixtureSpec {
  std::vector<ComponentSpec> components;
  std::size_t n = 128;
  double t0 = 64.0;
  std::optional<double> snr_db;
};

/// Throws Error(invalid_argument) for bad sizes and Error(out_of_band) naming
/// the component whose IF law leaves [0, 0.5) on n in [0, N).
void validate(const MixtureSpec& spec);

/// a(t) = exp(-(0.0016 t - 1)^2 pi)
double am_envelope(double t);

/// Clean real mixture x[n] = sum_c a_c(n) cos(phase_c(n)).
std::vector<double> real_mixture(const MixtureSpec& spec);

/// Discrete analytic signal via the FFT: keep DC and Nyquist, double bins
/// 1..N/2-1, zero bins N/2+1..N-1.
Signal analytic_signal(std::span<const double> x);

/// Analytic associate of the (optionally noisy) real mixture. Noise is real
/// white Gaussian added before the analytic transform, with variance set from
/// the clean mixture power and spec.snr_db. Deterministic in (spec, seed).
Signal synthesize(const MixtureSpec& spec, std::uint64_t seed);

/// Single-bin-per-column ridge at round(2 IF N) mod N with amplitude a(n)^2
/// (1 without AM). Overlapping ridges add. Noise is ignored.
TFMatrix ideal_tfd(const MixtureSpec& spec);

/// Bin index of a normalized frequency on the compressed WVD axis.
std::size_t frequency_bin(double cycles_per_sample, std::size_t n);

/// The five two-component benchmark mixtures (1..5), N = 128, t0 = 64, AM on.
MixtureSpec benchmark_case(int which, std::optional<double> snr_db = std::nullopt);

}  // namespace tfr
