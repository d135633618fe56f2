#include "tfr/siggen.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "tfr/error.hpp"
#include "tfr/fft.hpp"

namespace tfr {
namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::string describe(const ComponentSpec& c, std::size_t index) {
  return "component " + std::to_string(index) + " (" +
         (c.kind == ComponentKind::lfm ? "LFM" : "SFM") + ")";
}

}  // namespace

ComponentSpec ComponentSpec::lfm(double chirp_rate, double start_frequency, bool am) {
  ComponentSpec c;
  c.kind = ComponentKind::lfm;
  c.chirp_rate = chirp_rate;
  c.start_frequency = start_frequency;
  c.amplitude_modulated = am;
  return c;
}

ComponentSpec ComponentSpec::sfm(double carrier, double depth, double rate, double phase_offset,
                                 bool am) {
  ComponentSpec c;
  c.kind = ComponentKind::sfm;
  c.carrier = carrier;
  c.depth = depth;
  c.rate = rate;
  c.phase_offset = phase_offset;
  c.amplitude_modulated = am;
  return c;
}

double ComponentSpec::phase(double n, double t0) const {
  if (kind == ComponentKind::lfm)
    return two_pi * (chirp_rate * (n * n - t0 * t0) + start_frequency * (n - t0));
  const double gain = offset_gain.value_or(depth);
  return carrier * (n - t0) + depth * std::sin(rate * (n - t0) - phase_offset) -
         gain * std::sin(phase_offset);
}

double ComponentSpec::instantaneous_frequency(double n, double t0) const {
  if (kind == ComponentKind::lfm) return 2.0 * chirp_rate * n + start_frequency;
  return (carrier + depth * rate * std::cos(rate * (n - t0) - phase_offset)) / two_pi;
}

void validate(const MixtureSpec& spec) {
  if (spec.n < 16 || !is_power_of_two(spec.n))
    throw Error(ErrorCode::invalid_argument,
                "mixture length must be a power of two >= 16, got " + std::to_string(spec.n));
  if (!(spec.t0 >= 0.0 && spec.t0 < static_cast<double>(spec.n)))
    throw Error(ErrorCode::invalid_argument, "t0 must lie in [0, N)");
  if (spec.snr_db && !std::isfinite(*spec.snr_db))
    throw Error(ErrorCode::invalid_argument, "snr_db must be finite");
  for (std::size_t c = 0; c < spec.components.size(); ++c) {
    const auto& comp = spec.components[c];
    for (std::size_t t = 0; t < spec.n; ++t) {
      const double f = comp.instantaneous_frequency(static_cast<double>(t), spec.t0);
      if (!(f >= 0.0 && f < 0.5))
        throw Error(ErrorCode::out_of_band,
                    describe(comp, c) + " has IF " + std::to_string(f) + " at n=" +
                        std::to_string(t) + ", outside [0, 0.5)");
    }
  }
}

double am_envelope(double t) {
  const double u = 0.0016 * t - 1.0;
  return std::exp(-u * u * std::numbers::pi);
}

std::vector<double> real_mixture(const MixtureSpec& spec) {
  validate(spec);
  std::vector<double> x(spec.n, 0.0);
  for (const auto& comp : spec.components) {
    for (std::size_t t = 0; t < spec.n; ++t) {
      const double n = static_cast<double>(t);
      const double amp = comp.amplitude_modulated ? am_envelope(n) : 1.0;
      x[t] += amp * std::cos(comp.phase(n, spec.t0));
    }
  }
  return x;
}

Signal analytic_signal(std::span<const double> x) {
  const std::size_t n = x.size();
  Signal spectrum(x.begin(), x.end());
  if (n < 2) return spectrum;
  fft::forward(spectrum);
  const std::size_t half = n / 2;
  for (std::size_t k = 1; k < n; ++k) {
    if (k < half || (n % 2 == 1 && k == half))
      spectrum[k] *= 2.0;
    else if (k > half)
      spectrum[k] = 0.0;
  }
  // Inverse via conj(FFT(conj(X))) / N.
  for (auto& v : spectrum) v = std::conj(v);
  fft::forward(spectrum);
  const double scale = 1.0 / static_cast<double>(n);
  for (auto& v : spectrum) v = std::conj(v) * scale;
  return spectrum;
}

Signal synthesize(const MixtureSpec& spec, std::uint64_t seed) {
  std::vector<double> x = real_mixture(spec);
  if (spec.snr_db) {
    double power = 0.0;
    for (double v : x) power += v * v;
    power /= static_cast<double>(x.size());
    const double sigma = std::sqrt(power / std::pow(10.0, *spec.snr_db / 10.0));
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, 1.0);
    for (double& v : x) v += sigma * noise(rng);
  }
  return analytic_signal(x);
}

std::size_t frequency_bin(double cycles_per_sample, std::size_t n) {
  const auto bin = static_cast<long long>(std::llround(2.0 * cycles_per_sample * static_cast<double>(n)));
  const auto nn = static_cast<long long>(n);
  return static_cast<std::size_t>(((bin % nn) + nn) % nn);
}

TFMatrix ideal_tfd(const MixtureSpec& spec) {
  validate(spec);
  TFMatrix w(spec.n);
  for (const auto& comp : spec.components) {
    for (std::size_t t = 0; t < spec.n; ++t) {
      const double n = static_cast<double>(t);
      const double amp = comp.amplitude_modulated ? am_envelope(n) : 1.0;
      w(frequency_bin(comp.instantaneous_frequency(n, spec.t0), spec.n), t) += amp * amp;
    }
  }
  return w;
}

MixtureSpec benchmark_case(int which, std::optional<double> snr_db) {
  constexpr double pi = std::numbers::pi;
  MixtureSpec spec;
  spec.n = 128;
  spec.t0 = 64.0;
  spec.snr_db = snr_db;
  switch (which) {
    case 1:  // far-located LFMs
      spec.components = {ComponentSpec::lfm(0.0002, 0.441, true),
                         ComponentSpec::lfm(0.0004, 0.133, true)};
      break;
    case 2:  // closely-located LFMs
      spec.components = {ComponentSpec::lfm(-0.0003, 0.3164, true),
                         ComponentSpec::lfm(0.0001, 0.211, true)};
      break;
    case 3:  // crossing LFMs
      spec.components = {ComponentSpec::lfm(-0.0006, 0.29, true),
                         ComponentSpec::lfm(0.0011, 0.109, true)};
      break;
    case 4:  // LFM + SFM, non-overlapped
      spec.components = {ComponentSpec::lfm(0.0002, 0.297, true),
                         ComponentSpec::sfm(0.27 * pi, 9.98, 0.0156 * pi, -1.403, true)};
      break;
    case 5: {  // LFM + SFM, overlapped
      auto sfm = ComponentSpec::sfm(0.42 * pi, 15.9, 0.0156 * pi, -1.832, true);
      // Constant term kept as published (0.0156, not the depth); it only
      // shifts the phase.
      sfm.offset_gain = 0.0156;
      spec.components = {ComponentSpec::lfm(-0.0004, 0.117, true), sfm};
      break;
    }
    default:
      throw Error(ErrorCode::invalid_argument,
                  "benchmark case must be 1..5, got " + std::to_string(which));
  }
  return spec;
}

}  // namespace tfr
