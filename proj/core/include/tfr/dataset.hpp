#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "tfr/measurement.hpp"
#include "tfr/siggen.hpp"

namespace tfr {

/// Random 1- or 2-component LFM/SFM mixture with AM, IF laws kept in
/// [0.05, 0.45]. SNR is left unset.
MixtureSpec random_mixture(std::mt19937_64& rng, std::size_t n = 128, double t0 = 64.0);

/// True when two components' ridges share a bin in some column.
bool ridges_overlap(const MixtureSpec& spec);

std::string mixture_to_json(const MixtureSpec& spec);
MixtureSpec mixture_from_json(std::string_view text);

struct DatasetConfig {
  std::size_t count = 1;
  std::array<double, 2> snr_range{5.0, 25.0};
  std::filesystem::path out_dir;
  std::uint64_t seed = 0;
  std::size_t n = 128;
  double t0 = 64.0;
  MaskSpec mask{29, 29};
  /// Use this mixture for every sample instead of drawing one.
  std::optional<MixtureSpec> fixed_mixture;
};

struct DatasetEntry {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  double snr_db = 0.0;
  bool overlapped = false;
};

struct DatasetManifest {
  std::filesystem::path dir;
  std::size_t n = 0;
  MaskSpec mask;
  std::vector<DatasetEntry> samples;
};

/// Writes <i>.json, <i>.obs (a' as interleaved float32) and <i>.ideal
/// (N^2 float32, column-major) per sample plus manifest.json. Per-sample seeds
/// derive from (seed, index) only, so reruns are byte-identical.
DatasetManifest make_dataset(const DatasetConfig& config);

struct DatasetSample {
  MixtureSpec spec;
  std::vector<Complex> observation;
  TFMatrix ideal;
};

DatasetSample load_sample(const std::filesystem::path& dir, std::size_t index);

/// Deterministic per-item seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index, std::uint64_t stream = 0);

}  // namespace tfr
