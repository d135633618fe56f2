#include "tfr/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>

#include "json.hpp"
#include "tfr/error.hpp"
#include "tfr/matrix_io.hpp"
#include "tfr/tfd.hpp"

namespace tfr {
namespace {

using nlohmann::json;

constexpr double band_lo = 0.05;
constexpr double band_hi = 0.45;

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

ComponentSpec random_lfm(std::mt19937_64& rng, std::size_t n) {
  const double f_start = uniform(rng, band_lo, band_hi);
  const double f_end = uniform(rng, band_lo, band_hi);
  // IF(n) = 2 a n + f0 reaches f_end at n = N.
  return ComponentSpec::lfm((f_end - f_start) / (2.0 * static_cast<double>(n)), f_start, true);
}

ComponentSpec random_sfm(std::mt19937_64& rng) {
  constexpr double pi = std::numbers::pi;
  const double center = uniform(rng, 0.1, 0.4);
  const double max_dev = std::min({0.15, center - band_lo, band_hi - center});
  const double deviation = uniform(rng, 0.01, max_dev);
  const double rate = uniform(rng, 0.005 * pi, 0.03 * pi);
  const double depth = 2.0 * pi * deviation / rate;
  const double phase = uniform(rng, -pi, pi);
  return ComponentSpec::sfm(2.0 * pi * center, depth, rate, phase, true);
}

json component_json(const ComponentSpec& c) {
  json j;
  j["am"] = c.amplitude_modulated;
  if (c.kind == ComponentKind::lfm) {
    j["kind"] = "lfm";
    j["chirp_rate"] = c.chirp_rate;
    j["start_frequency"] = c.start_frequency;
  } else {
    j["kind"] = "sfm";
    j["carrier"] = c.carrier;
    j["depth"] = c.depth;
    j["rate"] = c.rate;
    j["phase_offset"] = c.phase_offset;
    if (c.offset_gain) j["offset_gain"] = *c.offset_gain;
  }
  return j;
}

ComponentSpec component_from_json(const json& j) {
  ComponentSpec c;
  const auto kind = j.at("kind").get<std::string>();
  c.amplitude_modulated = j.value("am", false);
  if (kind == "lfm") {
    c.kind = ComponentKind::lfm;
    c.chirp_rate = j.at("chirp_rate").get<double>();
    c.start_frequency = j.at("start_frequency").get<double>();
  } else if (kind == "sfm") {
    c.kind = ComponentKind::sfm;
    c.carrier = j.at("carrier").get<double>();
    c.depth = j.at("depth").get<double>();
    c.rate = j.at("rate").get<double>();
    c.phase_offset = j.value("phase_offset", 0.0);
    if (j.contains("offset_gain")) c.offset_gain = j.at("offset_gain").get<double>();
  } else {
    throw Error(ErrorCode::format, "unknown component kind '" + kind + "'");
  }
  return c;
}

json mixture_json(const MixtureSpec& spec) {
  json comps = json::array();
  for (const auto& c : spec.components) comps.push_back(component_json(c));
  json j{{"N", spec.n}, {"t0", spec.t0}, {"components", comps}};
  j["snr_db"] = spec.snr_db ? json(*spec.snr_db) : json(nullptr);
  return j;
}

MixtureSpec mixture_from(const json& j) {
  MixtureSpec spec;
  spec.n = j.value("N", std::size_t{128});
  spec.t0 = j.value("t0", 64.0);
  for (const auto& c : j.at("components")) spec.components.push_back(component_from_json(c));
  if (j.contains("snr_db") && !j.at("snr_db").is_null()) spec.snr_db = j.at("snr_db").get<double>();
  return spec;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::io, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorCode::io, "write failed for " + path.string());
}

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io, "cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::format, path.string() + ": " + e.what());
  }
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
                    static_cast<std::uint32_t>(stream)};
  std::array<std::uint32_t, 2> out{};
  seq.generate(out.begin(), out.end());
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

MixtureSpec random_mixture(std::mt19937_64& rng, std::size_t n, double t0) {
  MixtureSpec spec;
  spec.n = n;
  spec.t0 = t0;
  const int count = std::uniform_int_distribution<int>(1, 2)(rng);
  for (int i = 0; i < count; ++i) {
    const bool sfm = std::bernoulli_distribution(0.5)(rng);
    spec.components.push_back(sfm ? random_sfm(rng) : random_lfm(rng, n));
  }
  return spec;
}

bool ridges_overlap(const MixtureSpec& spec) {
  if (spec.components.size() < 2) return false;
  for (std::size_t t = 0; t < spec.n; ++t) {
    const double n = static_cast<double>(t);
    for (std::size_t a = 0; a < spec.components.size(); ++a)
      for (std::size_t b = a + 1; b < spec.components.size(); ++b)
        if (frequency_bin(spec.components[a].instantaneous_frequency(n, spec.t0), spec.n) ==
            frequency_bin(spec.components[b].instantaneous_frequency(n, spec.t0), spec.n))
          return true;
  }
  return false;
}

std::string mixture_to_json(const MixtureSpec& spec) { return mixture_json(spec).dump(); }

MixtureSpec mixture_from_json(std::string_view text) {
  try {
    return mixture_from(json::parse(text));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::format, std::string("mixture spec: ") + e.what());
  }
}

DatasetManifest make_dataset(const DatasetConfig& config) {
  if (config.count == 0) throw Error(ErrorCode::invalid_argument, "dataset count must be >= 1");
  if (!(config.snr_range[0] <= config.snr_range[1]))
    throw Error(ErrorCode::invalid_argument, "snr_range must be [lo, hi] with lo <= hi");
  validate(config.mask, config.n);
  std::error_code ec;
  std::filesystem::create_directories(config.out_dir, ec);
  if (ec || !std::filesystem::is_directory(config.out_dir))
    throw Error(ErrorCode::io, "cannot create dataset directory " + config.out_dir.string());

  DatasetManifest manifest{config.out_dir, config.n, config.mask, {}};
  json samples = json::array();
  for (std::size_t i = 0; i < config.count; ++i) {
    std::mt19937_64 rng(derive_seed(config.seed, i));
    MixtureSpec spec = config.fixed_mixture ? *config.fixed_mixture : random_mixture(rng, config.n, config.t0);
    spec.snr_db = config.snr_range[0] == config.snr_range[1]
                      ? config.snr_range[0]
                      : uniform(rng, config.snr_range[0], config.snr_range[1]);
    const std::uint64_t noise_seed = derive_seed(config.seed, i, 1);

    const Signal z = synthesize(spec, noise_seed);
    const auto obs = apply_mask(af_direct(z), config.mask);
    const TFMatrix ideal = ideal_tfd(spec);
    const bool overlapped = ridges_overlap(spec);

    const std::string stem = std::to_string(i);
    io::write_f32(config.out_dir / (stem + ".obs"), std::span<const Complex>(obs));
    io::write_f32(config.out_dir / (stem + ".ideal"), ideal.values());
    json meta{{"index", i},
              {"seed", noise_seed},
              {"snr_db", *spec.snr_db},
              {"N", spec.n},
              {"mask", {{"d_nu", config.mask.d_nu}, {"d_tau", config.mask.d_tau}}},
              {"overlapped", overlapped},
              {"spec", mixture_json(spec)}};
    write_text(config.out_dir / (stem + ".json"), meta.dump(2) + "\n");

    samples.push_back({{"index", i},
                       {"json", stem + ".json"},
                       {"obs", stem + ".obs"},
                       {"ideal", stem + ".ideal"},
                       {"snr_db", *spec.snr_db},
                       {"overlapped", overlapped}});
    manifest.samples.push_back({i, noise_seed, *spec.snr_db, overlapped});
  }
  json top{{"version", 1},
           {"count", config.count},
           {"N", config.n},
           {"t0", config.t0},
           {"seed", config.seed},
           {"snr_range", config.snr_range},
           {"mask", {{"d_nu", config.mask.d_nu}, {"d_tau", config.mask.d_tau}}},
           {"obs_format", "f32le interleaved re/im, length 2M, mask column-major lag fastest"},
           {"ideal_format", "f32le N*N column-major, rows = frequency bins"},
           {"samples", samples}};
  write_text(config.out_dir / "manifest.json", top.dump(2) + "\n");
  return manifest;
}

DatasetSample load_sample(const std::filesystem::path& dir, std::size_t index) {
  const std::string stem = std::to_string(index);
  const json meta = read_json(dir / (stem + ".json"));
  DatasetSample s;
  s.spec = mixture_from(meta.at("spec"));
  s.observation = io::read_c32(dir / (stem + ".obs"));
  const MaskSpec mask{meta.at("mask").at("d_nu").get<std::size_t>(), meta.at("mask").at("d_tau").get<std::size_t>()};
  if (s.observation.size() != mask.size())
    throw Error(ErrorCode::format, "sample " + stem + " observation length does not match its mask");
  s.ideal = TFMatrix(s.spec.n, io::read_f32(dir / (stem + ".ideal")));
  return s;
}

}  // namespace tfr
