#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <random>
#include <string>

#include "json.hpp"
#include "tfr/error.hpp"
#include "tfr/unet.hpp"

namespace tfr {
namespace {

using nlohmann::json;

constexpr char magic[4] = {'U', 'W', 'B', '1'};
constexpr int format_version = 1;

static_assert(std::endian::native == std::endian::little, "weight files assume a little-endian host");

std::string prefix(std::size_t layer) { return "layer" + std::to_string(layer) + "."; }

const char* to_string(ThresholdInput in) {
  return in == ThresholdInput::pre_threshold ? "pre_threshold" : "iterate";
}

ThresholdInput parse_threshold_input(const std::string& s) {
  if (s == "pre_threshold") return ThresholdInput::pre_threshold;
  if (s == "iterate") return ThresholdInput::iterate;
  throw Error(ErrorCode::format, "unknown threshold_input flag '" + s + "'");
}

json manifest(const WeightBundle& bundle) {
  json tensors = json::array();
  std::size_t offset = 0;
  for (std::size_t k = 0; k < bundle.nets.size(); ++k)
    for (const auto& t : bundle.nets[k].tensors) {
      const std::size_t len = t.values.size() * sizeof(float);
      tensors.push_back({{"name", prefix(k) + t.name},
                         {"shape", t.shape},
                         {"dtype", "f32"},
                         {"offset", offset},
                         {"len", len}});
      offset += len;
    }
  return {
      {"version", bundle.version},
      {"K", bundle.nets.size()},
      {"N_hint", bundle.n_hint},
      {"arch",
       {{"levels", bundle.arch.levels()},
        {"channels", bundle.arch.channels},
        {"kernel", bundle.arch.kernel},
        {"head", "softplus"},
        {"activation", "relu"},
        {"upsample", "nearest2x+conv3x3"},
        {"pool", "max2x2"},
        {"skip", "concat_up_first"}}},
      {"flags",
       {{"threshold_input", to_string(bundle.threshold_input)},
        {"normalize_input", bundle.normalize_input}}},
      {"tensors", tensors},
      {"scalars", {{"t", bundle.steps}}},
  };
}

template <class T>
T field(const json& j, const char* key) {
  if (!j.contains(key)) throw Error(ErrorCode::format, std::string("manifest is missing '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::format, std::string("manifest field '") + key + "': " + e.what());
  }
}

}  // namespace

void validate(const WeightBundle& bundle) {
  if (bundle.nets.empty()) throw Error(ErrorCode::format, "weight bundle has K = 0");
  if (bundle.steps.size() != bundle.nets.size())
    throw Error(ErrorCode::format, "bundle has " + std::to_string(bundle.nets.size()) +
                                       " networks but " + std::to_string(bundle.steps.size()) +
                                       " step sizes");
  for (std::size_t k = 0; k < bundle.steps.size(); ++k)
    if (!std::isfinite(bundle.steps[k]))
      throw Error(ErrorCode::non_finite, "step t[" + std::to_string(k) + "] is not finite");
  const auto layout = unet_layout(bundle.arch);
  for (std::size_t k = 0; k < bundle.nets.size(); ++k) {
    const auto& net = bundle.nets[k];
    if (net.tensors.size() != layout.size())
      throw Error(ErrorCode::format, "network " + std::to_string(k) + " has " +
                                         std::to_string(net.tensors.size()) + " tensors, expected " +
                                         std::to_string(layout.size()));
    for (std::size_t i = 0; i < layout.size(); ++i) {
      const auto& t = net.tensors[i];
      const auto name = prefix(k) + layout[i].name;
      if (t.name != layout[i].name)
        throw Error(ErrorCode::format, "expected tensor " + name + ", found " + prefix(k) + t.name);
      if (t.shape != layout[i].shape || t.values.size() != layout[i].numel())
        throw Error(ErrorCode::format, "tensor " + name + " has the wrong shape");
      for (float v : t.values)
        if (!std::isfinite(v)) throw Error(ErrorCode::non_finite, "tensor " + name + " contains NaN/Inf");
    }
  }
}

std::vector<std::uint8_t> encode_weights(const WeightBundle& bundle) {
  validate(bundle);
  const std::string text = manifest(bundle).dump();
  std::size_t blob = 0;
  for (const auto& net : bundle.nets)
    for (const auto& t : net.tensors) blob += t.values.size() * sizeof(float);
  std::vector<std::uint8_t> out(8 + text.size() + blob);
  const auto len = static_cast<std::uint32_t>(text.size());
  std::memcpy(out.data(), magic, 4);
  std::memcpy(out.data() + 4, &len, 4);
  std::memcpy(out.data() + 8, text.data(), text.size());
  std::size_t offset = 8 + text.size();
  for (const auto& net : bundle.nets)
    for (const auto& t : net.tensors) {
      const std::size_t bytes = t.values.size() * sizeof(float);
      std::memcpy(out.data() + offset, t.values.data(), bytes);
      offset += bytes;
    }
  return out;
}

WeightBundle decode_weights(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < 8 || std::memcmp(bytes.data(), magic, 4) != 0)
    throw Error(ErrorCode::format, "bad magic: not a UWB1 weight file");
  std::uint32_t len = 0;
  std::memcpy(&len, bytes.data() + 4, 4);
  if (bytes.size() < 8 + static_cast<std::size_t>(len))
    throw Error(ErrorCode::format, "truncated manifest: expected " + std::to_string(8 + std::size_t{len}) +
                                       " bytes, got " + std::to_string(bytes.size()));
  json m;
  try {
    m = json::parse(bytes.begin() + 8, bytes.begin() + 8 + len);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::format, std::string("manifest is not valid JSON: ") + e.what());
  }

  WeightBundle b;
  b.version = field<int>(m, "version");
  if (b.version != format_version)
    throw Error(ErrorCode::format, "unsupported weight format version " + std::to_string(b.version));
  const auto k = field<std::size_t>(m, "K");
  b.n_hint = field<std::size_t>(m, "N_hint");
  const json& arch = m.at("arch");
  b.arch.channels = field<std::vector<int>>(arch, "channels");
  b.arch.kernel = field<int>(arch, "kernel");
  if (field<std::size_t>(arch, "levels") != b.arch.channels.size())
    throw Error(ErrorCode::format, "arch.levels does not match arch.channels");
  if (field<std::string>(arch, "head") != "softplus")
    throw Error(ErrorCode::format, "unsupported head '" + field<std::string>(arch, "head") + "'");
  if (m.contains("flags")) {
    const json& flags = m.at("flags");
    if (flags.contains("threshold_input"))
      b.threshold_input = parse_threshold_input(field<std::string>(flags, "threshold_input"));
    if (flags.contains("normalize_input")) b.normalize_input = field<bool>(flags, "normalize_input");
  }
  b.steps = field<std::vector<double>>(m.at("scalars"), "t");

  const std::size_t blob_start = 8 + len;
  const std::size_t blob_size = bytes.size() - blob_start;
  std::size_t needed = 0;
  const auto& tensors = m.at("tensors");
  for (const auto& t : tensors) needed = std::max(needed, field<std::size_t>(t, "offset") + field<std::size_t>(t, "len"));
  if (blob_size < needed)
    throw Error(ErrorCode::format, "truncated tensor blob: expected " + std::to_string(blob_start + needed) +
                                       " bytes, got " + std::to_string(bytes.size()));

  const auto layout = unet_layout(b.arch);
  b.nets.resize(k);
  for (std::size_t layer = 0; layer < k; ++layer) {
    for (const auto& desc : layout) {
      const std::string name = prefix(layer) + desc.name;
      auto it = std::find_if(tensors.begin(), tensors.end(),
                             [&](const json& t) { return t.value("name", "") == name; });
      if (it == tensors.end()) throw Error(ErrorCode::format, "missing tensor " + name);
      if (field<std::string>(*it, "dtype") != "f32")
        throw Error(ErrorCode::format, "tensor " + name + " is not f32");
      Tensor t{desc.name, field<std::vector<std::int64_t>>(*it, "shape"), {}};
      if (t.shape != desc.shape) throw Error(ErrorCode::format, "tensor " + name + " has the wrong shape");
      const auto offset = field<std::size_t>(*it, "offset");
      const auto bytes_len = field<std::size_t>(*it, "len");
      if (bytes_len != desc.numel() * sizeof(float))
        throw Error(ErrorCode::format, "tensor " + name + " length " + std::to_string(bytes_len) +
                                           " does not match its shape");
      t.values.resize(desc.numel());
      std::memcpy(t.values.data(), bytes.data() + blob_start + offset, bytes_len);
      b.nets[layer].tensors.push_back(std::move(t));
    }
  }
  validate(b);
  return b;
}

WeightBundle load_weights(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io, "cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_weights(bytes);
}

void save_weights(const WeightBundle& bundle, const std::filesystem::path& path) {
  const auto bytes = encode_weights(bundle);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::io, "cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::io, "write failed for " + path.string());
}

WeightBundle make_fixture_bundle(std::size_t layers, std::size_t n_hint, std::uint64_t seed,
                                 const UNetArch& arch) {
  WeightBundle b;
  b.n_hint = n_hint;
  b.arch = arch;
  std::mt19937_64 rng(seed);
  const auto layout = unet_layout(arch);
  for (std::size_t k = 0; k < layers; ++k) {
    UNetWeights net;
    for (const auto& desc : layout) {
      Tensor t{desc.name, desc.shape, std::vector<float>(desc.numel())};
      if (desc.shape.size() == 4) {
        const double fan_in = static_cast<double>(desc.shape[1] * desc.shape[2] * desc.shape[3]);
        std::normal_distribution<float> dist(0.0f, static_cast<float>(std::sqrt(2.0 / fan_in)));
        for (auto& v : t.values) v = dist(rng);
      } else {
        std::uniform_real_distribution<float> dist(-0.05f, 0.05f);
        for (auto& v : t.values) v = dist(rng);
      }
      net.tensors.push_back(std::move(t));
    }
    b.nets.push_back(std::move(net));
    b.steps.push_back(1.0);
  }
  return b;
}

}  // namespace tfr
