#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "tfr/types.hpp"

namespace tfr {

/// Encoder/decoder layout of the threshold network.
///
/// Level l (0-based) runs two 3x3 same-padded convs with ReLU. Levels are
/// separated by 2x2 max-pooling. Each decoder level upsamples 2x
/// (nearest-neighbour), applies a linear 3x3 conv down to channels[l],
/// concatenates the encoder features [up, skip], then two 3x3 convs with ReLU.
/// The head is a 1x1 conv to one channel followed by softplus.
struct UNetArch {
  std::vector<int> channels{16, 32, 64};
  int kernel = 3;

  std::size_t levels() const noexcept { return channels.size(); }
  friend bool operator==(const UNetArch&, const UNetArch&) = default;
};

struct TensorDesc {
  std::string name;
  std::vector<std::int64_t> shape;

  std::size_t numel() const;
};

/// Parameter tensors of one network in canonical order, names without the
/// per-layer prefix (e.g. "enc0.conv1.weight", "up1.conv.bias", "head.weight").
std::vector<TensorDesc> unet_layout(const UNetArch& arch);

struct Tensor {
  std::string name;
  std::vector<std::int64_t> shape;
  std::vector<float> values;
};

/// One network's parameters, in unet_layout order.
struct UNetWeights {
  std::vector<Tensor> tensors;

  const Tensor& get(const std::string& name) const;
  std::size_t parameter_count() const;
};

/// What the network sees at layer k: the gradient-step output u or the current
/// iterate omega.
enum class ThresholdInput { pre_threshold, iterate };

/// K networks plus the K learned step sizes.
struct WeightBundle {
  int version = 1;
  std::size_t n_hint = 128;
  UNetArch arch;
  std::vector<UNetWeights> nets;
  std::vector<double> steps;
  ThresholdInput threshold_input = ThresholdInput::pre_threshold;
  /// Feed input / max|input| and rescale the output by max|input|.
  bool normalize_input = true;

  std::size_t layers() const noexcept { return nets.size(); }
};

/// Checks shapes against the arch, finiteness, K >= 1, steps.size() == K.
/// Errors name the offending tensor.
void validate(const WeightBundle& bundle);

/// `.uwb` codec: "UWB1", u32 LE manifest length, JSON manifest, float32 LE blob.
std::vector<std::uint8_t> encode_weights(const WeightBundle& bundle);
WeightBundle decode_weights(const std::vector<std::uint8_t>& bytes);
WeightBundle load_weights(const std::filesystem::path& path);
void save_weights(const WeightBundle& bundle, const std::filesystem::path& path);

/// Seeded He-style random bundle for tests and demos (no training involved).
WeightBundle make_fixture_bundle(std::size_t layers, std::size_t n_hint, std::uint64_t seed,
                                 const UNetArch& arch = {});

/// Feature maps are (C, H, W) row-major float32; H indexes frequency bins and
/// W time samples.
struct FeatureMap {
  int channels = 0;
  int height = 0;
  int width = 0;
  std::vector<float> data;

  float& at(int c, int y, int x) { return data[(static_cast<std::size_t>(c) * height + y) * width + x]; }
  float at(int c, int y, int x) const { return data[(static_cast<std::size_t>(c) * height + y) * width + x]; }
};

/// Forward pass; output >= 0 with the same size as the input. Input sides must
/// be divisible by 2^(levels-1).
TFMatrix unet_forward(const UNetWeights& weights, const UNetArch& arch, const TFMatrix& input);

}  // namespace tfr
