#include "tfr/unet.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tfr/error.hpp"

namespace tfr {
namespace {

std::string level(const char* prefix, std::size_t l) { return prefix + std::to_string(l); }

void add_conv(std::vector<TensorDesc>& out, const std::string& name, int c_out, int c_in, int k) {
  out.push_back({name + ".weight", {c_out, c_in, k, k}});
  out.push_back({name + ".bias", {c_out}});
}

struct Conv {
  const Tensor* weight;
  const Tensor* bias;
};

Conv conv(const UNetWeights& w, const std::string& name) {
  return {&w.get(name + ".weight"), &w.get(name + ".bias")};
}

FeatureMap conv2d(const FeatureMap& in, const Conv& c, bool relu) {
  const int c_out = static_cast<int>(c.weight->shape[0]);
  const int c_in = static_cast<int>(c.weight->shape[1]);
  const int k = static_cast<int>(c.weight->shape[2]);
  if (c_in != in.channels)
    throw Error(ErrorCode::dimension_mismatch, "conv " + c.weight->name + " expects " +
                                                   std::to_string(c_in) + " input channels, got " +
                                                   std::to_string(in.channels));
  const int pad = k / 2;
  const int h = in.height;
  const int w = in.width;
  FeatureMap out{c_out, h, w, std::vector<float>(static_cast<std::size_t>(c_out) * h * w)};
  const float* weights = c.weight->values.data();
  for (int o = 0; o < c_out; ++o) {
    float* plane = &out.at(o, 0, 0);
    std::fill(plane, plane + static_cast<std::size_t>(h) * w, c.bias->values[o]);
    for (int i = 0; i < c_in; ++i) {
      const float* src = in.data.data() + static_cast<std::size_t>(i) * h * w;
      for (int ky = 0; ky < k; ++ky) {
        const int dy = ky - pad;
        const int y0 = std::max(0, -dy);
        const int y1 = std::min(h, h - dy);
        for (int kx = 0; kx < k; ++kx) {
          const float wv = weights[((static_cast<std::size_t>(o) * c_in + i) * k + ky) * k + kx];
          if (wv == 0.0f) continue;
          const int dx = kx - pad;
          const int x0 = std::max(0, -dx);
          const int x1 = std::min(w, w - dx);
          for (int y = y0; y < y1; ++y) {
            float* dst = plane + static_cast<std::size_t>(y) * w;
            const float* row = src + static_cast<std::size_t>(y + dy) * w + dx;
            for (int x = x0; x < x1; ++x) dst[x] += wv * row[x];
          }
        }
      }
    }
    if (relu)
      for (std::size_t j = 0; j < static_cast<std::size_t>(h) * w; ++j) plane[j] = std::max(plane[j], 0.0f);
  }
  return out;
}

FeatureMap max_pool(const FeatureMap& in) {
  FeatureMap out{in.channels, in.height / 2, in.width / 2, {}};
  out.data.resize(static_cast<std::size_t>(out.channels) * out.height * out.width);
  for (int c = 0; c < in.channels; ++c)
    for (int y = 0; y < out.height; ++y)
      for (int x = 0; x < out.width; ++x)
        out.at(c, y, x) = std::max(std::max(in.at(c, 2 * y, 2 * x), in.at(c, 2 * y, 2 * x + 1)),
                                   std::max(in.at(c, 2 * y + 1, 2 * x), in.at(c, 2 * y + 1, 2 * x + 1)));
  return out;
}

FeatureMap upsample(const FeatureMap& in) {
  FeatureMap out{in.channels, in.height * 2, in.width * 2, {}};
  out.data.resize(static_cast<std::size_t>(out.channels) * out.height * out.width);
  for (int c = 0; c < out.channels; ++c)
    for (int y = 0; y < out.height; ++y)
      for (int x = 0; x < out.width; ++x) out.at(c, y, x) = in.at(c, y / 2, x / 2);
  return out;
}

FeatureMap concat(const FeatureMap& a, const FeatureMap& b) {
  FeatureMap out{a.channels + b.channels, a.height, a.width, a.data};
  out.data.insert(out.data.end(), b.data.begin(), b.data.end());
  return out;
}

float softplus(float x) { return x > 20.0f ? x : std::log1p(std::exp(x)); }

}  // namespace

std::size_t TensorDesc::numel() const {
  std::size_t n = 1;
  for (auto d : shape) n *= static_cast<std::size_t>(d);
  return n;
}

std::vector<TensorDesc> unet_layout(const UNetArch& arch) {
  if (arch.channels.empty() || arch.kernel < 1 || arch.kernel % 2 == 0)
    throw Error(ErrorCode::invalid_argument, "UNetArch needs >= 1 level and an odd kernel");
  const auto& ch = arch.channels;
  const int k = arch.kernel;
  std::vector<TensorDesc> out;
  for (std::size_t l = 0; l < ch.size(); ++l) {
    add_conv(out, level("enc", l) + ".conv1", ch[l], l == 0 ? 1 : ch[l - 1], k);
    add_conv(out, level("enc", l) + ".conv2", ch[l], ch[l], k);
  }
  for (std::size_t l = ch.size() - 1; l-- > 0;) {
    add_conv(out, level("up", l) + ".conv", ch[l], ch[l + 1], k);
    add_conv(out, level("dec", l) + ".conv1", ch[l], 2 * ch[l], k);
    add_conv(out, level("dec", l) + ".conv2", ch[l], ch[l], k);
  }
  add_conv(out, "head", 1, ch[0], 1);
  return out;
}

const Tensor& UNetWeights::get(const std::string& name) const {
  for (const auto& t : tensors)
    if (t.name == name) return t;
  throw Error(ErrorCode::format, "missing tensor " + name);
}

std::size_t UNetWeights::parameter_count() const {
  std::size_t n = 0;
  for (const auto& t : tensors) n += t.values.size();
  return n;
}

TFMatrix unet_forward(const UNetWeights& weights, const UNetArch& arch, const TFMatrix& input) {
  const std::size_t n = input.n();
  const std::size_t factor = std::size_t{1} << (arch.levels() - 1);
  if (n == 0 || n % factor != 0)
    throw Error(ErrorCode::dimension_mismatch, "U-Net input size " + std::to_string(n) +
                                                   " is not divisible by " + std::to_string(factor));
  const int side = static_cast<int>(n);
  FeatureMap x{1, side, side, std::vector<float>(n * n)};
  for (std::size_t t = 0; t < n; ++t)
    for (std::size_t m = 0; m < n; ++m) x.at(0, static_cast<int>(m), static_cast<int>(t)) = static_cast<float>(input(m, t));

  std::vector<FeatureMap> skips;
  for (std::size_t l = 0; l < arch.levels(); ++l) {
    if (l > 0) x = max_pool(x);
    x = conv2d(x, conv(weights, level("enc", l) + ".conv1"), true);
    x = conv2d(x, conv(weights, level("enc", l) + ".conv2"), true);
    skips.push_back(x);
  }
  for (std::size_t l = arch.levels() - 1; l-- > 0;) {
    x = conv2d(upsample(x), conv(weights, level("up", l) + ".conv"), false);
    x = concat(x, skips[l]);
    x = conv2d(x, conv(weights, level("dec", l) + ".conv1"), true);
    x = conv2d(x, conv(weights, level("dec", l) + ".conv2"), true);
  }
  x = conv2d(x, conv(weights, "head"), false);

  TFMatrix out(n);
  for (std::size_t t = 0; t < n; ++t)
    for (std::size_t m = 0; m < n; ++m) out(m, t) = softplus(x.at(0, static_cast<int>(m), static_cast<int>(t)));
  return out;
}

}  // namespace tfr
