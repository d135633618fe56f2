#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>

#include "oracles.hpp"
#include "tfr/error.hpp"
#include "tfr/matrix_io.hpp"
#include "tfr/uista.hpp"
#include "tfr/unet.hpp"

namespace {

namespace fs = std::filesystem;
const fs::path golden = fs::path(TFR_TEST_DATA_DIR) / "golden";

std::vector<std::uint8_t> read_bytes(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

tfr::TFMatrix random_tf(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return tfr::TFMatrix(n, oracle::random_real(n * n, rng));
}

TEST(UNetLayout, ParameterCountFollowsArchitecture) {
  // Torch reports 129553 for the default [16, 32, 64] network and 8197 for [4, 8, 16].
  const auto count = [](const tfr::UNetArch& arch) {
    std::size_t total = 0;
    for (const auto& t : tfr::unet_layout(arch)) total += t.numel();
    return total;
  };
  EXPECT_EQ(count({}), 129553u);
  EXPECT_EQ(count({{4, 8, 16}}), 8197u);
  const auto bundle = tfr::make_fixture_bundle(2, 64, 1);
  EXPECT_EQ(bundle.nets[1].parameter_count(), 129553u);
  const auto layout = tfr::unet_layout({});
  EXPECT_EQ(layout.front().name, "enc0.conv1.weight");
  EXPECT_EQ(layout.back().name, "head.bias");
  EXPECT_EQ(layout.front().shape, (std::vector<std::int64_t>{16, 1, 3, 3}));
}

TEST(UNetForward, ZeroWeightsGiveSoftplusOfZero) {
  auto bundle = tfr::make_fixture_bundle(1, 32, 3);
  for (auto& t : bundle.nets[0].tensors) std::fill(t.values.begin(), t.values.end(), 0.0f);
  const auto out = tfr::unet_forward(bundle.nets[0], bundle.arch, random_tf(32, 1));
  for (double v : out.values()) EXPECT_NEAR(v, std::log(2.0), 1e-7);
}

TEST(UNetForward, MatchesTorchReference) {
  const auto bundle = tfr::load_weights(golden / "unet_k1.uwb");
  ASSERT_EQ(bundle.layers(), 1u);
  for (int i = 0; i < 6; ++i) {
    const auto in = tfr::io::read_tf(golden / ("unet_in" + std::to_string(i) + ".f32"));
    const auto ref = tfr::io::read_tf(golden / ("unet_out" + std::to_string(i) + ".f32"));
    const auto out = tfr::unet_forward(bundle.nets[0], bundle.arch, in);
    const double scale = std::max(1.0, ref.max_abs());
    double worst = 0.0;
    for (std::size_t j = 0; j < ref.values().size(); ++j)
      worst = std::max(worst, std::abs(out.values()[j] - ref.values()[j]));
    EXPECT_LT(worst, 1e-4 * scale) << "input " << i;
  }
}

TEST(UNetForward, NonnegativeAndDeterministic) {
  const auto bundle = tfr::make_fixture_bundle(1, 64, 9);
  const auto in = random_tf(64, 2);
  const auto a = tfr::unet_forward(bundle.nets[0], bundle.arch, in);
  const auto b = tfr::unet_forward(bundle.nets[0], bundle.arch, in);
  EXPECT_EQ(a, b);
  for (double v : a.values()) EXPECT_GE(v, 0.0);
}

TEST(UNetForward, ReceptiveFieldIsLocal) {
  // Two convs per level, three levels: a pixel reaches well under 40 pixels.
  const auto bundle = tfr::make_fixture_bundle(1, 128, 4);
  auto in = random_tf(128, 5);
  const auto base = tfr::unet_forward(bundle.nets[0], bundle.arch, in);
  in(20, 20) += 5.0;
  const auto moved = tfr::unet_forward(bundle.nets[0], bundle.arch, in);
  bool changed_near = false;
  for (std::size_t m = 0; m < 128; ++m)
    for (std::size_t t = 0; t < 128; ++t) {
      const bool far = std::max(m, t) >= 60;
      if (far) ASSERT_EQ(moved(m, t), base(m, t)) << m << "," << t;
      else changed_near |= moved(m, t) != base(m, t);
    }
  EXPECT_TRUE(changed_near);
}

TEST(UNetForward, ShiftByPoolingStrideCommutesAwayFromBorders) {
  const auto bundle = tfr::make_fixture_bundle(1, 128, 6);
  tfr::TFMatrix a(128), b(128);
  std::mt19937_64 rng(8);
  std::normal_distribution<double> g;
  const std::size_t s = 8;  // multiple of 2^(levels - 1)
  for (std::size_t m = 48; m < 72; ++m)
    for (std::size_t t = 48; t < 72; ++t) {
      a(m, t) = g(rng);
      b(m + s, t + s) = a(m, t);
    }
  const auto ya = tfr::unet_forward(bundle.nets[0], bundle.arch, a);
  const auto yb = tfr::unet_forward(bundle.nets[0], bundle.arch, b);
  for (std::size_t m = 40; m + s < 88; ++m)
    for (std::size_t t = 40; t + s < 88; ++t) ASSERT_NEAR(yb(m + s, t + s), ya(m, t), 1e-6) << m << "," << t;
}

TEST(UNetForward, RejectsIndivisibleGrid) {
  const auto bundle = tfr::make_fixture_bundle(1, 32, 1);
  EXPECT_THROW(tfr::unet_forward(bundle.nets[0], bundle.arch, tfr::TFMatrix(30)), tfr::Error);
}

TEST(WeightFormat, PythonFileRoundTripsByteForByte) {
  const auto bytes = read_bytes(golden / "unet_k1.uwb");
  EXPECT_EQ(tfr::encode_weights(tfr::decode_weights(bytes)), bytes);
  const auto k3 = read_bytes(golden / "uista_k3.uwb");
  const auto bundle = tfr::decode_weights(k3);
  EXPECT_EQ(bundle.layers(), 3u);
  EXPECT_EQ(bundle.steps, (std::vector<double>{1.0, 0.9, 1.1}));
  EXPECT_EQ(bundle.arch.channels, (std::vector<int>{4, 8, 16}));
  EXPECT_EQ(bundle.n_hint, 32u);
  EXPECT_EQ(tfr::encode_weights(bundle), k3);
}

TEST(WeightFormat, FixtureRoundTripIsBitIdentical) {
  const auto bundle = tfr::make_fixture_bundle(3, 64, 42, {{8, 16}});
  const auto dir = fs::temp_directory_path() / "tfr_threshnet_rt";
  fs::create_directories(dir);
  tfr::save_weights(bundle, dir / "b.uwb");
  const auto back = tfr::load_weights(dir / "b.uwb");
  ASSERT_EQ(back.layers(), 3u);
  EXPECT_EQ(back.arch, bundle.arch);
  EXPECT_EQ(back.steps, bundle.steps);
  for (std::size_t k = 0; k < 3; ++k)
    for (std::size_t i = 0; i < bundle.nets[k].tensors.size(); ++i) {
      const auto& x = bundle.nets[k].tensors[i].values;
      const auto& y = back.nets[k].tensors[i].values;
      ASSERT_EQ(x.size(), y.size());
      EXPECT_EQ(std::memcmp(x.data(), y.data(), x.size() * sizeof(float)), 0);
    }
  EXPECT_EQ(tfr::encode_weights(back), tfr::encode_weights(bundle));
  fs::remove_all(dir);
}

TEST(WeightFormat, FixtureIsSeeded) {
  EXPECT_EQ(tfr::encode_weights(tfr::make_fixture_bundle(2, 32, 5)),
            tfr::encode_weights(tfr::make_fixture_bundle(2, 32, 5)));
  EXPECT_NE(tfr::encode_weights(tfr::make_fixture_bundle(2, 32, 5)),
            tfr::encode_weights(tfr::make_fixture_bundle(2, 32, 6)));
}

void expect_format_error(const std::vector<std::uint8_t>& bytes, const std::string& fragment) {
  try {
    tfr::decode_weights(bytes);
    FAIL() << "expected a format error containing '" << fragment << "'";
  } catch (const tfr::Error& e) {
    EXPECT_EQ(e.code(), tfr::ErrorCode::format);
    EXPECT_NE(std::string(e.what()).find(fragment), std::string::npos) << e.what();
  }
}

TEST(WeightFormat, RejectsDamagedFiles) {
  const auto bytes = read_bytes(golden / "unet_k1.uwb");
  auto truncated = bytes;
  truncated.resize(bytes.size() - 10);
  expect_format_error(truncated, "expected " + std::to_string(bytes.size()) + " bytes, got " +
                                     std::to_string(truncated.size()));
  auto magic = bytes;
  magic[0] = 'X';
  expect_format_error(magic, "magic");
  expect_format_error(std::vector<std::uint8_t>(bytes.begin(), bytes.begin() + 12), "truncated manifest");
  std::string text(bytes.begin(), bytes.end());
  const auto at = text.find("\"version\":1");
  ASSERT_NE(at, std::string::npos);
  auto version = bytes;
  version[at + 10] = '2';
  expect_format_error(version, "version");
}

TEST(WeightFormat, ValidationNamesTheTensor) {
  auto bundle = tfr::make_fixture_bundle(2, 32, 1);
  bundle.nets[1].tensors[3].values[0] = std::nanf("");
  try {
    tfr::validate(bundle);
    FAIL();
  } catch (const tfr::Error& e) {
    EXPECT_EQ(e.code(), tfr::ErrorCode::non_finite);
    EXPECT_NE(std::string(e.what()).find("enc0.conv2.bias"), std::string::npos) << e.what();
  }
  EXPECT_THROW(tfr::encode_weights(bundle), tfr::Error);

  bundle = tfr::make_fixture_bundle(2, 32, 1);
  bundle.nets[0].tensors[0].shape = {16, 1, 3, 2};
  try {
    tfr::validate(bundle);
    FAIL();
  } catch (const tfr::Error& e) {
    EXPECT_EQ(e.code(), tfr::ErrorCode::format);
    EXPECT_NE(std::string(e.what()).find("enc0.conv1.weight"), std::string::npos) << e.what();
  }

  bundle = tfr::make_fixture_bundle(2, 32, 1);
  bundle.steps.pop_back();
  EXPECT_THROW(tfr::validate(bundle), tfr::Error);
}

TEST(UNetThreshold, NormalizesInputAndRescalesOutput) {
  auto bundle = std::make_shared<tfr::WeightBundle>(tfr::make_fixture_bundle(1, 32, 12));
  const tfr::UNetThreshold provider(bundle);
  const auto u = random_tf(32, 3);
  const auto theta = provider.threshold(0, u.values(), u.values(), 32);
  // Positive scaling of the input scales the map by the same factor.
  std::vector<double> scaled(u.values().begin(), u.values().end());
  for (double& v : scaled) v *= 250.0;
  const auto theta_scaled = provider.threshold(0, scaled, scaled, 32);
  for (std::size_t i = 0; i < theta.size(); ++i) {
    EXPECT_GE(theta[i], 0.0);
    EXPECT_NEAR(theta_scaled[i], 250.0 * theta[i], 1e-9 * 250.0 * (1 + theta[i]));
  }
  // By hand: net(u / max|u|) * max|u|.
  const double s = u.max_abs();
  tfr::TFMatrix normalized(32);
  for (std::size_t i = 0; i < normalized.values().size(); ++i) normalized.values()[i] = u.values()[i] / s;
  const auto direct = tfr::unet_forward(bundle->nets[0], bundle->arch, normalized);
  for (std::size_t i = 0; i < theta.size(); ++i) EXPECT_NEAR(theta[i], direct.values()[i] * s, 1e-12 * s);
  // All-zero input: no scale to recover, the map is zero.
  const std::vector<double> zero(32 * 32, 0.0);
  for (double v : provider.threshold(0, zero, zero, 32)) EXPECT_EQ(v, 0.0);
  EXPECT_THROW(provider.threshold(1, zero, zero, 32), tfr::Error);
}

}  // namespace
