#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <locale>
#include <sstream>

#include "oracles.hpp"
#include "tfr/error.hpp"
#include "tfr/experiment.hpp"
#include "tfr/metrics.hpp"
#include "tfr/render.hpp"
#include "tfr/siggen.hpp"

namespace {

namespace fs = std::filesystem;

tfr::TFMatrix random_tf(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return tfr::TFMatrix(n, oracle::random_real(n * n, rng));
}

TEST(Nmse, Examples) {
  const auto ref = random_tf(16, 1);
  EXPECT_EQ(tfr::nmse_db(ref, ref), -std::numeric_limits<double>::infinity());
  EXPECT_NEAR(tfr::nmse_db(tfr::TFMatrix(16), ref), 0.0, 1e-12);
  auto half = ref;
  for (double& v : half.values()) v *= 0.5;
  EXPECT_NEAR(tfr::nmse_db(half, ref), 10 * std::log10(0.25), 1e-12);
  EXPECT_NEAR(tfr::nmse_db(half, ref), -6.0206, 1e-4);
}

TEST(Nmse, ErrorSignSymmetry) {
  const auto ref = random_tf(16, 2);
  const auto e = random_tf(16, 3);
  auto plus = ref, minus = ref;
  for (std::size_t i = 0; i < ref.values().size(); ++i) {
    plus.values()[i] += 0.1 * e.values()[i];
    minus.values()[i] -= 0.1 * e.values()[i];
  }
  EXPECT_NEAR(tfr::nmse_db(plus, ref), tfr::nmse_db(minus, ref), 1e-12);
}

TEST(Nmse, RejectsBadReference) {
  EXPECT_THROW(tfr::nmse_db(random_tf(8, 1), tfr::TFMatrix(8)), tfr::Error);
  EXPECT_THROW(tfr::nmse_db(random_tf(8, 1), random_tf(16, 1)), tfr::Error);
}

TEST(Nmse, NormalizedVariantIgnoresGlobalScale) {
  const auto ref = random_tf(16, 4);
  auto est = random_tf(16, 5);
  const double base = tfr::nmse_normalized_db(est, ref);
  for (double& v : est.values()) v *= 37.0;
  EXPECT_NEAR(tfr::nmse_normalized_db(est, ref), base, 1e-12);
  EXPECT_NEAR(tfr::nmse_normalized_db(tfr::TFMatrix(16), ref), 0.0, 1e-12);
}

TEST(Experiment, HarnessShapeAndMean) {
  tfr::ExperimentSpec spec;
  spec.cases = {1};
  spec.snr_db = {45.0};
  spec.runs = 3;
  spec.methods = {tfr::Method::wvd};
  const auto rows = tfr::run_experiment(spec);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].case_label, "1");
  EXPECT_EQ(rows[0].runs, 3u);
  EXPECT_EQ(rows[0].method, tfr::Method::wvd);
  EXPECT_TRUE(std::isfinite(rows[0].mean_nmse_db));
  EXPECT_GE(rows[0].std_nmse_db, 0.0);
}

TEST(Experiment, CsvIsDeterministicAndLocaleFree) {
  tfr::ExperimentSpec spec;
  spec.cases = {1, 3};
  spec.snr_db = {10.0, 30.0};
  spec.runs = 2;
  spec.methods = {tfr::Method::wvd};
  spec.seed = 11;
  std::ostringstream a, b;
  tfr::write_csv(a, tfr::run_experiment(spec));

  struct Comma : std::numpunct<char> {
    char do_decimal_point() const override { return ','; }
    char do_thousands_sep() const override { return '.'; }
    std::string do_grouping() const override { return "\1"; }
  };
  b.imbue(std::locale(std::locale::classic(), new Comma));
  tfr::write_csv(b, tfr::run_experiment(spec));
  EXPECT_EQ(a.str(), b.str());

  std::istringstream lines(a.str());
  std::string line;
  std::getline(lines, line);
  EXPECT_EQ(line, "case,snr_db,method,mean_nmse_db,std_nmse_db,runs");
  int count = 0;
  while (std::getline(lines, line)) {
    ++count;
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 5) << line;
  }
  EXPECT_EQ(count, 4);
  spec.seed = 12;
  std::ostringstream c;
  tfr::write_csv(c, tfr::run_experiment(spec));
  EXPECT_NE(a.str(), c.str());
}

TEST(Experiment, ParsesSpecFile) {
  const auto spec = tfr::parse_experiment(
      R"({"cases":[2,4],"snr_grid":{"start":5,"stop":15,"step":5},"runs":7,"methods":["wvd","l1app"],"seed":3})");
  EXPECT_EQ(spec.cases, (std::vector<int>{2, 4}));
  EXPECT_EQ(spec.snr_db, (std::vector<double>{5.0, 10.0, 15.0}));
  EXPECT_EQ(spec.runs, 7u);
  EXPECT_EQ(spec.methods.size(), 2u);
  EXPECT_EQ(spec.seed, 3u);
  EXPECT_THROW(tfr::parse_experiment(R"({"cases":[1],"runs":0})"), tfr::Error);
  EXPECT_THROW(tfr::parse_experiment(R"({"cases":[1],"methods":["uista"]})"), tfr::Error);
  EXPECT_THROW(tfr::parse_experiment(R"({"cases":[1],"methods":["magic"]})"), tfr::Error);
  EXPECT_THROW(tfr::parse_experiment("not json"), tfr::Error);
}

TEST(Render, DeltaIsOneWhitePixel) {
  tfr::TFMatrix w(8);
  w(2, 5) = 3.0;
  const auto px = tfr::render_gray(w);
  for (std::size_t row = 0; row < 8; ++row)
    for (std::size_t col = 0; col < 8; ++col)
      // Frequency increases upward: bin 2 is image row 8 - 1 - 2.
      EXPECT_EQ(px[row * 8 + col], row == 5 && col == 5 ? 255 : 0) << row << "," << col;
}

TEST(Render, LogarithmicClamp) {
  tfr::TFMatrix w(4);
  w(0, 0) = 1.0;
  w(0, 1) = 0.1;
  w(0, 2) = 0.01;
  w(0, 3) = -0.1;  // magnitude is what counts
  const auto px = tfr::render_gray(w);
  EXPECT_EQ(px[3 * 4 + 0], 255);
  EXPECT_EQ(px[3 * 4 + 1], 0);  // exactly -20 dB
  EXPECT_EQ(px[3 * 4 + 2], 0);  // clamped
  const auto wide = tfr::render_gray(w, 40.0);
  EXPECT_EQ(wide[3 * 4 + 1], 128);  // halfway, 127.5 rounds up
  EXPECT_EQ(wide[3 * 4 + 2], 0);
  EXPECT_EQ(wide[3 * 4 + 3], 128);
}

TEST(Render, AllZeroWarnsAndIsBlack) {
  std::string seen;
  auto old = tfr::set_warning_handler([&](std::string_view m) { seen = m; });
  const auto px = tfr::render_gray(tfr::TFMatrix(4));
  tfr::set_warning_handler(old);
  for (auto v : px) EXPECT_EQ(v, 0);
  EXPECT_FALSE(seen.empty());
  EXPECT_THROW(tfr::render_gray(tfr::TFMatrix()), tfr::Error);
}

TEST(Render, IdealCaseOneMatchesStoredImage) {
  const auto w = tfr::ideal_tfd(tfr::benchmark_case(1));
  const auto bytes = tfr::encode_pgm(w);
  std::ifstream in(fs::path(TFR_TEST_DATA_DIR) / "render_case1_ideal.pgm", std::ios::binary);
  const std::vector<std::uint8_t> stored{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  EXPECT_EQ(bytes, stored);
  // Two one-pixel ridges: every column holds exactly two lit pixels.
  const std::string header = "P5\n128 128\n255\n";
  ASSERT_EQ(std::string(bytes.begin(), bytes.begin() + static_cast<long>(header.size())), header);
  for (std::size_t col = 0; col < 128; ++col) {
    int lit = 0;
    for (std::size_t row = 0; row < 128; ++row) lit += bytes[header.size() + row * 128 + col] != 0;
    EXPECT_EQ(lit, 2) << "col " << col;
  }
}

TEST(Render, WritingTwiceIsByteIdentical) {
  const auto dir = fs::temp_directory_path() / "tfr_render_idem";
  fs::create_directories(dir);
  const auto w = random_tf(32, 6);
  tfr::write_pgm(w, dir / "a.pgm");
  tfr::write_pgm(w, dir / "b.pgm");
  std::ifstream a(dir / "a.pgm", std::ios::binary), b(dir / "b.pgm", std::ios::binary);
  const std::string sa{std::istreambuf_iterator<char>(a), {}}, sb{std::istreambuf_iterator<char>(b), {}};
  EXPECT_EQ(sa, sb);
  EXPECT_EQ(sa.size(), std::string("P5\n32 32\n255\n").size() + 32 * 32);
  fs::remove_all(dir);
}

TEST(Methods, NamesRoundTrip) {
  for (auto m : {tfr::Method::wvd, tfr::Method::l1app, tfr::Method::ista, tfr::Method::uista})
    EXPECT_EQ(tfr::parse_method(tfr::to_string(m)), m);
  EXPECT_THROW(tfr::parse_method("bd"), tfr::Error);
  EXPECT_EQ(tfr::default_mask(tfr::Method::l1app), (tfr::MaskSpec{13, 13}));
  EXPECT_EQ(tfr::default_mask(tfr::Method::uista), (tfr::MaskSpec{29, 29}));
}

}  // namespace
