#include "tfr/render.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <string>

#include "tfr/error.hpp"

namespace tfr {

std::vector<std::uint8_t> render_gray(const TFMatrix& tfd, double dynamic_range_db) {
  if (tfd.empty()) throw Error(ErrorCode::invalid_argument, "render: empty matrix");
  if (!(dynamic_range_db > 0.0)) throw Error(ErrorCode::invalid_argument, "render: dynamic range must be > 0");
  const std::size_t n = tfd.n();
  std::vector<std::uint8_t> pixels(n * n, 0);
  const double peak = tfd.max_abs();
  if (peak == 0.0) {
    warn("render: all-zero matrix rendered black");
    return pixels;
  }
  for (std::size_t m = 0; m < n; ++m) {
    const std::size_t row = n - 1 - m;
    for (std::size_t t = 0; t < n; ++t) {
      const double mag = std::abs(tfd(m, t));
      if (mag == 0.0) continue;
      const double db = std::clamp(20.0 * std::log10(mag / peak), -dynamic_range_db, 0.0);
      pixels[row * n + t] = static_cast<std::uint8_t>(std::lround(255.0 * (db + dynamic_range_db) / dynamic_range_db));
    }
  }
  return pixels;
}

std::vector<std::uint8_t> encode_pgm(const TFMatrix& tfd, double dynamic_range_db) {
  const auto pixels = render_gray(tfd, dynamic_range_db);
  const std::string header = "P5\n" + std::to_string(tfd.n()) + " " + std::to_string(tfd.n()) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.insert(out.end(), pixels.begin(), pixels.end());
  return out;
}

void write_pgm(const TFMatrix& tfd, const std::filesystem::path& path, double dynamic_range_db) {
  const auto bytes = encode_pgm(tfd, dynamic_range_db);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::io, "cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

}  // namespace tfr
