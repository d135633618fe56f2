#include "tfr/matrix_io.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>

#include "json.hpp"
#include "tfr/error.hpp"

namespace tfr::io {
namespace {

using nlohmann::json;

static_assert(std::endian::native == std::endian::little, "raw float32 files assume a little-endian host");

void write_floats(const std::filesystem::path& path, const std::vector<float>& v) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::io, "cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(v.data()), static_cast<std::streamsize>(v.size() * sizeof(float)));
  if (!out) throw Error(ErrorCode::io, "write failed for " + path.string());
}

std::vector<float> read_floats(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io, "cannot open " + path.string());
  std::vector<char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (bytes.size() % sizeof(float) != 0)
    throw Error(ErrorCode::format, path.string() + " is not a whole number of float32 values");
  std::vector<float> v(bytes.size() / sizeof(float));
  std::memcpy(v.data(), bytes.data(), bytes.size());
  return v;
}

void write_sidecar(const std::filesystem::path& path, std::size_t n, const std::string& kind) {
  std::ofstream out(sidecar(path));
  if (!out) throw Error(ErrorCode::io, "cannot write " + sidecar(path).string());
  out << json{{"N", n}, {"kind", kind}, {"convention", convention}}.dump(2) << '\n';
}

json read_sidecar(const std::filesystem::path& path) {
  std::ifstream in(sidecar(path));
  if (!in) throw Error(ErrorCode::io, "cannot open " + sidecar(path).string());
  try {
    json j = json::parse(in);
    if (j.value("convention", "") != convention)
      throw Error(ErrorCode::format, sidecar(path).string() + " has an unknown convention");
    return j;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::format, sidecar(path).string() + ": " + e.what());
  }
}

}  // namespace

std::filesystem::path sidecar(const std::filesystem::path& path) {
  auto p = path;
  p += ".json";
  return p;
}

void write_f32(const std::filesystem::path& path, std::span<const double> values) {
  write_floats(path, std::vector<float>(values.begin(), values.end()));
}

void write_f32(const std::filesystem::path& path, std::span<const Complex> values) {
  std::vector<float> v;
  v.reserve(2 * values.size());
  for (const auto& c : values) {
    v.push_back(static_cast<float>(c.real()));
    v.push_back(static_cast<float>(c.imag()));
  }
  write_floats(path, v);
}

std::vector<double> read_f32(const std::filesystem::path& path) {
  const auto v = read_floats(path);
  return {v.begin(), v.end()};
}

std::vector<Complex> read_c32(const std::filesystem::path& path) {
  const auto v = read_floats(path);
  if (v.size() % 2 != 0) throw Error(ErrorCode::format, path.string() + " has an odd number of floats");
  std::vector<Complex> out(v.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = {v[2 * i], v[2 * i + 1]};
  return out;
}

void write_tf(const std::filesystem::path& path, const TFMatrix& w, const std::string& kind) {
  write_f32(path, w.values());
  write_sidecar(path, w.n(), kind);
}

TFMatrix read_tf(const std::filesystem::path& path) {
  const auto meta = read_sidecar(path);
  return TFMatrix(meta.at("N").get<std::size_t>(), read_f32(path));
}

void write_af(const std::filesystem::path& path, const AFMatrix& a) {
  write_f32(path, a.values());
  write_sidecar(path, a.n(), "af");
}

AFMatrix read_af(const std::filesystem::path& path) {
  const auto meta = read_sidecar(path);
  return AFMatrix(meta.at("N").get<std::size_t>(), read_c32(path));
}

void write_signal(const std::filesystem::path& path, const Signal& z) {
  write_f32(path, std::span<const Complex>(z));
  write_sidecar(path, z.size(), "signal");
}

Signal read_signal(const std::filesystem::path& path) {
  auto z = read_c32(path);
  if (std::filesystem::exists(sidecar(path))) {
    const auto meta = read_sidecar(path);
    if (meta.at("N").get<std::size_t>() != z.size())
      throw Error(ErrorCode::format, path.string() + " length does not match its sidecar");
  }
  return z;
}

}  // namespace tfr::io
