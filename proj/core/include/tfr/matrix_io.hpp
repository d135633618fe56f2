#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "tfr/types.hpp"

// Raw little-endian float32, column-major, with a JSON sidecar at
// <path>.json: {"N", "kind", "convention": "unitary-centered-v1"}.
// Complex data is interleaved re/im.
namespace tfr::io {

inline constexpr const char* convention = "unitary-centered-v1";

void write_f32(const std::filesystem::path& path, std::span<const double> values);
void write_f32(const std::filesystem::path& path, std::span<const Complex> values);
std::vector<double> read_f32(const std::filesystem::path& path);
std::vector<Complex> read_c32(const std::filesystem::path& path);

void write_tf(const std::filesystem::path& path, const TFMatrix& w, const std::string& kind = "tfd");
TFMatrix read_tf(const std::filesystem::path& path);
void write_af(const std::filesystem::path& path, const AFMatrix& a);
AFMatrix read_af(const std::filesystem::path& path);

/// Signals use the complex layout with kind "signal" and N = length.
void write_signal(const std::filesystem::path& path, const Signal& z);
Signal read_signal(const std::filesystem::path& path);

std::filesystem::path sidecar(const std::filesystem::path& path);

}  // namespace tfr::io
