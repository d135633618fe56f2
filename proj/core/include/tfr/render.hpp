#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "tfr/types.hpp"

namespace tfr {

/// Log-magnitude gray levels, row-major with frequency increasing upward
/// (image row 0 is the highest bin) and time to the right. Values at or
/// below -dynamic_range_db map to 0, the maximum maps to 255.
std::vector<std::uint8_t> render_gray(const TFMatrix& tfd, double dynamic_range_db = 20.0);

/// Binary PGM (P5). An all-zero matrix renders black and raises a warning.
void write_pgm(const TFMatrix& tfd, const std::filesystem::path& path, double dynamic_range_db = 20.0);
std::vector<std::uint8_t> encode_pgm(const TFMatrix& tfd, double dynamic_range_db = 20.0);

}  // namespace tfr
