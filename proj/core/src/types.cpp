#include "tfr/types.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tfr/error.hpp"

namespace tfr {

TFMatrix::TFMatrix(std::size_t n, std::vector<double> data) : n_(n), data_(std::move(data)) {
  if (data_.size() != n * n)
    throw Error(ErrorCode::dimension_mismatch,
                "TFMatrix expects " + std::to_string(n * n) + " values, got " +
                    std::to_string(data_.size()));
}

double TFMatrix::max_abs() const noexcept {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

AFMatrix::AFMatrix(std::size_t n, std::vector<Complex> data) : n_(n), data_(std::move(data)) {
  if (data_.size() != n * n)
    throw Error(ErrorCode::dimension_mismatch,
                "AFMatrix expects " + std::to_string(n * n) + " values, got " +
                    std::to_string(data_.size()));
}

double AFMatrix::max_abs() const noexcept {
  double m = 0.0;
  for (const auto& v : data_) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace tfr
