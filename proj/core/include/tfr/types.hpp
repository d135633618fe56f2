#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace tfr {

using Complex = std::complex<double>;

/// Discrete analytic signal z[n], n = 0..N-1.
using Signal = std::vector<Complex>;

/// Real N x N time-frequency matrix. Rows are frequency bins m (bin m maps to
/// m / (2N) cycles/sample), columns are time samples n. Storage is
/// column-major, so values() is the vectorization omega.
class TFMatrix {
 public:
  TFMatrix() = default;
  explicit TFMatrix(std::size_t n) : n_(n), data_(n * n, 0.0) {}
  TFMatrix(std::size_t n, std::vector<double> data);

  std::size_t n() const noexcept { return n_; }
  bool empty() const noexcept { return n_ == 0; }

  double& operator()(std::size_t m, std::size_t t) { return data_[m + t * n_]; }
  double operator()(std::size_t m, std::size_t t) const { return data_[m + t * n_]; }

  std::span<double> values() noexcept { return data_; }
  std::span<const double> values() const noexcept { return data_; }
  const std::vector<double>& vector() const noexcept { return data_; }
  std::vector<double> release() && { return std::move(data_); }

  double max_abs() const noexcept;

  friend bool operator==(const TFMatrix&, const TFMatrix&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

/// Complex N x N ambiguity function, origin-centered: the (Doppler, lag)
/// origin sits at index (N/2, N/2).
///
/// The matrix has the same orientation as the WVD it transforms, A = D W D^T:
/// rows are lag (from the frequency axis), columns are Doppler (from the time
/// axis). Storage is column-major, lag fastest.
class AFMatrix {
 public:
  AFMatrix() = default;
  explicit AFMatrix(std::size_t n) : n_(n), data_(n * n) {}
  AFMatrix(std::size_t n, std::vector<Complex> data);

  std::size_t n() const noexcept { return n_; }
  std::size_t origin_index() const noexcept { return n_ / 2; }

  /// Centered indices; at(N/2, N/2) is the origin.
  Complex& at(std::size_t nu, std::size_t tau) { return data_[tau + nu * n_]; }
  Complex at(std::size_t nu, std::size_t tau) const { return data_[tau + nu * n_]; }
  Complex origin() const { return at(origin_index(), origin_index()); }

  std::span<Complex> values() noexcept { return data_; }
  std::span<const Complex> values() const noexcept { return data_; }

  double max_abs() const noexcept;

 private:
  std::size_t n_ = 0;
  std::vector<Complex> data_;
};

}  // namespace tfr
