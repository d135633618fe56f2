#pragma once

#include <cstddef>
#include <span>

#include "tfr/types.hpp"

// Thin FFTW front end. Plans are created once per size under a lock and then
// shared read-only; execution uses FFTW's new-array interface and is reentrant.
// All transforms are unnormalized.
namespace tfr::fft {

/// In-place length-N forward DFT, exponent sign -1.
void forward(std::span<Complex> data);

/// In-place N x N forward / backward DFT. Both axes are transformed, so the
/// storage order of the square does not matter.
void forward_2d(std::span<Complex> data, std::size_t n);
void backward_2d(std::span<Complex> data, std::size_t n);

/// Real-input forward 2D DFT of an N x N column-major matrix.
/// Output holds the non-redundant half spectrum: out[p + q * (N/2 + 1)] with
/// p in [0, N/2] along the fast (row) axis and q in [0, N) along columns.
void forward_2d_real(std::span<const double> in, std::span<Complex> out, std::size_t n);

/// Inverse of forward_2d_real (still unnormalized). `half` must be Hermitian
/// consistent and is clobbered.
void backward_2d_real(std::span<Complex> half, std::span<double> out, std::size_t n);

constexpr std::size_t half_size(std::size_t n) noexcept { return n * (n / 2 + 1); }

}  // namespace tfr::fft
