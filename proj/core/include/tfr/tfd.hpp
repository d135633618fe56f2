#pragma once

#include <vector>

#include "tfr/types.hpp"

namespace tfr {

/// Discrete Wigner-Ville distribution.
///
///   W[m, n] = Re sum_{k=-N/2}^{N/2-1} z[n+k] conj(z[n-k]) exp(-j 2 pi k m / N)
///
/// with z zero outside [0, N). Integer lags compress the frequency axis so bin
/// m corresponds to m / (2N) cycles/sample. Emits a warning when more than 1%
/// of the signal energy sits in negative-frequency bins.
TFMatrix wvd(const Signal& z);

/// The complex sum above before the real part is taken, column-major N x N.
/// Its imaginary part is rounding noise for any input.
std::vector<Complex> wvd_complex(const Signal& z);

/// Fraction of energy in FFT bins N/2+1..N-1.
double negative_band_fraction(const Signal& z);

/// Unitary 2D DFT of W (1/N overall), origin-centered.
AFMatrix af_from_wvd(const TFMatrix& w);

/// Inverse of af_from_wvd; the imaginary residue is dropped.
TFMatrix wvd_from_af(const AFMatrix& a);

/// Same result as af_from_wvd(wvd(z)) computed from the lag products with one
/// DFT over time per lag.
AFMatrix af_direct(const Signal& z);

}  // namespace tfr
