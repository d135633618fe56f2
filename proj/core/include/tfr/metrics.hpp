#pragma once

#include "tfr/types.hpp"

namespace tfr {

/// 10 log10(||ref - est||^2 / ||ref||^2) in dB; -inf for a perfect match.
/// Throws when the reference is all zeros or sizes differ.
double nmse_db(const TFMatrix& estimate, const TFMatrix& reference);

/// nmse_db after dividing each matrix by its own max |value| (an all-zero
/// estimate stays zero). This is what the experiment harness reports.
double nmse_normalized_db(const TFMatrix& estimate, const TFMatrix& reference);

}  // namespace tfr
