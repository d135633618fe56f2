#include "tfr/metrics.hpp"

#include <cmath>
#include <limits>

#include "tfr/error.hpp"

namespace tfr {

double nmse_db(const TFMatrix& estimate, const TFMatrix& reference) {
  if (estimate.n() != reference.n())
    throw Error(ErrorCode::dimension_mismatch, "nmse: estimate and reference sizes differ");
  double err = 0.0;
  double ref = 0.0;
  const auto e = estimate.values();
  const auto r = reference.values();
  for (std::size_t i = 0; i < r.size(); ++i) {
    const double d = r[i] - e[i];
    err += d * d;
    ref += r[i] * r[i];
  }
  if (ref == 0.0) throw Error(ErrorCode::invalid_argument, "nmse: reference is all zeros");
  if (err == 0.0) return -std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(err / ref);
}

double nmse_normalized_db(const TFMatrix& estimate, const TFMatrix& reference) {
  auto scaled = [](const TFMatrix& m) {
    TFMatrix out = m;
    if (const double peak = m.max_abs(); peak > 0.0)
      for (double& v : out.values()) v /= peak;
    return out;
  };
  return nmse_db(scaled(estimate), scaled(reference));
}

}  // namespace tfr
