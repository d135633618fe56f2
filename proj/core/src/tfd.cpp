#include "tfr/tfd.hpp"

#include <cmath>
#include <string>

#include "tfr/error.hpp"
#include "tfr/fft.hpp"

namespace tfr {
namespace {

// Lag product z[t+k] conj(z[t-k]) with zero padding.
Complex lag_product(const Signal& z, long long t, long long k) {
  const long long n = static_cast<long long>(z.size());
  const long long a = t + k;
  const long long b = t - k;
  if (a < 0 || a >= n || b < 0 || b >= n) return {};
  return z[static_cast<std::size_t>(a)] * std::conj(z[static_cast<std::size_t>(b)]);
}

std::size_t centered(std::size_t raw, std::size_t n) { return (raw + n / 2) % n; }
std::size_t uncentered(std::size_t c, std::size_t n) { return (c + n - n / 2) % n; }

AFMatrix center(std::vector<Complex> raw, std::size_t n) {
  AFMatrix a(n);
  for (std::size_t q = 0; q < n; ++q)
    for (std::size_t p = 0; p < n; ++p) a.at(centered(q, n), centered(p, n)) = raw[p + q * n];
  return a;
}

}  // namespace

double negative_band_fraction(const Signal& z) {
  if (z.size() < 2) return 0.0;
  Signal spec = z;
  fft::forward(spec);
  double total = 0.0;
  double negative = 0.0;
  for (std::size_t k = 0; k < spec.size(); ++k) {
    const double e = std::norm(spec[k]);
    total += e;
    if (k > spec.size() / 2) negative += e;
  }
  return total > 0.0 ? negative / total : 0.0;
}

std::vector<Complex> wvd_complex(const Signal& z) {
  const std::size_t n = z.size();
  const long long half = static_cast<long long>(n / 2);
  std::vector<Complex> out(n * n);
  Signal column(n);
  for (std::size_t t = 0; t < n; ++t) {
    for (long long k = -half; k < static_cast<long long>(n) - half; ++k) {
      const auto slot = static_cast<std::size_t>((k + static_cast<long long>(n)) % static_cast<long long>(n));
      column[slot] = lag_product(z, static_cast<long long>(t), k);
    }
    fft::forward(column);
    std::copy(column.begin(), column.end(), out.begin() + static_cast<std::ptrdiff_t>(t * n));
  }
  return out;
}

TFMatrix wvd(const Signal& z) {
  if (const double neg = negative_band_fraction(z); neg > 0.01)
    warn("wvd: input is not analytic (" + std::to_string(100.0 * neg) +
         "% of energy in negative frequencies)");
  const std::size_t n = z.size();
  const auto full = wvd_complex(z);
  TFMatrix w(n);
  auto values = w.values();
  for (std::size_t i = 0; i < full.size(); ++i) values[i] = full[i].real();
  return w;
}

AFMatrix af_from_wvd(const TFMatrix& w) {
  const std::size_t n = w.n();
  std::vector<Complex> raw(w.values().begin(), w.values().end());
  fft::forward_2d(raw, n);
  const double scale = 1.0 / static_cast<double>(n);
  for (auto& v : raw) v *= scale;
  return center(std::move(raw), n);
}

TFMatrix wvd_from_af(const AFMatrix& a) {
  const std::size_t n = a.n();
  std::vector<Complex> raw(n * n);
  for (std::size_t q = 0; q < n; ++q)
    for (std::size_t p = 0; p < n; ++p) raw[uncentered(p, n) + uncentered(q, n) * n] = a.at(q, p);
  fft::backward_2d(raw, n);
  const double scale = 1.0 / static_cast<double>(n);
  TFMatrix w(n);
  auto values = w.values();
  for (std::size_t i = 0; i < raw.size(); ++i) values[i] = raw[i].real() * scale;
  return w;
}

AFMatrix af_direct(const Signal& z) {
  // Summing the WVD's lag DFT against the AF's lag DFT collapses to a single
  // lag k = -p, leaving A[p, q] = sum_n r[n, -p] exp(-j 2 pi q n / N); the
  // 1/N of the unitary 2D DFT cancels the N from the frequency sum.
  const std::size_t n = z.size();
  const long long nn = static_cast<long long>(n);
  const long long half = nn / 2;
  std::vector<Complex> raw(n * n);
  Signal row(n);
  for (std::size_t p = 0; p < n; ++p) {
    long long k = (nn - static_cast<long long>(p)) % nn;
    if (k >= nn - half) k -= nn;
    for (std::size_t t = 0; t < n; ++t) row[t] = lag_product(z, static_cast<long long>(t), k);
    fft::forward(row);
    for (std::size_t q = 0; q < n; ++q) raw[p + q * n] = row[q];
  }
  return center(std::move(raw), n);
}

}  // namespace tfr
