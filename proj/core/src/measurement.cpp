#include "tfr/measurement.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "tfr/error.hpp"
#include "tfr/fft.hpp"

namespace tfr {
namespace {

void require_length(std::size_t got, std::size_t want, const char* what) {
  if (got != want)
    throw Error(ErrorCode::dimension_mismatch, std::string(what) + ": expected length " +
                                                   std::to_string(want) + ", got " +
                                                   std::to_string(got));
}

std::size_t wrap(long long offset, std::size_t n) {
  const long long nn = static_cast<long long>(n);
  return static_cast<std::size_t>(((offset % nn) + nn) % nn);
}

}  // namespace

void validate(const MaskSpec& mask, std::size_t n) {
  if (mask.d_nu == 0 || mask.d_tau == 0 || mask.d_nu % 2 == 0 || mask.d_tau % 2 == 0)
    throw Error(ErrorCode::invalid_argument, "mask dims must be odd and positive, got " +
                                                 std::to_string(mask.d_nu) + "x" +
                                                 std::to_string(mask.d_tau));
  if (mask.d_nu > n || mask.d_tau > n)
    throw Error(ErrorCode::invalid_argument, "mask " + std::to_string(mask.d_nu) + "x" +
                                                 std::to_string(mask.d_tau) +
                                                 " does not fit a grid of " + std::to_string(n));
}

std::vector<Complex> apply_mask(const AFMatrix& af, const MaskSpec& mask) {
  validate(mask, af.n());
  const std::size_t c = af.origin_index();
  const std::size_t h_nu = mask.d_nu / 2;
  const std::size_t h_tau = mask.d_tau / 2;
  std::vector<Complex> out;
  out.reserve(mask.size());
  for (std::size_t j = 0; j < mask.d_nu; ++j)
    for (std::size_t i = 0; i < mask.d_tau; ++i) out.push_back(af.at(c - h_nu + j, c - h_tau + i));
  return out;
}

double real_inner(std::span<const Complex> a, std::span<const Complex> b) {
  require_length(b.size(), a.size(), "real_inner");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
  return s;
}

MeasurementOp::MeasurementOp(std::size_t n, MaskSpec mask) : n_(n), mask_(mask) {
  if (n < 2 || n % 2 != 0)
    throw Error(ErrorCode::invalid_argument, "grid size must be even, got " + std::to_string(n));
  validate(mask_, n_);
  const long long h_nu = static_cast<long long>(mask_.d_nu / 2);
  const long long h_tau = static_cast<long long>(mask_.d_tau / 2);
  lag_.reserve(rows());
  doppler_.reserve(rows());
  for (long long j = -h_nu; j <= h_nu; ++j)
    for (long long i = -h_tau; i <= h_tau; ++i) {
      lag_.push_back(wrap(i, n_));
      doppler_.push_back(wrap(j, n_));
    }

  const auto nn = static_cast<Eigen::Index>(n_);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n_));
  auto dft = [&](long long row, Eigen::Index col) {
    const double angle = -2.0 * std::numbers::pi * static_cast<double>(wrap(row * col, n_)) /
                         static_cast<double>(n_);
    return std::polar(scale, angle);
  };
  tau_re_.resize(2 * h_tau + 1, nn);
  tau_im_.resize(2 * h_tau + 1, nn);
  for (long long r = -h_tau; r <= h_tau; ++r)
    for (Eigen::Index c = 0; c < nn; ++c) {
      const Complex v = dft(r, c);
      tau_re_(r + h_tau, c) = v.real();
      tau_im_(r + h_tau, c) = v.imag();
    }
  nu_half_.resize(2 * (h_nu + 1), nn);
  for (long long r = 0; r <= h_nu; ++r)
    for (Eigen::Index c = 0; c < nn; ++c) {
      const Complex v = dft(r, c);
      nu_half_(r, c) = v.real();
      nu_half_(r + h_nu + 1, c) = v.imag();
    }
}

void MeasurementOp::forward(std::span<const double> omega, std::span<Complex> out) const {
  require_length(omega.size(), cols(), "MeasurementOp::forward");
  require_length(out.size(), rows(), "MeasurementOp::forward output");
  const auto nn = static_cast<Eigen::Index>(n_);
  const auto d_tau = static_cast<Eigen::Index>(mask_.d_tau);
  const auto h_nu = static_cast<Eigen::Index>(mask_.d_nu / 2);
  const Eigen::Map<const Eigen::MatrixXd> w(omega.data(), nn, nn);
  // P = W F_nu^T for q >= 0, then A = F_tau P.
  const Eigen::MatrixXd p = w * nu_half_.transpose();
  const auto p_re = p.leftCols(h_nu + 1);
  const auto p_im = p.rightCols(h_nu + 1);
  const Eigen::MatrixXd a_re = tau_re_ * p_re - tau_im_ * p_im;
  const Eigen::MatrixXd a_im = tau_re_ * p_im + tau_im_ * p_re;
  for (Eigen::Index q = 0; q <= h_nu; ++q)
    for (Eigen::Index i = 0; i < d_tau; ++i) {
      const Complex v{a_re(i, q), a_im(i, q)};
      out[static_cast<std::size_t>(i + (h_nu + q) * d_tau)] = v;
      // A(-tau, -nu) = conj A(tau, nu)
      out[static_cast<std::size_t>((d_tau - 1 - i) + (h_nu - q) * d_tau)] = std::conj(v);
    }
}

std::vector<Complex> LinearOperator::forward(std::span<const double> omega) const {
  std::vector<Complex> out(rows());
  forward(omega, out);
  return out;
}

void MeasurementOp::adjoint(std::span<const Complex> y, std::span<double> out) const {
  require_length(y.size(), rows(), "MeasurementOp::adjoint");
  require_length(out.size(), cols(), "MeasurementOp::adjoint output");
  const auto d_tau = static_cast<Eigen::Index>(mask_.d_tau);
  const auto d_nu = static_cast<Eigen::Index>(mask_.d_nu);
  Eigen::MatrixXd y_re(d_tau, d_nu), y_im(d_tau, d_nu);
  for (Eigen::Index j = 0; j < d_nu; ++j)
    for (Eigen::Index i = 0; i < d_tau; ++i) {
      const Complex v = y[static_cast<std::size_t>(i + j * d_tau)];
      y_re(i, j) = v.real();
      y_im(i, j) = v.imag();
    }
  // W = Re(F_tau^H Y conj(F_nu)). With Q = F_tau^H Y, the Doppler pair
  // (q, -q) folds into Q_q + conj(Q_-q) against conj(F_q).
  const Eigen::MatrixXd q_re = tau_re_.transpose() * y_re + tau_im_.transpose() * y_im;
  const Eigen::MatrixXd q_im = tau_re_.transpose() * y_im - tau_im_.transpose() * y_re;
  const auto nn = static_cast<Eigen::Index>(n_);
  const Eigen::Index h_nu = d_nu / 2;
  Eigen::MatrixXd folded(nn, 2 * (h_nu + 1));
  folded.col(0) = q_re.col(h_nu);
  folded.col(h_nu + 1) = q_im.col(h_nu);
  for (Eigen::Index q = 1; q <= h_nu; ++q) {
    folded.col(q) = q_re.col(h_nu + q) + q_re.col(h_nu - q);
    folded.col(h_nu + 1 + q) = q_im.col(h_nu + q) - q_im.col(h_nu - q);
  }
  Eigen::Map<Eigen::MatrixXd> w(out.data(), nn, nn);
  w.noalias() = folded * nu_half_;
}

std::vector<double> LinearOperator::adjoint(std::span<const Complex> y) const {
  std::vector<double> out(cols());
  adjoint(y, out);
  return out;
}

std::vector<Complex> MeasurementOp::adjoint_complex(std::span<const Complex> y) const {
  require_length(y.size(), rows(), "MeasurementOp::adjoint_complex");
  std::vector<Complex> grid(cols());
  for (std::size_t i = 0; i < rows(); ++i) grid[lag_[i] + doppler_[i] * n_] = y[i];
  fft::backward_2d(grid, n_);
  const double scale = 1.0 / static_cast<double>(n_);
  for (auto& v : grid) v *= scale;
  return grid;
}

Eigen::MatrixXcd dense_oracle(std::size_t n, const MaskSpec& mask) {
  if (n > 16)
    throw Error(ErrorCode::invalid_argument,
                "dense_oracle is limited to n <= 16, got " + std::to_string(n));
  validate(mask, n);
  Eigen::MatrixXcd d(n, n);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) {
      const double angle = -2.0 * std::numbers::pi * static_cast<double>(r * c) / static_cast<double>(n);
      d(r, c) = std::polar(scale, angle);
    }
  // vec(D W D^T) = (D kron D) vec(W) for column-major vec.
  const std::size_t nn = n * n;
  Eigen::MatrixXcd psi(nn, nn);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) psi.block(a * n, b * n, n, n) = d(a, b) * d;

  const long long h_nu = static_cast<long long>(mask.d_nu / 2);
  const long long h_tau = static_cast<long long>(mask.d_tau / 2);
  Eigen::MatrixXcd rows(mask.size(), nn);
  Eigen::Index r = 0;
  for (long long j = -h_nu; j <= h_nu; ++j)
    for (long long i = -h_tau; i <= h_tau; ++i)
      rows.row(r++) = psi.row(static_cast<Eigen::Index>(wrap(i, n) + wrap(j, n) * n));
  return rows;
}

}  // namespace tfr
