#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <span>
#include <vector>

#include "tfr/types.hpp"

namespace tfr {

/// Centered rectangle of AF samples: d_tau lags by d_nu Doppler bins, both odd.
struct MaskSpec {
  std::size_t d_nu = 29;
  std::size_t d_tau = 29;

  std::size_t size() const noexcept { return d_nu * d_tau; }
  friend bool operator==(const MaskSpec&, const MaskSpec&) = default;
};

/// Throws Error(invalid_argument) unless both dims are odd and fit in n.
void validate(const MaskSpec& mask, std::size_t n);

/// Extract the centered block of an origin-centered AF, column-major with the
/// lag index fastest (same orientation as AFMatrix storage).
std::vector<Complex> apply_mask(const AFMatrix& af, const MaskSpec& mask);

/// Real inner product Re<a, b> = Re sum conj(a_i) b_i.
double real_inner(std::span<const Complex> a, std::span<const Complex> b);

/// Linear map from real N^2 vectors to complex M vectors, with its adjoint
/// under the real inner product. The solvers are written against this.
class LinearOperator {
 public:
  virtual ~LinearOperator() = default;

  virtual std::size_t rows() const = 0;
  virtual std::size_t cols() const = 0;
  virtual void forward(std::span<const double> omega, std::span<Complex> out) const = 0;
  virtual void adjoint(std::span<const Complex> y, std::span<double> out) const = 0;

  std::vector<Complex> forward(std::span<const double> omega) const;
  std::vector<double> adjoint(std::span<const Complex> y) const;
};

/// Masked unitary 2D DFT mapping a real, column-major N^2 vector omega to the
/// M = d_nu * d_tau AF samples inside the mask. Never forms the M x N^2 matrix:
/// a rectangular mask makes Psi' = F_nu kron F_tau with F_* the d x N
/// row-selected unitary DFTs, so forward is F_tau W F_nu^T.
///
/// The adjoint is taken with respect to real omega: embed, inverse unitary
/// DFT, real part. Because the mask is symmetric about the origin, forward
/// after adjoint is the identity on conjugate-symmetric M-vectors (every
/// forward() output is one) and annihilates the anti-symmetric ones.
///
/// Immutable after construction; forward/adjoint are reentrant.
class MeasurementOp final : public LinearOperator {
 public:
  MeasurementOp(std::size_t n, MaskSpec mask);

  std::size_t n() const noexcept { return n_; }
  const MaskSpec& mask() const noexcept { return mask_; }
  std::size_t rows() const noexcept override { return mask_.size(); }
  std::size_t cols() const noexcept override { return n_ * n_; }

  using LinearOperator::adjoint;
  using LinearOperator::forward;
  void forward(std::span<const double> omega, std::span<Complex> out) const override;
  void adjoint(std::span<const Complex> y, std::span<double> out) const override;

  /// Conjugate transpose of the complex-domain operator (no real projection).
  std::vector<Complex> adjoint_complex(std::span<const Complex> y) const;

  /// Raw (uncentered) lag and Doppler indices of measurement i.
  std::size_t lag_index(std::size_t i) const { return lag_[i]; }
  std::size_t doppler_index(std::size_t i) const { return doppler_[i]; }

 private:
  std::size_t n_;
  MaskSpec mask_;
  std::vector<std::size_t> lag_;
  std::vector<std::size_t> doppler_;
  // Row-selected DFT factors split into real and imaginary parts. Only the
  // non-negative Doppler rows are kept; real input makes the rest conjugates.
  Eigen::MatrixXd tau_re_, tau_im_;  // d_tau x N
  Eigen::MatrixXd nu_half_;          // [re; im] of Doppler rows 0..d_nu/2, stacked
};

/// Explicit Psi' = rows of (D kron D) selected by the mask, D the unitary DFT
/// matrix. Reference implementation for n <= 16.
Eigen::MatrixXcd dense_oracle(std::size_t n, const MaskSpec& mask);

}  // namespace tfr
