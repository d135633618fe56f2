#include "tfr/lasso.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ostream>
#include <string>

#include "tfr/error.hpp"
#include "tfr/fft.hpp"
#include "tfr/tfd.hpp"

namespace tfr {
namespace {

double shrink(double x, double theta) {
  const double mag = std::abs(x) - theta;
  return mag > 0.0 ? std::copysign(mag, x) : 0.0;
}

void check_theta(double theta) {
  if (!(theta >= 0.0))
    throw Error(ErrorCode::invalid_argument, "threshold must be >= 0, got " + std::to_string(theta));
}

double squared_residual(std::span<const Complex> fw, std::span<const Complex> a_prime) {
  double s = 0.0;
  for (std::size_t i = 0; i < fw.size(); ++i) s += std::norm(fw[i] - a_prime[i]);
  return s;
}

double l1_norm(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += std::abs(v);
  return s;
}

}  // namespace

std::vector<double> soft_threshold(std::span<const double> x, double theta) {
  std::vector<double> out(x.begin(), x.end());
  soft_threshold_inplace(out, theta);
  return out;
}

std::vector<double> soft_threshold(std::span<const double> x, std::span<const double> theta) {
  std::vector<double> out(x.begin(), x.end());
  soft_threshold_inplace(out, theta);
  return out;
}

void soft_threshold_inplace(std::span<double> x, double theta) {
  check_theta(theta);
  for (double& v : x) v = shrink(v, theta);
}

void soft_threshold_inplace(std::span<double> x, std::span<const double> theta) {
  if (theta.size() != x.size())
    throw Error(ErrorCode::dimension_mismatch, "threshold map size does not match input");
  for (std::size_t i = 0; i < x.size(); ++i) {
    check_theta(theta[i]);
    x[i] = shrink(x[i], theta[i]);
  }
}

double lasso_objective(const LinearOperator& op, std::span<const Complex> a_prime,
                       std::span<const double> omega, double lambda) {
  const auto fw = op.forward(omega);
  return 0.5 * squared_residual(fw, a_prime) + lambda * l1_norm(omega);
}

void gradient_step(const LinearOperator& op, std::span<const double> omega,
                   std::span<const Complex> fw, std::span<const Complex> a_prime, double step,
                   std::span<double> u) {
  std::vector<Complex> residual(fw.size());
  for (std::size_t i = 0; i < fw.size(); ++i) residual[i] = fw[i] - a_prime[i];
  op.adjoint(residual, u);
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = omega[i] - step * u[i];
}

SolveResult ista_solve(const LassoProblem& problem, const SolverConfig& config) {
  const auto& op = problem.op;
  if (problem.a_prime.size() != op.rows())
    throw Error(ErrorCode::dimension_mismatch, "a' length " + std::to_string(problem.a_prime.size()) +
                                                   " does not match mask size " +
                                                   std::to_string(op.rows()));
  if (!(problem.lambda > 0.0) || !std::isfinite(problem.lambda))
    throw Error(ErrorCode::invalid_argument, "lambda must be finite and > 0");
  if (!(config.step > 0.0 && config.step <= 1.0))
    throw Error(ErrorCode::invalid_argument, "step must lie in (0, 1]");
  for (const auto& v : problem.a_prime)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw Error(ErrorCode::non_finite, "a' contains non-finite values");

  const std::size_t dim = op.cols();
  const double theta = problem.lambda * config.step;
  const bool fista = config.acceleration == Acceleration::fista;

  std::vector<double> omega(dim, 0.0);
  std::vector<double> prev(dim, 0.0);
  std::vector<double> u(dim);
  std::vector<Complex> fw(op.rows(), Complex{});
  std::vector<Complex> fw_prev(op.rows(), Complex{});
  std::vector<Complex> residual(op.rows());
  // Extrapolated point; only used by FISTA.
  std::vector<double> y(dim);

  SolveResult result;
  double objective = 0.5 * squared_residual(fw, problem.a_prime);
  result.trace.push_back({0, objective, 0, 0.0});

  double momentum = 1.0;
  std::size_t rises = 0;
  for (std::size_t k = 1; k <= config.max_iters; ++k) {
    prev.swap(omega);
    fw_prev.swap(fw);
    const double* base = prev.data();
    if (fista && k > 1) {
      const double next_momentum = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * momentum * momentum));
      const double beta = (momentum - 1.0) / next_momentum;
      momentum = next_momentum;
      // prev holds w_k, omega holds w_{k-1} after the swap. The operator is
      // linear, so the image of the extrapolated point is extrapolated too.
      for (std::size_t i = 0; i < dim; ++i) y[i] = prev[i] + beta * (prev[i] - omega[i]);
      for (std::size_t i = 0; i < residual.size(); ++i)
        residual[i] = fw_prev[i] + beta * (fw_prev[i] - fw[i]) - problem.a_prime[i];
      base = y.data();
    } else {
      for (std::size_t i = 0; i < residual.size(); ++i) residual[i] = fw_prev[i] - problem.a_prime[i];
    }
    op.adjoint(residual, u);

    // Gradient step, shrinkage and the per-iteration statistics in one pass.
    double l1 = 0.0, diff = 0.0, norm_next = 0.0, norm_prev = 0.0;
    std::size_t nnz = 0;
    for (std::size_t i = 0; i < dim; ++i) {
      double v = shrink(base[i] - config.step * u[i], theta);
      if (config.nonnegative) v = std::max(v, 0.0);
      u[i] = v;
      l1 += std::abs(v);
      nnz += v != 0.0;
      const double d = v - prev[i];
      diff += d * d;
      norm_next += v * v;
      norm_prev += prev[i] * prev[i];
    }
    omega.swap(u);
    op.forward(omega, fw);

    const double next = 0.5 * squared_residual(fw, problem.a_prime) + problem.lambda * l1;
    if (!std::isfinite(next))
      throw Error(ErrorCode::non_finite, "objective became non-finite at iteration " + std::to_string(k));
    const double denom = std::max(norm_next, norm_prev);
    const double change = denom > 0.0 ? std::sqrt(diff / denom) : 0.0;
    result.trace.push_back({k, next, nnz, change});

    if (next > objective + 1e-12 * std::max(1.0, std::abs(objective))) {
      if (++rises > 5)
        throw Error(ErrorCode::divergence,
                    "objective increased for " + std::to_string(rises) +
                        " consecutive iterations (operator/adjoint mismatch?)");
      momentum = 1.0;
    } else {
      rises = 0;
    }
    objective = next;
    if (change < config.tol) {
      result.converged = true;
      break;
    }
  }
  result.omega = std::move(omega);
  return result;
}

double relative_lambda(const LinearOperator& op, std::span<const Complex> a_prime, double fraction) {
  const auto g = op.adjoint(a_prime);
  double m = 0.0;
  for (double v : g) m = std::max(m, std::abs(v));
  return fraction * m;
}

void write_trace_csv(std::ostream& out, std::span<const IterationRecord> trace) {
  out << "iter,objective,nnz,rel_change\n";
  char buf[64];
  for (const auto& r : trace) {
    out << r.iter << ',';
    auto res = std::to_chars(buf, buf + sizeof buf, r.objective, std::chars_format::scientific, 12);
    out.write(buf, res.ptr - buf);
    out << ',' << r.nnz << ',';
    res = std::to_chars(buf, buf + sizeof buf, r.rel_change, std::chars_format::scientific, 12);
    out.write(buf, res.ptr - buf);
    out << '\n';
  }
}

TFMatrix l1app_reconstruct(const Signal& z, const L1AppConfig& config) {
  const std::size_t n = z.size();
  const MeasurementOp op(n, config.mask);
  const auto a_prime = apply_mask(af_direct(z), config.mask);
  const double lambda = config.lambda.value_or(relative_lambda(op, a_prime, config.lambda_fraction));
  if (lambda <= 0.0) return TFMatrix(n);  // a' = 0: the zero vector is optimal.

  SolverConfig cfg;
  cfg.acceleration = Acceleration::fista;
  cfg.max_iters = config.max_iters;
  cfg.tol = config.tol;
  cfg.nonnegative = config.nonnegative;
  auto result = ista_solve(LassoProblem{op, a_prime, lambda}, cfg);
  return TFMatrix(n, std::move(result.omega));
}

TFMatrix l1app_reconstruct(const Signal& z, double lambda) {
  L1AppConfig cfg;
  cfg.lambda = lambda;
  return l1app_reconstruct(z, cfg);
}

}  // namespace tfr
