#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "tfr/measurement.hpp"
#include "tfr/types.hpp"

namespace tfr {

/// min_w 1/2 ||a' - Psi' w||^2 + lambda ||w||_1 over real w.
struct LassoProblem {
  const LinearOperator& op;
  std::span<const Complex> a_prime;
  double lambda;
};

enum class Acceleration { ista, fista };

struct SolverConfig {
  std::size_t max_iters = 1000;
  /// Stop when ||w_{k+1} - w_k|| / ||w_{k+1}|| drops below this. 0 runs all iterations.
  double tol = 1e-6;
  /// Gradient step; the operator has unit spectral norm so 1 is 1/L.
  double step = 1.0;
  Acceleration acceleration = Acceleration::ista;
  /// Project onto w >= 0 after shrinkage.
  bool nonnegative = false;
};

struct IterationRecord {
  std::size_t iter = 0;
  double objective = 0.0;
  std::size_t nnz = 0;
  double rel_change = 0.0;
};

struct SolveResult {
  std::vector<double> omega;
  /// Entry 0 is the zero starting point; entry k describes the k-th iterate.
  std::vector<IterationRecord> trace;
  bool converged = false;
};

/// sgn(x) max(|x| - theta, 0). Throws on negative theta.
std::vector<double> soft_threshold(std::span<const double> x, double theta);
std::vector<double> soft_threshold(std::span<const double> x, std::span<const double> theta);
void soft_threshold_inplace(std::span<double> x, double theta);
void soft_threshold_inplace(std::span<double> x, std::span<const double> theta);

double lasso_objective(const LinearOperator& op, std::span<const Complex> a_prime,
                       std::span<const double> omega, double lambda);

/// u = w - t * Psi'^T (Psi' w - a'), given fw = Psi' w. Shared by the fixed
/// threshold solver and the unrolled network so both take the same arithmetic
/// path.
void gradient_step(const LinearOperator& op, std::span<const double> omega,
                   std::span<const Complex> fw, std::span<const Complex> a_prime, double step,
                   std::span<double> u);

/// ISTA / FISTA from w = 0 with threshold lambda * step.
///
/// FISTA resets its momentum whenever the objective rises, which keeps the
/// trace monotone up to one step. Throws Error(divergence) when the objective
/// rises for more than 5 consecutive iterations.
SolveResult ista_solve(const LassoProblem& problem, const SolverConfig& config);

/// Smallest lambda with a zero solution is ||Psi'^T a'||_inf; this returns
/// `fraction` of it.
double relative_lambda(const LinearOperator& op, std::span<const Complex> a_prime,
                       double fraction = 0.01);

/// Writes `iter,objective,nnz,rel_change` rows.
void write_trace_csv(std::ostream& out, std::span<const IterationRecord> trace);

struct L1AppConfig {
  MaskSpec mask{13, 13};
  /// Absolute lambda; when unset, lambda_fraction * ||Psi'^T a'||_inf.
  std::optional<double> lambda;
  double lambda_fraction = 0.01;
  std::size_t max_iters = 2000;
  double tol = 1e-6;
  bool nonnegative = false;
};

/// Baseline sparse reconstruction: af_direct, centered mask, FISTA.
TFMatrix l1app_reconstruct(const Signal& z, const L1AppConfig& config = {});
TFMatrix l1app_reconstruct(const Signal& z, double lambda);

}  // namespace tfr
