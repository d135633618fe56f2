#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "tfr/error.hpp"
#include "tfr/measurement.hpp"
#include "tfr/siggen.hpp"
#include "tfr/tfd.hpp"

namespace {

using tfr::Complex;
using tfr::MaskSpec;
using tfr::MeasurementOp;

Eigen::VectorXcd as_eigen(const std::vector<Complex>& v) {
  return Eigen::Map<const Eigen::VectorXcd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

TEST(ApplyMask, DegenerateMaskIsOrigin) {
  const auto a = tfr::af_direct(tfr::synthesize(tfr::benchmark_case(1), 0));
  const auto y = tfr::apply_mask(a, {1, 1});
  ASSERT_EQ(y.size(), 1u);
  EXPECT_EQ(y[0], a.origin());
}

TEST(ApplyMask, SizesFollowMask) {
  const auto a = tfr::af_direct(tfr::synthesize(tfr::benchmark_case(1), 0));
  EXPECT_EQ(tfr::apply_mask(a, {29, 29}).size(), 841u);
  EXPECT_EQ(tfr::apply_mask(a, {13, 13}).size(), 169u);
  EXPECT_THROW(tfr::apply_mask(a, {129, 1}), tfr::Error);
  EXPECT_THROW(tfr::apply_mask(a, {4, 3}), tfr::Error);
}

TEST(Forward, MatchesMaskedTransformOfWvd) {
  const auto w = tfr::wvd(tfr::synthesize(tfr::benchmark_case(1, 30.0), 0));
  const MaskSpec mask{29, 21};
  const MeasurementOp op(128, mask);
  const auto y = op.forward(w.values());
  const auto ref = tfr::apply_mask(tfr::af_from_wvd(w), mask);
  EXPECT_LT((as_eigen(y) - as_eigen(ref)).norm() / as_eigen(ref).norm(), 1e-12);
}

TEST(Forward, ZeroInZeroOut) {
  const MeasurementOp op(32, {9, 9});
  for (const auto& v : op.forward(std::vector<double>(32 * 32, 0.0))) EXPECT_EQ(v, Complex{});
  for (double v : op.adjoint(std::vector<Complex>(81))) EXPECT_EQ(v, 0.0);
}

TEST(Forward, MatchesDenseOracleAtN8) {
  std::mt19937_64 rng(11);
  for (const MaskSpec mask : {MaskSpec{3, 3}, MaskSpec{5, 3}, MaskSpec{1, 7}}) {
    const MeasurementOp op(8, mask);
    const auto psi = tfr::dense_oracle(8, mask);
    for (int trial = 0; trial < 100; ++trial) {
      const auto w = oracle::random_real(64, rng);
      const Eigen::VectorXcd ref = psi * Eigen::Map<const Eigen::VectorXd>(w.data(), 64).cast<Complex>();
      EXPECT_LT((as_eigen(op.forward(w)) - ref).norm(), 1e-10 * ref.norm());
    }
  }
}

TEST(DenseOracle, AgreesWithDefinition) {
  for (const MaskSpec mask : {MaskSpec{3, 3}, MaskSpec{5, 7}}) {
    const auto a = tfr::dense_oracle(8, mask);
    const auto b = oracle::psi(8, mask);
    EXPECT_LT((a - b).cwiseAbs().maxCoeff(), 1e-14);
  }
  // n = 4, 1x1: the DC row 1/4 everywhere.
  const auto dc = tfr::dense_oracle(4, {1, 1});
  ASSERT_EQ(dc.rows(), 1);
  for (Eigen::Index j = 0; j < dc.cols(); ++j) EXPECT_NEAR(std::abs(dc(0, j) - 0.25), 0.0, 1e-15);
  EXPECT_THROW(tfr::dense_oracle(32, {3, 3}), tfr::Error);
}

TEST(DenseOracle, RowsAreOrthonormal) {
  const auto psi = tfr::dense_oracle(8, {3, 3});
  const Eigen::MatrixXcd gram = psi * psi.adjoint();
  EXPECT_LT((gram - Eigen::MatrixXcd::Identity(9, 9)).cwiseAbs().maxCoeff(), 1e-12);
}

void dot_test(std::size_t n, const MaskSpec& mask, int trials) {
  std::mt19937_64 rng(n * 1000 + mask.size());
  const MeasurementOp op(n, mask);
  for (int trial = 0; trial < trials; ++trial) {
    const auto w = oracle::random_real(op.cols(), rng);
    const auto y = oracle::random_complex(op.rows(), rng);
    const double lhs = tfr::real_inner(op.forward(w), y);
    const auto adj = op.adjoint(y);
    double rhs = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) rhs += w[i] * adj[i];
    EXPECT_LT(std::abs(lhs - rhs), 1e-10 * oracle::norm2(w) * oracle::norm2(y));
  }
}

TEST(Adjoint, DotTestSmallGrid) { dot_test(8, {3, 3}, 100); }
TEST(Adjoint, DotTestFullGrid) {
  dot_test(128, {29, 29}, 100);
  dot_test(128, {13, 13}, 20);
  dot_test(128, {5, 17}, 20);
}

TEST(Adjoint, ComplexAdjointMatchesDenseConjugateTranspose) {
  std::mt19937_64 rng(3);
  const MaskSpec mask{5, 3};
  const MeasurementOp op(8, mask);
  const auto psi = tfr::dense_oracle(8, mask);
  const auto y = oracle::random_complex(op.rows(), rng);
  const Eigen::VectorXcd ref = psi.adjoint() * as_eigen(y);
  EXPECT_LT((as_eigen(op.adjoint_complex(y)) - ref).norm(), 1e-12 * ref.norm());
  // Without the real projection, forward(adjoint) is the identity.
  const Eigen::VectorXcd back = psi * as_eigen(op.adjoint_complex(y));
  EXPECT_LT((back - as_eigen(y)).norm(), 1e-12 * as_eigen(y).norm());
}

TEST(Adjoint, BasisVectorsComeBackAsSymmetricPairs) {
  // adjoint(e_i) is real, so forward() returns the conjugate-symmetric part:
  // 1/2 at i and 1/2 at its mirror (1 at the origin, which is its own mirror).
  const MaskSpec mask{5, 7};
  const MeasurementOp op(16, mask);
  for (std::size_t i = 0; i < op.rows(); ++i) {
    std::vector<Complex> e(op.rows());
    e[i] = 1.0;
    const auto y = op.forward(op.adjoint(e));
    const std::size_t mirror = op.rows() - 1 - i;
    for (std::size_t j = 0; j < op.rows(); ++j) {
      const double expected = (i == mirror) ? (j == i ? 1.0 : 0.0) : (j == i || j == mirror ? 0.5 : 0.0);
      ASSERT_NEAR(y[j].real(), expected, 1e-12) << i << "," << j;
      ASSERT_NEAR(y[j].imag(), 0.0, 1e-12);
    }
  }
}

TEST(Adjoint, ForwardOfAdjointIsIdentityOnSymmetricData) {
  const auto z = tfr::synthesize(tfr::benchmark_case(3, 10.0), 0);
  const MaskSpec mask{29, 29};
  const MeasurementOp op(128, mask);
  const auto a = tfr::apply_mask(tfr::af_direct(z), mask);
  const auto back = op.forward(op.adjoint(a));
  EXPECT_LT((as_eigen(back) - as_eigen(a)).norm(), 1e-12 * as_eigen(a).norm());
}

TEST(Adjoint, PowerIterationFindsUnitNorm) {
  std::mt19937_64 rng(9);
  for (const auto& [n, mask] : {std::pair{8ul, MaskSpec{3, 3}}, std::pair{128ul, MaskSpec{29, 29}}}) {
    const MeasurementOp op(n, mask);
    auto y = oracle::random_complex(op.rows(), rng);
    double lambda = 0.0;
    for (int it = 0; it < 50; ++it) {
      const double norm = oracle::norm2(y);
      for (auto& v : y) v /= norm;
      const auto next = op.forward(op.adjoint(y));
      lambda = tfr::real_inner(y, next);
      y = next;
    }
    EXPECT_NEAR(lambda, 1.0, 1e-9) << "n=" << n;
  }
}

TEST(Forward, ParsevalOnMaskedComplement) {
  std::mt19937_64 rng(2);
  const MeasurementOp op(32, {9, 7});
  for (int trial = 0; trial < 20; ++trial) {
    const auto w = oracle::random_real(op.cols(), rng);
    EXPECT_LE(oracle::norm2(op.forward(w)), oracle::norm2(w) * (1 + 1e-12));
  }
  // Equality when omega's transform lives inside the mask.
  std::vector<Complex> y(op.rows());
  y[op.rows() / 2] = 2.0;  // origin
  y[3] = {0.5, 0.25};
  y[op.rows() - 1 - 3] = std::conj(y[3]);
  const auto w = op.adjoint(y);
  EXPECT_NEAR(oracle::norm2(op.forward(w)), oracle::norm2(w), 1e-12);
}

TEST(MeasurementOp, RejectsLengthMismatch) {
  const MeasurementOp op(16, {3, 3});
  EXPECT_THROW(op.forward(std::vector<double>(10)), tfr::Error);
  EXPECT_THROW(op.adjoint(std::vector<Complex>(10)), tfr::Error);
  EXPECT_THROW(MeasurementOp(16, {17, 3}), tfr::Error);
}

TEST(MeasurementOp, IndexingFollowsCenteredLayout) {
  const MeasurementOp op(16, {3, 5});
  // First entry: lag -2, Doppler -1; lag varies fastest.
  EXPECT_EQ(op.lag_index(0), 14u);
  EXPECT_EQ(op.doppler_index(0), 15u);
  EXPECT_EQ(op.lag_index(1), 15u);
  EXPECT_EQ(op.lag_index(7), 0u);  // Doppler 0, lag 0 is entry 5 + 2
  EXPECT_EQ(op.doppler_index(7), 0u);
}

}  // namespace
