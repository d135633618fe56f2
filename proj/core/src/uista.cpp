#include "tfr/uista.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tfr/error.hpp"
#include "tfr/lasso.hpp"

namespace tfr {
namespace {

double max_abs(std::span<const double> x) {
  double m = 0.0;
  for (double v : x) m = std::max(m, std::abs(v));
  return m;
}

void require_finite(std::span<const double> x, std::size_t layer, const char* what) {
  for (double v : x)
    if (!std::isfinite(v))
      throw Error(ErrorCode::non_finite, std::string(what) + " is not finite at layer " + std::to_string(layer));
}

template <class Sink>
void run_layers(const UistaModel& model, std::span<const Complex> a_prime, Sink&& sink) {
  const auto& op = model.op();
  if (a_prime.size() != op.rows())
    throw Error(ErrorCode::dimension_mismatch, "a' length " + std::to_string(a_prime.size()) +
                                                   " does not match mask size " + std::to_string(op.rows()));
  std::vector<double> omega(op.cols(), 0.0);
  std::vector<double> u(op.cols());
  std::vector<Complex> fw(op.rows());
  sink(omega, nullptr);
  for (std::size_t k = 0; k < model.layers(); ++k) {
    op.forward(omega, fw);
    gradient_step(op, omega, fw, a_prime, model.steps()[k], u);
    require_finite(u, k, "gradient step");
    auto theta = model.thresholds().threshold(k, u, omega, op.n());
    require_finite(theta, k, "threshold map");
    soft_threshold_inplace(u, theta);
    omega.swap(u);
    sink(omega, &theta);
  }
}

}  // namespace

ConstantThreshold::ConstantThreshold(double theta) : theta_(theta) {
  if (!(theta >= 0.0)) throw Error(ErrorCode::invalid_argument, "constant threshold must be >= 0");
}

UNetThreshold::UNetThreshold(std::shared_ptr<const WeightBundle> bundle) : bundle_(std::move(bundle)) {
  if (!bundle_) throw Error(ErrorCode::invalid_argument, "UNetThreshold needs a bundle");
  validate(*bundle_);
}

std::vector<double> UNetThreshold::threshold(std::size_t layer, std::span<const double> u,
                                             std::span<const double> omega, std::size_t n) const {
  if (layer >= bundle_->layers())
    throw Error(ErrorCode::invalid_argument, "bundle has no network for layer " + std::to_string(layer));
  const auto src = bundle_->threshold_input == ThresholdInput::pre_threshold ? u : omega;
  double scale = 1.0;
  if (bundle_->normalize_input) {
    scale = max_abs(src);
    if (scale == 0.0) return std::vector<double>(src.size(), 0.0);
  }
  TFMatrix input(n);
  auto values = input.values();
  for (std::size_t i = 0; i < src.size(); ++i) values[i] = src[i] / scale;
  auto out = std::move(unet_forward(bundle_->nets[layer], bundle_->arch, input)).release();
  for (double& v : out) v *= scale;
  return out;
}

UistaModel::UistaModel(MeasurementOp op, std::shared_ptr<const ThresholdProvider> thresholds,
                       std::vector<double> steps)
    : op_(std::move(op)), thresholds_(std::move(thresholds)), steps_(std::move(steps)) {
  if (!thresholds_) throw Error(ErrorCode::invalid_argument, "UistaModel needs a threshold provider");
  if (steps_.empty()) throw Error(ErrorCode::invalid_argument, "UistaModel needs K >= 1 layers");
  for (double t : steps_)
    if (!std::isfinite(t)) throw Error(ErrorCode::non_finite, "step sizes must be finite");
}

UistaModel UistaModel::from_bundle(std::shared_ptr<const WeightBundle> bundle, std::size_t n, MaskSpec mask) {
  if (!bundle) throw Error(ErrorCode::invalid_argument, "missing weight bundle");
  if (bundle->n_hint != n)
    throw Error(ErrorCode::dimension_mismatch, "weights were built for N=" + std::to_string(bundle->n_hint) +
                                                   ", grid is N=" + std::to_string(n));
  auto steps = bundle->steps;
  return UistaModel(MeasurementOp(n, mask), std::make_shared<UNetThreshold>(bundle), std::move(steps));
}

TFMatrix uista_reconstruct(const UistaModel& model, std::span<const Complex> a_prime) {
  std::vector<double> last;
  run_layers(model, a_prime, [&](const std::vector<double>& omega, const std::vector<double>*) { last = omega; });
  return TFMatrix(model.op().n(), std::move(last));
}

LayerTrace uista_layer_trace(const UistaModel& model, std::span<const Complex> a_prime) {
  LayerTrace trace;
  run_layers(model, a_prime, [&](const std::vector<double>& omega, const std::vector<double>* theta) {
    trace.iterates.push_back(omega);
    if (theta) trace.thresholds.push_back(*theta);
  });
  return trace;
}

}  // namespace tfr
