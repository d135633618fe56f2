#pragma once

#include <memory>
#include <span>
#include <vector>

#include "tfr/measurement.hpp"
#include "tfr/types.hpp"
#include "tfr/unet.hpp"

namespace tfr {

/// Produces the threshold field for layer k from the gradient-step output u
/// and the current iterate omega (both column-major N^2).
class ThresholdProvider {
 public:
  virtual ~ThresholdProvider() = default;
  virtual std::vector<double> threshold(std::size_t layer, std::span<const double> u,
                                        std::span<const double> omega, std::size_t n) const = 0;
};

class ZeroThreshold final : public ThresholdProvider {
 public:
  std::vector<double> threshold(std::size_t, std::span<const double> u, std::span<const double>,
                                std::size_t) const override {
    return std::vector<double>(u.size(), 0.0);
  }
};

class ConstantThreshold final : public ThresholdProvider {
 public:
  explicit ConstantThreshold(double theta);
  std::vector<double> threshold(std::size_t, std::span<const double> u, std::span<const double>,
                                std::size_t) const override {
    return std::vector<double>(u.size(), theta_);
  }

 private:
  double theta_;
};

/// Threshold maps from the bundle's per-layer U-Nets, honouring its
/// threshold_input and normalize_input flags.
class UNetThreshold final : public ThresholdProvider {
 public:
  explicit UNetThreshold(std::shared_ptr<const WeightBundle> bundle);
  std::vector<double> threshold(std::size_t layer, std::span<const double> u,
                                std::span<const double> omega, std::size_t n) const override;

 private:
  std::shared_ptr<const WeightBundle> bundle_;
};

/// K unrolled layers: u = w - t_k Psi'^T (Psi' w - a'), w <- h_{theta_k}(u).
/// Psi' is fixed; only the steps and the threshold provider vary per layer.
class UistaModel {
 public:
  UistaModel(MeasurementOp op, std::shared_ptr<const ThresholdProvider> thresholds,
             std::vector<double> steps);

  /// Model backed by a trained (or fixture) bundle. The grid is the bundle's
  /// N_hint and must equal n.
  static UistaModel from_bundle(std::shared_ptr<const WeightBundle> bundle, std::size_t n,
                                MaskSpec mask = {29, 29});

  const MeasurementOp& op() const noexcept { return op_; }
  std::size_t layers() const noexcept { return steps_.size(); }
  const std::vector<double>& steps() const noexcept { return steps_; }
  const ThresholdProvider& thresholds() const noexcept { return *thresholds_; }

 private:
  MeasurementOp op_;
  std::shared_ptr<const ThresholdProvider> thresholds_;
  std::vector<double> steps_;
};

struct LayerTrace {
  /// K + 1 iterates, starting from zero.
  std::vector<std::vector<double>> iterates;
  /// K threshold maps.
  std::vector<std::vector<double>> thresholds;
};

TFMatrix uista_reconstruct(const UistaModel& model, std::span<const Complex> a_prime);
LayerTrace uista_layer_trace(const UistaModel& model, std::span<const Complex> a_prime);

}  // namespace tfr
