#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tfr/measurement.hpp"
#include "tfr/siggen.hpp"
#include "tfr/types.hpp"
#include "tfr/unet.hpp"

namespace tfr {

enum class Method { wvd, l1app, ista, uista };

std::string_view to_string(Method m) noexcept;
Method parse_method(std::string_view name);

struct ReconstructOptions {
  /// Overrides the method's default mask (13x13 for l1app, 29x29 otherwise).
  std::optional<MaskSpec> mask;
  std::optional<double> lambda;
  double lambda_fraction = 0.01;
  std::size_t max_iters = 2000;
  double tol = 1e-6;
  std::shared_ptr<const WeightBundle> weights;
};

MaskSpec default_mask(Method m) noexcept;

/// One reconstruction of z by the named method.
TFMatrix reconstruct(Method method, const Signal& z, const ReconstructOptions& options = {});

struct ExperimentSpec {
  /// Benchmark cases 1..5; ignored when `custom` is set.
  std::vector<int> cases{1};
  std::optional<MixtureSpec> custom;
  std::vector<double> snr_db{45.0};
  std::size_t runs = 100;
  std::vector<Method> methods{Method::wvd, Method::l1app};
  std::uint64_t seed = 0;
  std::optional<std::string> weights_path;
  ReconstructOptions options;
};

/// Parses the JSON experiment file. Keys: case | cases, mixture, snr_db
/// (list) | snr_grid {start, stop, step}, runs, methods, seed, weights,
/// lambda, lambda_fraction, max_iters, tol.
ExperimentSpec parse_experiment(std::string_view json_text);
void validate(const ExperimentSpec& spec);

struct ResultRow {
  std::string case_label;
  double snr_db = 0.0;
  Method method = Method::wvd;
  double mean_nmse_db = 0.0;
  double std_nmse_db = 0.0;
  std::size_t runs = 0;
};

using ProgressFn = std::function<void(std::size_t done, std::size_t total)>;

/// For every case and SNR: `runs` noisy realizations, every method
/// reconstructs each, and NMSE (max-normalized, against the ideal TFD) is
/// averaged in dB. Noise seeds derive from (seed, case, snr index, run), so the
/// table depends only on the spec.
std::vector<ResultRow> run_experiment(const ExperimentSpec& spec, const ProgressFn& progress = {});

/// Fixed header and column order, C-locale numbers.
void write_csv(std::ostream& out, const std::vector<ResultRow>& rows);

}  // namespace tfr
