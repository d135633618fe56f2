#include "tfr/experiment.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <ostream>

#include "json.hpp"
#include "tfr/dataset.hpp"
#include "tfr/error.hpp"
#include "tfr/lasso.hpp"
#include "tfr/metrics.hpp"
#include "tfr/tfd.hpp"
#include "tfr/uista.hpp"

namespace tfr {
namespace {

using nlohmann::json;

std::string format_number(double v, int precision) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, precision);
  return std::string(buf, res.ptr);
}

}  // namespace

std::string_view to_string(Method m) noexcept {
  switch (m) {
    case Method::wvd: return "wvd";
    case Method::l1app: return "l1app";
    case Method::ista: return "ista";
    case Method::uista: return "uista";
  }
  return "unknown";
}

Method parse_method(std::string_view name) {
  for (Method m : {Method::wvd, Method::l1app, Method::ista, Method::uista})
    if (to_string(m) == name) return m;
  throw Error(ErrorCode::invalid_argument, "unknown method '" + std::string(name) + "'");
}

MaskSpec default_mask(Method m) noexcept {
  return m == Method::l1app ? MaskSpec{13, 13} : MaskSpec{29, 29};
}

TFMatrix reconstruct(Method method, const Signal& z, const ReconstructOptions& options) {
  const MaskSpec mask = options.mask.value_or(default_mask(method));
  switch (method) {
    case Method::wvd:
      return wvd(z);
    case Method::l1app: {
      L1AppConfig cfg;
      cfg.mask = mask;
      cfg.lambda = options.lambda;
      cfg.lambda_fraction = options.lambda_fraction;
      cfg.max_iters = options.max_iters;
      cfg.tol = options.tol;
      return l1app_reconstruct(z, cfg);
    }
    case Method::ista: {
      const MeasurementOp op(z.size(), mask);
      const auto a_prime = apply_mask(af_direct(z), mask);
      const double lambda = options.lambda.value_or(relative_lambda(op, a_prime, options.lambda_fraction));
      if (lambda <= 0.0) return TFMatrix(z.size());
      SolverConfig cfg;
      cfg.max_iters = options.max_iters;
      cfg.tol = options.tol;
      auto result = ista_solve(LassoProblem{op, a_prime, lambda}, cfg);
      return TFMatrix(z.size(), std::move(result.omega));
    }
    case Method::uista: {
      if (!options.weights) throw Error(ErrorCode::invalid_argument, "uista needs a weight file");
      const auto model = UistaModel::from_bundle(options.weights, z.size(), mask);
      return uista_reconstruct(model, apply_mask(af_direct(z), mask));
    }
  }
  throw Error(ErrorCode::invalid_argument, "unknown method");
}

ExperimentSpec parse_experiment(std::string_view text) {
  ExperimentSpec spec;
  try {
    const json j = json::parse(text);
    if (j.contains("case")) spec.cases = {j.at("case").get<int>()};
    if (j.contains("cases")) spec.cases = j.at("cases").get<std::vector<int>>();
    if (j.contains("mixture")) spec.custom = mixture_from_json(j.at("mixture").dump());
    if (j.contains("snr_db")) spec.snr_db = j.at("snr_db").get<std::vector<double>>();
    if (j.contains("snr_grid")) {
      const auto& g = j.at("snr_grid");
      const double start = g.at("start").get<double>();
      const double stop = g.at("stop").get<double>();
      const double step = g.at("step").get<double>();
      if (!(step > 0.0)) throw Error(ErrorCode::invalid_argument, "snr_grid.step must be > 0");
      spec.snr_db.clear();
      for (double s = start; s <= stop + 1e-9; s += step) spec.snr_db.push_back(s);
    }
    if (j.contains("runs")) spec.runs = j.at("runs").get<std::size_t>();
    if (j.contains("methods")) {
      spec.methods.clear();
      for (const auto& m : j.at("methods")) spec.methods.push_back(parse_method(m.get<std::string>()));
    }
    if (j.contains("seed")) spec.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("weights")) spec.weights_path = j.at("weights").get<std::string>();
    if (j.contains("lambda")) spec.options.lambda = j.at("lambda").get<double>();
    if (j.contains("lambda_fraction")) spec.options.lambda_fraction = j.at("lambda_fraction").get<double>();
    if (j.contains("max_iters")) spec.options.max_iters = j.at("max_iters").get<std::size_t>();
    if (j.contains("tol")) spec.options.tol = j.at("tol").get<double>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::format, std::string("experiment spec: ") + e.what());
  }
  validate(spec);
  return spec;
}

void validate(const ExperimentSpec& spec) {
  if (spec.runs == 0) throw Error(ErrorCode::invalid_argument, "runs must be >= 1");
  if (spec.methods.empty()) throw Error(ErrorCode::invalid_argument, "methods must not be empty");
  if (spec.snr_db.empty()) throw Error(ErrorCode::invalid_argument, "snr list must not be empty");
  if (!spec.custom && spec.cases.empty()) throw Error(ErrorCode::invalid_argument, "no cases given");
  for (Method m : spec.methods)
    if (m == Method::uista && !spec.weights_path && !spec.options.weights)
      throw Error(ErrorCode::invalid_argument, "method uista requires weights");
}

std::vector<ResultRow> run_experiment(const ExperimentSpec& spec, const ProgressFn& progress) {
  validate(spec);
  ReconstructOptions options = spec.options;
  if (!options.weights && spec.weights_path)
    options.weights = std::make_shared<const WeightBundle>(load_weights(*spec.weights_path));

  struct Scenario {
    std::string label;
    MixtureSpec mixture;
  };
  std::vector<Scenario> scenarios;
  if (spec.custom) {
    scenarios.push_back({"custom", *spec.custom});
  } else {
    for (int c : spec.cases) scenarios.push_back({std::to_string(c), benchmark_case(c)});
  }

  const std::size_t total = scenarios.size() * spec.snr_db.size() * spec.runs;
  std::size_t done = 0;
  std::vector<ResultRow> rows;
  for (std::size_t s = 0; s < scenarios.size(); ++s) {
    const auto& scenario = scenarios[s];
    const TFMatrix ideal = ideal_tfd(scenario.mixture);
    for (std::size_t si = 0; si < spec.snr_db.size(); ++si) {
      std::vector<std::vector<double>> scores(spec.methods.size());
      MixtureSpec mixture = scenario.mixture;
      mixture.snr_db = spec.snr_db[si];
      for (std::size_t run = 0; run < spec.runs; ++run) {
        const std::uint64_t seed = derive_seed(spec.seed, (s << 40) | (si << 20) | run, 7);
        const Signal z = synthesize(mixture, seed);
        for (std::size_t mi = 0; mi < spec.methods.size(); ++mi)
          scores[mi].push_back(nmse_normalized_db(reconstruct(spec.methods[mi], z, options), ideal));
        if (progress) progress(++done, total);
      }
      for (std::size_t mi = 0; mi < spec.methods.size(); ++mi) {
        const auto& v = scores[mi];
        double mean = 0.0;
        for (double x : v) mean += x;
        mean /= static_cast<double>(v.size());
        double var = 0.0;
        if (std::isfinite(mean) && v.size() > 1) {
          for (double x : v) var += (x - mean) * (x - mean);
          var /= static_cast<double>(v.size() - 1);
        }
        rows.push_back({scenario.label, spec.snr_db[si], spec.methods[mi], mean, std::sqrt(var), v.size()});
      }
    }
  }
  return rows;
}

void write_csv(std::ostream& out, const std::vector<ResultRow>& rows) {
  out << "case,snr_db,method,mean_nmse_db,std_nmse_db,runs\n";
  for (const auto& r : rows)
    out << r.case_label << ',' << format_number(r.snr_db, 2) << ',' << to_string(r.method) << ','
        << format_number(r.mean_nmse_db, 4) << ',' << format_number(r.std_nmse_db, 4) << ',' << r.runs << '\n';
}

}  // namespace tfr
