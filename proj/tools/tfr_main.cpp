// tfr: command-line front end for the reconstruction toolkit.
//
// Every subcommand exits 0 on success. Failures print
// {"error":{"code":...,"message":...}} on stderr and exit 1 (library error) or
// 2 (bad command line).

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "tfr/tfr.hpp"

namespace {

using nlohmann::json;

void print_error(std::string_view code, std::string_view message) {
  const json j = {{"error", {{"code", code}, {"message", message}}}};
  std::cerr << j.dump() << '\n';
}

tfr::MaskSpec parse_mask(const std::string& text) {
  const auto x = text.find_first_of("xX");
  try {
    if (x == std::string::npos) {
      const auto d = static_cast<std::size_t>(std::stoul(text));
      return {d, d};
    }
    return {static_cast<std::size_t>(std::stoul(text.substr(0, x))),
            static_cast<std::size_t>(std::stoul(text.substr(x + 1)))};
  } catch (const std::logic_error&) {
    throw tfr::Error(tfr::ErrorCode::invalid_argument, "mask must look like 29x29, got '" + text + "'");
  }
}

// Signal source shared by wvd / af / reconstruct.
struct SignalArgs {
  int benchmark = 1;
  std::optional<double> snr_db;
  std::uint64_t seed = 0;
  std::string signal_path;

  void attach(CLI::App* cmd) {
    cmd->add_option("--case", benchmark, "Benchmark mixture 1..5")->check(CLI::Range(1, 5));
    cmd->add_option("--snr", snr_db, "Noise level in dB (clean when omitted)");
    cmd->add_option("--seed", seed, "Noise seed");
    cmd->add_option("--signal", signal_path, "Read the analytic signal from a c32 file instead");
  }

  tfr::Signal load() const {
    if (!signal_path.empty()) return tfr::io::read_signal(signal_path);
    return tfr::synthesize(tfr::benchmark_case(benchmark, snr_db), seed);
  }
};

void write_csv_to(const std::string& path, const std::vector<tfr::ResultRow>& rows) {
  if (path.empty() || path == "-") {
    tfr::write_csv(std::cout, rows);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw tfr::Error(tfr::ErrorCode::io, "cannot open " + path);
  tfr::write_csv(out, rows);
  if (!out) throw tfr::Error(tfr::ErrorCode::io, "failed writing " + path);
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw tfr::Error(tfr::ErrorCode::io, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Time-frequency reconstruction toolkit"};
  app.require_subcommand(1);

  // synth
  SignalArgs synth_args;
  std::string synth_out;
  auto* synth = app.add_subcommand("synth", "Write a benchmark signal (c32 + sidecar)");
  synth_args.attach(synth);
  synth->add_option("-o,--out", synth_out, "Output file")->required();

  // gen
  tfr::DatasetConfig gen_cfg;
  std::vector<double> gen_snr{5.0, 25.0};
  std::string gen_mask = "29x29";
  std::optional<int> gen_case;
  std::string gen_out;
  auto* gen = app.add_subcommand("gen", "Generate a training/validation dataset");
  gen->add_option("--count", gen_cfg.count, "Number of samples")->required();
  gen->add_option("--snr-range", gen_snr, "Lower and upper SNR in dB")->expected(2);
  gen->add_option("--seed", gen_cfg.seed, "Dataset seed");
  gen->add_option("--mask", gen_mask, "Observation mask d_nu x d_tau");
  gen->add_option("--n", gen_cfg.n, "Samples per signal");
  gen->add_option("--case", gen_case, "Use benchmark mixture 1..5 for every sample")->check(CLI::Range(1, 5));
  gen->add_option("-o,--out", gen_out, "Output directory")->required();

  // wvd / af
  SignalArgs wvd_args;
  std::string wvd_out, wvd_pgm;
  auto* wvd_cmd = app.add_subcommand("wvd", "Wigner-Ville distribution of a signal");
  wvd_args.attach(wvd_cmd);
  wvd_cmd->add_option("-o,--out", wvd_out, "Output f32 file");
  wvd_cmd->add_option("--pgm", wvd_pgm, "Also render to this PGM");

  SignalArgs af_args;
  std::string af_out;
  auto* af_cmd = app.add_subcommand("af", "Ambiguity function of a signal");
  af_args.attach(af_cmd);
  af_cmd->add_option("-o,--out", af_out, "Output c32 file")->required();

  // reconstruct
  SignalArgs rec_args;
  std::string rec_method = "l1app", rec_weights, rec_mask, rec_out, rec_pgm, rec_ideal_case;
  tfr::ReconstructOptions rec_opts;
  std::optional<double> rec_lambda;
  bool rec_report = false;
  auto* rec = app.add_subcommand("reconstruct", "Reconstruct a TFD");
  rec_args.attach(rec);
  rec->add_option("--method", rec_method, "wvd | l1app | ista | uista")
      ->check(CLI::IsMember({"wvd", "l1app", "ista", "uista"}));
  rec->add_option("--weights", rec_weights, "Weight bundle (.uwb) for uista");
  rec->add_option("--mask", rec_mask, "Mask d_nu x d_tau (default 13x13 for l1app, 29x29 otherwise)");
  rec->add_option("--lambda", rec_lambda, "Absolute regularization weight");
  rec->add_option("--lambda-fraction", rec_opts.lambda_fraction, "lambda as a fraction of ||Psi'^T a'||_inf");
  rec->add_option("--max-iters", rec_opts.max_iters, "Iteration budget");
  rec->add_option("--tol", rec_opts.tol, "Relative-change stop");
  rec->add_option("-o,--out", rec_out, "Output f32 file");
  rec->add_option("--pgm", rec_pgm, "Also render to this PGM");
  rec->add_flag("--nmse", rec_report, "Print NMSE (dB) against the benchmark case's ideal TFD");

  // eval
  std::string eval_spec_path, eval_out = "-", eval_weights;
  std::vector<int> eval_cases{1};
  std::vector<double> eval_snr{45.0};
  std::vector<std::string> eval_methods{"wvd", "l1app"};
  std::size_t eval_runs = 100;
  std::uint64_t eval_seed = 0;
  std::vector<double> eval_grid;
  bool eval_progress = false;
  auto* eval = app.add_subcommand("eval", "Monte-Carlo NMSE experiment, CSV output");
  eval->add_option("--spec", eval_spec_path, "JSON experiment spec (flags ignored when given)");
  eval->add_option("--cases", eval_cases, "Benchmark cases")->check(CLI::Range(1, 5));
  eval->add_option("--snr", eval_snr, "SNR values in dB");
  eval->add_option("--snr-grid", eval_grid, "start stop step")->expected(3);
  eval->add_option("--methods", eval_methods, "Methods to compare");
  eval->add_option("--runs", eval_runs, "Trials per point");
  eval->add_option("--seed", eval_seed, "Experiment seed");
  eval->add_option("--weights", eval_weights, "Weight bundle for uista");
  eval->add_option("-o,--out", eval_out, "CSV path ('-' for stdout)");
  eval->add_flag("--progress", eval_progress, "Report progress on stderr");

  // render
  std::string render_in, render_out;
  double render_dr = 20.0;
  auto* render = app.add_subcommand("render", "Render an f32 TFD to a PGM");
  render->add_option("input", render_in, "TFD file")->required();
  render->add_option("-o,--out", render_out, "PGM path")->required();
  render->add_option("--dynamic-range", render_dr, "Dynamic range in dB");

  // fixture-weights
  std::size_t fx_layers = 5, fx_n = 128;
  std::uint64_t fx_seed = 0;
  std::string fx_out;
  auto* fixture = app.add_subcommand("fixture-weights", "Write a seeded random weight bundle (untrained)");
  fixture->add_option("--layers", fx_layers, "K");
  fixture->add_option("--n", fx_n, "Grid size hint");
  fixture->add_option("--seed", fx_seed, "Seed");
  fixture->add_option("-o,--out", fx_out, "Output .uwb")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    print_error("usage", e.what());
    return 2;
  }

  try {
    if (*synth) {
      tfr::io::write_signal(synth_out, synth_args.load());
    } else if (*gen) {
      gen_cfg.snr_range = {gen_snr[0], gen_snr[1]};
      gen_cfg.mask = parse_mask(gen_mask);
      gen_cfg.out_dir = gen_out;
      if (gen_case) gen_cfg.fixed_mixture = tfr::benchmark_case(*gen_case);
      const auto manifest = tfr::make_dataset(gen_cfg);
      std::cout << manifest.samples.size() << " samples written to " << gen_out << '\n';
    } else if (*wvd_cmd) {
      const auto w = tfr::wvd(wvd_args.load());
      if (!wvd_out.empty()) tfr::io::write_tf(wvd_out, w, "wvd");
      if (!wvd_pgm.empty()) tfr::write_pgm(w, wvd_pgm);
    } else if (*af_cmd) {
      tfr::io::write_af(af_out, tfr::af_direct(af_args.load()));
    } else if (*rec) {
      const auto method = tfr::parse_method(rec_method);
      rec_opts.lambda = rec_lambda;
      if (!rec_mask.empty()) rec_opts.mask = parse_mask(rec_mask);
      if (!rec_weights.empty())
        rec_opts.weights = std::make_shared<const tfr::WeightBundle>(tfr::load_weights(rec_weights));
      const auto w = tfr::reconstruct(method, rec_args.load(), rec_opts);
      if (!rec_out.empty()) tfr::io::write_tf(rec_out, w, rec_method);
      if (!rec_pgm.empty()) tfr::write_pgm(w, rec_pgm);
      if (rec_report) {
        if (!rec_args.signal_path.empty())
          throw tfr::Error(tfr::ErrorCode::invalid_argument, "--nmse needs a benchmark case, not --signal");
        const auto ideal = tfr::ideal_tfd(tfr::benchmark_case(rec_args.benchmark));
        std::printf("nmse_db %.4f\n", tfr::nmse_normalized_db(w, ideal));
      }
    } else if (*eval) {
      tfr::ExperimentSpec spec;
      if (!eval_spec_path.empty()) {
        spec = tfr::parse_experiment(read_text(eval_spec_path));
      } else {
        spec.cases = eval_cases;
        spec.snr_db = eval_snr;
        if (!eval_grid.empty()) {
          if (!(eval_grid[2] > 0.0))
            throw tfr::Error(tfr::ErrorCode::invalid_argument, "--snr-grid step must be > 0");
          spec.snr_db.clear();
          for (double s = eval_grid[0]; s <= eval_grid[1] + 1e-9; s += eval_grid[2]) spec.snr_db.push_back(s);
        }
        spec.methods.clear();
        for (const auto& m : eval_methods) spec.methods.push_back(tfr::parse_method(m));
        spec.runs = eval_runs;
        spec.seed = eval_seed;
        if (!eval_weights.empty()) spec.weights_path = eval_weights;
      }
      tfr::ProgressFn progress;
      if (eval_progress)
        progress = [](std::size_t done, std::size_t total) {
          if (done % 50 == 0 || done == total) std::fprintf(stderr, "%zu/%zu\n", done, total);
        };
      write_csv_to(eval_out, tfr::run_experiment(spec, progress));
    } else if (*render) {
      tfr::write_pgm(tfr::io::read_tf(render_in), render_out, render_dr);
    } else if (*fixture) {
      tfr::save_weights(tfr::make_fixture_bundle(fx_layers, fx_n, fx_seed), fx_out);
    }
  } catch (const tfr::Error& e) {
    print_error(tfr::to_string(e.code()), e.what());
    return 1;
  } catch (const std::exception& e) {
    print_error("internal", e.what());
    return 1;
  }
  return 0;
}
