// Command-line driver: duality sweeps, single fringes and the pulse compiler.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "duality/sweep.hpp"

namespace {

using namespace duality;

struct NoiseFlags {
  std::optional<double> miscalibration;
  std::optional<double> t2_a;
  std::optional<double> t2_b;
  std::optional<double> j_coupling;
  std::uint64_t seed = 0;
  std::string shots = "ensemble";

  void attach(CLI::App& cmd) {
    cmd.add_option("--noise-miscal", miscalibration, "Pulse miscalibration fraction eps in [0, 0.2]; enables noise");
    cmd.add_option("--t2a", t2_a, "T2 of marker spin A in seconds (default 3.3)");
    cmd.add_option("--t2b", t2_b, "T2 of observed spin B in seconds (default 0.35)");
    cmd.add_option("--j", j_coupling, "J coupling in Hz (default 214.95)");
    cmd.add_option("--seed", seed, "Seed for noise draws and shot sampling");
    cmd.add_option("--shots", shots, "Shots per readout, or 'ensemble' for exact populations");
  }

  std::optional<NoiseModel> noise() const {
    if (!miscalibration && !t2_a && !t2_b && !j_coupling) {
      return std::nullopt;
    }
    NoiseModel model;
    model.miscalibration = miscalibration.value_or(0.0);
    model.t2_a = t2_a.value_or(kProtonT2);
    model.t2_b = t2_b.value_or(kCarbonT2);
    model.j_coupling = j_coupling.value_or(kCouplingHz);
    model.rng_seed = seed;
    model.validate();
    return model;
  }

  std::optional<std::uint64_t> shot_count() const {
    if (shots == "ensemble") {
      return std::nullopt;
    }
    std::size_t used = 0;
    const unsigned long long n = std::stoull(shots, &used);
    if (used != shots.size() || n == 0) {
      throw std::invalid_argument("--shots expects a positive integer or 'ensemble'");
    }
    return n;
  }
};

VisibilityEstimator parse_estimator(const std::string& name) {
  return name == "maxmin" ? VisibilityEstimator::MaxMin : VisibilityEstimator::SinusoidFit;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot read '" + path + "'");
  }
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-way interferometer with quantum path markers: duality sweeps, fringes and pulse compilation"};
  app.require_subcommand(1);

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Sweep the marker angle and tabulate V, D, E and D^2+V^2");
  std::string sweep_phi_plus = "pi/2";
  std::string phi_start = "0";
  std::string phi_end = "5*pi/4";
  std::string phi_step = "pi/16";
  std::size_t sweep_points = 32;
  std::string sweep_out;
  std::string format = "csv";
  unsigned workers = 1;
  std::string sweep_estimator = "fit";
  NoiseFlags sweep_noise;
  sweep->add_option("--phi-plus", sweep_phi_plus, "Angle of |m+> (expression)");
  sweep->add_option("--phi-start", phi_start, "First marker angle (expression)");
  sweep->add_option("--phi-end", phi_end, "Last marker angle (expression)");
  sweep->add_option("--phi-step", phi_step, "Marker angle increment (expression)");
  sweep->add_option("--phase-points", sweep_points, "Interferometer phases per fringe");
  sweep->add_option("--out", sweep_out, "Output file (stdout when omitted)");
  sweep->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  sweep->add_option("--workers", workers, "Concurrent sweep points");
  sweep->add_option("--estimator", sweep_estimator, "Visibility estimator: fit or maxmin")
      ->check(CLI::IsMember({"fit", "maxmin"}));
  sweep_noise.attach(*sweep);

  // fringe
  auto* fringe = app.add_subcommand("fringe", "Simulate one interference fringe and fit its visibility");
  std::string fringe_phi_plus = "pi/2";
  std::string fringe_phi = "0";
  std::size_t fringe_points = 32;
  std::string fringe_out;
  std::string fringe_estimator = "fit";
  NoiseFlags fringe_noise;
  fringe->add_option("--phi-plus", fringe_phi_plus, "Angle of |m+> (expression)");
  fringe->add_option("--phi", fringe_phi, "Marker angle phi- - phi+ (expression)");
  fringe->add_option("--phase-points", fringe_points, "Interferometer phases");
  fringe->add_option("--out", fringe_out, "Output file (stdout when omitted)");
  fringe->add_option("--estimator", fringe_estimator, "Visibility estimator: fit or maxmin")
      ->check(CLI::IsMember({"fit", "maxmin"}));
  fringe_noise.attach(*fringe);

  // compile
  auto* compile_cmd = app.add_subcommand("compile", "Compile a pulse program to its 4x4 unitary");
  std::string program_path;
  std::vector<std::string> params;
  std::optional<std::string> compile_phi_plus;
  std::optional<std::string> compile_phi_minus;
  std::optional<std::string> compile_phase;
  std::string reference = "none";
  compile_cmd->add_option("program", program_path, "Pulse program file")->required();
  compile_cmd->add_option("--param", params, "Binding name=expression (repeatable)");
  compile_cmd->add_option("--phi-plus", compile_phi_plus, "Binds phi_p");
  compile_cmd->add_option("--phi-minus", compile_phi_minus, "Binds phi_m");
  compile_cmd->add_option("--phase", compile_phase, "Binds phase (and theta1/theta2 when unbound)");
  compile_cmd->add_option("--reference", reference, "Score against the marked state, the merge unitary or nothing")
      ->check(CLI::IsMember({"none", "marked", "merge"}));

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sweep) {
      SweepConfig config;
      config.phi_plus = evaluate_angle(sweep_phi_plus);
      config.phi_range = {evaluate_angle(phi_start), evaluate_angle(phi_end), evaluate_angle(phi_step)};
      config.phase_grid_points = sweep_points;
      config.noise = sweep_noise.noise();
      config.shots = sweep_noise.shot_count();
      config.seed = sweep_noise.seed;
      config.estimator = parse_estimator(sweep_estimator);
      config.output_path = sweep_out;
      config.format = format == "json" ? OutputFormat::Json : OutputFormat::Csv;
      config.workers = workers;
      const auto rows = run_sweep(config);
      if (sweep_out.empty()) {
        std::cout << format_records(rows, config.format);
      }
    } else if (*fringe) {
      FringeConfig config;
      config.markers = MarkerPair::from_marker_angle(evaluate_angle(fringe_phi_plus), evaluate_angle(fringe_phi));
      config.phase_grid_points = fringe_points;
      config.noise = fringe_noise.noise();
      config.shots = fringe_noise.shot_count();
      config.seed = fringe_noise.seed;
      config.estimator = parse_estimator(fringe_estimator);
      config.output_path = fringe_out;
      const FringeResult result = run_fringe(config);
      if (fringe_out.empty()) {
        std::cout << format_fringe(result);
      }
    } else if (*compile_cmd) {
      Bindings bindings;
      for (const auto& binding : params) {
        const auto eq = binding.find('=');
        if (eq == std::string::npos || eq == 0) {
          throw std::invalid_argument("--param expects name=expression, got '" + binding + "'");
        }
        bindings.insert_or_assign(binding.substr(0, eq), evaluate_angle(binding.substr(eq + 1)));
      }
      if (compile_phi_plus) {
        bindings.insert_or_assign("phi_p", evaluate_angle(*compile_phi_plus));
      }
      if (compile_phi_minus) {
        bindings.insert_or_assign("phi_m", evaluate_angle(*compile_phi_minus));
      }
      if (compile_phase) {
        bindings.insert_or_assign("phase", evaluate_angle(*compile_phase));
      }
      const Reference ref = reference == "marked" ? Reference::MarkedState : reference == "merge" ? Reference::Merge : Reference::None;
      const CompileReport report = compile_sequence(read_file(program_path), bindings, ref);
      std::cout << format_matrix(report.unitary);
      if (report.score) {
        std::cout << "score: " << format_value(*report.score) << '\n';
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
