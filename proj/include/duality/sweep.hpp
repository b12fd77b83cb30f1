#pragma once

// Sweep orchestration and file formats behind the command-line tool.

#include <cstdint>
#include <filesystem>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "duality/analysis.hpp"
#include "duality/experiment.hpp"
#include "duality/pulse.hpp"

namespace duality {

enum class OutputFormat { Csv, Json };

struct PhiRange {
  double start = 0.0;
  double end = 5.0 * std::numbers::pi / 4.0;
  double step = std::numbers::pi / 16.0;

  /// start + k*step for every k with start + k*step <= end (1e-9 slack).
  std::vector<double> points() const;
};

struct SweepConfig {
  double phi_plus = std::numbers::pi / 2.0;
  PhiRange phi_range;
  std::size_t phase_grid_points = 32;
  std::optional<NoiseModel> noise;
  std::optional<std::uint64_t> shots;
  /// Master seed for noise draws and shot sampling. Point k uses
  /// derive_seed(seed, 4k + s) for stream s: 0 joint-probability pulses,
  /// 1 joint-probability shots, 2 fringe pulses, 3 fringe shots.
  std::uint64_t seed = 0;
  VisibilityEstimator estimator = VisibilityEstimator::SinusoidFit;
  std::filesystem::path output_path;
  OutputFormat format = OutputFormat::Csv;
  unsigned workers = 1;

  /// Throws std::invalid_argument on step <= 0, end < start, fewer than 8
  /// phase points, zero workers or invalid noise.
  void validate() const;
};

/// One row of the sweep at marker angle phi (index k selects the sub-seeds).
DualityRecord evaluate_point(const SweepConfig& config, std::size_t index, double phi);

/// Rows ordered by phi regardless of worker scheduling.
std::vector<DualityRecord> compute_sweep(const SweepConfig& config);

/// compute_sweep, then writes the formatted rows to config.output_path when it
/// is non-empty.
std::vector<DualityRecord> run_sweep(const SweepConfig& config);

/// Nine significant digits, "-0" normalized to "0".
std::string format_value(double value);

/// Header `phi,V,D_geo,D_lik,E,duality_sum`.
std::string format_records(const std::vector<DualityRecord>& records, OutputFormat format);

/// Throws std::runtime_error on a malformed file.
std::vector<DualityRecord> parse_records_csv(std::string_view text);

struct FringeConfig {
  MarkerPair markers;
  std::size_t phase_grid_points = 32;
  std::optional<NoiseModel> noise;
  std::optional<std::uint64_t> shots;
  std::uint64_t seed = 0;
  VisibilityEstimator estimator = VisibilityEstimator::SinusoidFit;
  std::filesystem::path output_path;
};

struct FringeResult {
  std::vector<FringeSample> samples;
  double visibility = 0.0;
};

FringeResult run_fringe(const FringeConfig& config);

/// `phase,population` rows followed by a `# V=<value>` line.
std::string format_fringe(const FringeResult& result);

enum class Reference { None, MarkedState, Merge };

struct CompileReport {
  Unitary4 unitary = Unitary4::identity();
  std::optional<double> score;
};

/// Compiles program text with the given bindings under the calibrated frame.
///
/// When `phase` is bound and theta1/theta2 are not, they are derived from it.
/// Reference::MarkedState scores |<psi1(phi_p, phi_m)| U |00>|; Reference::Merge scores
/// equivalent_up_to_phase(U, u2(phase) (x) 1).
CompileReport compile_sequence(std::string_view program_text, const Bindings& bindings, Reference reference);

std::string format_matrix(const Unitary4& u);

/// Writes through a temporary sibling and renames; nothing is left behind on
/// failure. Throws std::runtime_error.
void write_file_atomically(const std::filesystem::path& path, std::string_view content);

} // namespace duality
