#pragma once

// Emulation of the two measurement procedures: readout rotation into the
// beta basis, gradient-pulse dephasing and diagonal tomography for the joint
// probabilities, and the phase-scanned fringe for the visibility.
//
// Without noise every state is built from the analytic reference path. With a
// NoiseModel the states are prepared by running the pulse programs pulse by
// pulse. Every angle is reduced to (-pi, pi]; each RF rotation is then scaled
// by (1 + eps*u) with u ~ U[-1, 1] drawn per pulse. Coupling evolution is not
// an RF pulse and is not scaled, but damps the coherences of A and B by
// exp(-t/T2) with t = |phase| / (pi J).

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "duality/analysis.hpp"
#include "duality/interferometer.hpp"
#include "duality/pulse.hpp"
#include "duality/quantum.hpp"

namespace duality {

inline constexpr double kProtonT2 = 3.3;        // seconds, marker spin A
inline constexpr double kCarbonT2 = 0.35;       // seconds, observed spin B
inline constexpr double kCouplingHz = 214.95;   // J between the two spins
inline constexpr double kMaxMiscalibration = 0.2;

struct NoiseModel {
  double miscalibration = 0.05;
  double t2_a = kProtonT2;
  double t2_b = kCarbonT2;
  double j_coupling = kCouplingHz;
  std::uint64_t rng_seed = 0;

  /// Throws std::invalid_argument on eps outside [0, 0.2] or non-positive T2/J.
  void validate() const;
};

/// Finite-shot readout. Without shots the ensemble populations are exact.
struct ReadoutOptions {
  std::optional<std::uint64_t> shots;
  std::uint64_t seed = 0;
};

/// Populations of |00>, |01>, |10>, |11> after dephasing.
class MeasurementRecord {
public:
  /// Throws std::invalid_argument unless entries >= -1e-9 and sum to 1 within 1e-9.
  explicit MeasurementRecord(const std::array<double, 4>& diagonal);

  const std::array<double, 4>& diagonal() const { return diagonal_; }
  double operator[](std::size_t i) const { return diagonal_[i]; }

private:
  std::array<double, 4> diagonal_;
};

/// Deterministic sub-seed for stream `stream` of a run seeded with `seed`.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

/// [[cos a, -sin a], [sin a, cos a]] with a = pi/4 - (phi+ + phi-)/2; maps
/// |beta+> to |0> and |beta-> to -|1> on spin A.
Unitary2 marker_rotation(const MarkerPair& markers);

/// Zeroes every off-diagonal entry.
DensityMatrix4 dephase(const DensityMatrix4& rho);

/// Diagonal of an already dephased state, optionally resampled with shots.
MeasurementRecord read_diagonal(const DensityMatrix4& rho, const ReadoutOptions& readout = {});

/// Marked state rho1: analytic without noise, pulse-prepared with noise.
DensityMatrix4 prepare_marked_state(const MarkerPair& markers, const std::optional<NoiseModel>& noise);

JointProbs joint_probabilities(const MarkerPair& markers, const std::optional<NoiseModel>& noise,
                               const ReadoutOptions& readout = {});

/// Population of |0>_B at each phase. Throws std::invalid_argument on an
/// empty grid.
std::vector<FringeSample> simulate_fringe(const MarkerPair& markers, std::span<const double> phase_grid,
                                          const std::optional<NoiseModel>& noise,
                                          const ReadoutOptions& readout = {});

/// exp(-duration / t2).
double t2_dephasing_weight(double duration, double t2);

/// Evolution time of a coupling pulse: |phase| / (pi J).
double coupling_duration(double phase, double j_coupling);

/// n points k * 2pi / n, k in [0, n).
std::vector<double> uniform_phase_grid(std::size_t n);

} // namespace duality
