#include "duality/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace duality {

namespace {

constexpr double kRecordTolerance = 1e-9;

// Portable uniform draw on [-1, 1); std::uniform_real_distribution is not
// specified bit-for-bit across standard libraries.
double symmetric_uniform(std::mt19937_64& engine) {
  const double unit = static_cast<double>(engine() >> 11) * 0x1.0p-53;
  return 2.0 * unit - 1.0;
}

double unit_uniform(std::mt19937_64& engine) { return static_cast<double>(engine() >> 11) * 0x1.0p-53; }

DensityMatrix4 damp_coherences(const DensityMatrix4& rho, double weight_a, double weight_b) {
  SquareMatrix<4> out = rho.entries();
  for (int row = 0; row < 4; ++row) {
    for (int col = 0; col < 4; ++col) {
      const bool a_differs = (row & 1) != (col & 1);
      const bool b_differs = (row >> 1) != (col >> 1);
      if (a_differs) {
        out(row, col) *= weight_a;
      }
      if (b_differs) {
        out(row, col) *= weight_b;
      }
    }
  }
  return DensityMatrix4(out);
}

// Rotations and couplings by theta and theta - 2pi differ only by a global
// sign, so the applied pulse is the representative in (-pi, pi].
double wrap_angle(double theta) {
  const double two_pi = 2.0 * std::numbers::pi;
  double wrapped = std::remainder(theta, two_pi);
  if (wrapped <= -std::numbers::pi) {
    wrapped += two_pi;
  }
  return wrapped;
}

// Runs `program` on rho with per-pulse miscalibration and T2 damping during
// coupling evolution.
DensityMatrix4 run_noisy(const PulseSequence& program, DensityMatrix4 rho, const NoiseModel& noise,
                         std::mt19937_64& engine) {
  for (ResolvedPulse pulse : application_order(program)) {
    pulse.angle = wrap_angle(pulse.angle);
    if (pulse.kind == PulseKind::Rotation) {
      pulse.angle *= 1.0 + noise.miscalibration * symmetric_uniform(engine);
    }
    rho = evolve(pulse_unitary(pulse), rho);
    if (pulse.kind == PulseKind::Coupling) {
      const double t = coupling_duration(pulse.angle, noise.j_coupling);
      rho = damp_coherences(rho, t2_dephasing_weight(t, noise.t2_a), t2_dephasing_weight(t, noise.t2_b));
    }
  }
  return rho;
}

double marker_rotation_angle(const MarkerPair& markers) {
  return std::numbers::pi / 4.0 - (markers.phi_plus + markers.phi_minus) / 2.0;
}

DensityMatrix4 noisy_marked_state(const MarkerPair& markers, const NoiseModel& noise, std::mt19937_64& engine) {
  const DensityMatrix4 ground = density(StateVector::basis(0, 0));
  return run_noisy(programs::beam_splitter_markers(markers.phi_plus, markers.phi_minus), ground, noise, engine);
}

class ShotSampler {
public:
  explicit ShotSampler(const ReadoutOptions& options) : options_(options), engine_(options.seed) {}

  MeasurementRecord read(const DensityMatrix4& rho) {
    std::array<double, 4> diag{};
    for (int i = 0; i < 4; ++i) {
      diag[static_cast<std::size_t>(i)] = rho(i, i).real();
    }
    if (!options_.shots) {
      return MeasurementRecord(diag);
    }
    const std::uint64_t shots = *options_.shots;
    if (shots == 0) {
      throw std::invalid_argument("shot count must be positive");
    }
    std::array<double, 4> cumulative{};
    double running = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
      running += std::max(diag[i], 0.0);
      cumulative[i] = running;
    }
    std::array<std::uint64_t, 4> counts{};
    for (std::uint64_t s = 0; s < shots; ++s) {
      const double u = unit_uniform(engine_) * running;
      std::size_t k = 0;
      while (k < 3 && u >= cumulative[k]) {
        ++k;
      }
      ++counts[k];
    }
    std::array<double, 4> freq{};
    for (std::size_t i = 0; i < 4; ++i) {
      freq[i] = static_cast<double>(counts[i]) / static_cast<double>(shots);
    }
    return MeasurementRecord(freq);
  }

private:
  ReadoutOptions options_;
  std::mt19937_64 engine_;
};

} // namespace

void NoiseModel::validate() const {
  if (!(miscalibration >= 0.0 && miscalibration <= kMaxMiscalibration)) {
    throw std::invalid_argument("miscalibration fraction must lie in [0, 0.2]");
  }
  if (!(t2_a > 0.0) || !(t2_b > 0.0)) {
    throw std::invalid_argument("T2 times must be positive");
  }
  if (!(j_coupling > 0.0)) {
    throw std::invalid_argument("J coupling must be positive");
  }
}

MeasurementRecord::MeasurementRecord(const std::array<double, 4>& diagonal) : diagonal_(diagonal) {
  double sum = 0.0;
  for (double p : diagonal_) {
    if (!std::isfinite(p) || p < -kRecordTolerance) {
      throw std::invalid_argument("measurement record has a negative population");
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > kRecordTolerance) {
    throw std::invalid_argument("measurement record is not normalized");
  }
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  // splitmix64 finalizer over a golden-ratio stride.
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

Unitary2 marker_rotation(const MarkerPair& markers) {
  const double alpha = marker_rotation_angle(markers);
  SquareMatrix<2> m;
  m << std::cos(alpha), -std::sin(alpha), std::sin(alpha), std::cos(alpha);
  return Unitary2(m);
}

DensityMatrix4 dephase(const DensityMatrix4& rho) {
  return DensityMatrix4(rho.entries().diagonal().asDiagonal().toDenseMatrix());
}

MeasurementRecord read_diagonal(const DensityMatrix4& rho, const ReadoutOptions& readout) {
  ShotSampler sampler(readout);
  return sampler.read(rho);
}

DensityMatrix4 prepare_marked_state(const MarkerPair& markers, const std::optional<NoiseModel>& noise) {
  if (!noise) {
    return density(psi1(markers));
  }
  noise->validate();
  std::mt19937_64 engine(noise->rng_seed);
  return noisy_marked_state(markers, *noise, engine);
}

JointProbs joint_probabilities(const MarkerPair& markers, const std::optional<NoiseModel>& noise,
                               const ReadoutOptions& readout) {
  DensityMatrix4 rotated = density(StateVector::basis(0, 0));
  if (noise) {
    noise->validate();
    std::mt19937_64 engine(noise->rng_seed);
    const DensityMatrix4 marked = noisy_marked_state(markers, *noise, engine);
    rotated = run_noisy(programs::marker_readout(marker_rotation_angle(markers)), marked, *noise, engine);
  } else {
    rotated = density(apply(tensor(pauli::identity(), marker_rotation(markers)), psi1(markers)));
  }
  const MeasurementRecord record = read_diagonal(dephase(rotated), readout);
  // |b>|beta+-> was rotated onto |b>|0> and |b>|1>.
  JointProbs jp{record[basis_index(0, 0)], record[basis_index(0, 1)], record[basis_index(1, 0)],
                record[basis_index(1, 1)]};
  jp.validate();
  return jp;
}

std::vector<FringeSample> simulate_fringe(const MarkerPair& markers, std::span<const double> phase_grid,
                                          const std::optional<NoiseModel>& noise,
                                          const ReadoutOptions& readout) {
  if (phase_grid.empty()) {
    throw std::invalid_argument("phase grid is empty");
  }
  if (noise) {
    noise->validate();
  }
  std::mt19937_64 engine(noise ? noise->rng_seed : 0);
  ShotSampler sampler(readout);

  std::vector<FringeSample> samples;
  samples.reserve(phase_grid.size());
  for (double phase : phase_grid) {
    DensityMatrix4 merged = density(StateVector::basis(0, 0));
    if (noise) {
      const DensityMatrix4 marked = noisy_marked_state(markers, *noise, engine);
      merged = run_noisy(programs::phase_shift_merge(phase), marked, *noise, engine);
    } else {
      merged = density(psi2(markers, PhaseSetting{phase}));
    }
    const MeasurementRecord record = sampler.read(dephase(merged));
    const double population = record[basis_index(0, 0)] + record[basis_index(0, 1)];
    samples.push_back({phase, population});
  }
  return samples;
}

double t2_dephasing_weight(double duration, double t2) {
  if (!(duration >= 0.0) || !(t2 > 0.0)) {
    throw std::invalid_argument("dephasing needs duration >= 0 and T2 > 0");
  }
  return std::exp(-duration / t2);
}

double coupling_duration(double phase, double j_coupling) {
  return std::abs(phase) / (std::numbers::pi * j_coupling);
}

std::vector<double> uniform_phase_grid(std::size_t n) {
  std::vector<double> grid(n);
  for (std::size_t k = 0; k < n; ++k) {
    grid[k] = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
  }
  return grid;
}

} // namespace duality
