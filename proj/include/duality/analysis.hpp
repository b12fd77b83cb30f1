#pragma once

// Visibility, distinguishability, entanglement and the duality sum.

#include <cstddef>
#include <span>

#include "duality/interferometer.hpp"
#include "duality/quantum.hpp"

namespace duality {

inline constexpr double kJointProbTolerance = 1e-9;

/// Joint probabilities p(beta+-_A, path_B) of a marker-basis / path measurement.
struct JointProbs {
  double p_bp_0 = 0.25; // (beta+, |0>_B)
  double p_bm_0 = 0.25; // (beta-, |0>_B)
  double p_bp_1 = 0.25; // (beta+, |1>_B)
  double p_bm_1 = 0.25; // (beta-, |1>_B)

  /// Throws std::invalid_argument if an entry leaves [0,1] or the sum differs
  /// from 1 by more than kJointProbTolerance.
  void validate() const;
};

/// Coefficients of |m+> = g+ |beta+> + g- |beta->, |m-> = d+ |beta+> + d- |beta->.
struct DecompositionCoeffs {
  double gamma_plus = 0.0;
  double gamma_minus = 0.0;
  double delta_plus = 0.0;
  double delta_minus = 0.0;
};

struct DualityRecord {
  double phi = 0.0; // marker angle
  double V = 0.0;
  double D_geo = 0.0;
  double D_lik = 0.0;
  double E = 0.0;
  double duality_sum = 0.0;

  friend bool operator==(const DualityRecord&, const DualityRecord&) = default;
};

struct FringeSample {
  double phase = 0.0;
  double population = 0.0;
};

enum class VisibilityEstimator {
  /// Least-squares fit of a + b cos(p + c); V = |b| / a.
  SinusoidFit,
  /// (I_max - I_min) / (I_max + I_min) over the samples.
  MaxMin,
};

/// |<m+|m->| = |cos phi|.
double visibility_analytic(const MarkerPair& markers);

/// Throws std::invalid_argument with fewer than 3 samples and std::domain_error
/// when the fit is singular or the fringe mean is not positive. The result is
/// clamped to [0, 1].
double visibility_from_fringe(std::span<const FringeSample> samples,
                              VisibilityEstimator estimator = VisibilityEstimator::SinusoidFit);

/// theta = (phi+ + phi-)/2 - pi/4.
Basis2 beta_basis(const MarkerPair& markers);

DecompositionCoeffs decompose(const MarkerPair& markers);

/// Ideal p(beta+-, b) = |(<b|_B <beta+-|_A) psi1|^2 for an arbitrary basis.
JointProbs ideal_joint_probabilities(const MarkerPair& markers, const Basis2& basis);

/// Average of | |g+|^2 - |d+|^2 | and | |d-|^2 - |g-|^2 | with |.|^2 = 2 p;
/// clamped to [0, 1].
double distinguishability_geometric(const JointProbs& jp);

/// Likelihood of guessing the path from the marker outcome.
double likelihood(const JointProbs& jp);

/// D = 2L - 1. Throws std::domain_error unless L lies in [1/2, 1] (within
/// kJointProbTolerance); the result is clamped to [0, 1].
double distinguishability_likelihood(double L);

struct ObservableSearchResult {
  double theta_star = 0.0;
  double likelihood_max = 0.0;
};

inline constexpr std::size_t kMinObservableGrid = 64;

/// Scans basis angles k*pi/grid_size for k in [0, grid_size) and returns the
/// first angle whose likelihood is within 1e-12 of the maximum. Throws
/// std::invalid_argument when grid_size < kMinObservableGrid.
ObservableSearchResult optimal_observable_search(const MarkerPair& markers, std::size_t grid_size);

/// Entanglement of psi1 in bits, closed form in the marker angle.
double entanglement(const MarkerPair& markers);

double duality_sum(double V, double D);

} // namespace duality
