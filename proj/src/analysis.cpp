#include "duality/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <spdlog/spdlog.h>

namespace duality {

namespace {

double clamp_unit(double value, const char* what) {
  if (value < 0.0 || value > 1.0) {
    spdlog::debug("clamping {} = {:.12g} into [0, 1]", what, value);
    return std::clamp(value, 0.0, 1.0);
  }
  return value;
}

double binary_entropy(double p) {
  double h = 0.0;
  for (double q : {p, 1.0 - p}) {
    if (q > kEntropyClamp) {
      h -= q * std::log2(q);
    }
  }
  return h;
}

} // namespace

void JointProbs::validate() const {
  const double entries[] = {p_bp_0, p_bm_0, p_bp_1, p_bm_1};
  double sum = 0.0;
  for (double p : entries) {
    if (!std::isfinite(p) || p < -kJointProbTolerance || p > 1.0 + kJointProbTolerance) {
      throw std::invalid_argument("joint probability outside [0, 1]");
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > kJointProbTolerance) {
    throw std::invalid_argument("joint probabilities do not sum to 1");
  }
}

double visibility_analytic(const MarkerPair& markers) { return std::abs(markers.overlap()); }

double visibility_from_fringe(std::span<const FringeSample> samples, VisibilityEstimator estimator) {
  constexpr std::size_t kFitParameters = 3;
  if (samples.size() < kFitParameters) {
    throw std::invalid_argument("fringe needs at least 3 samples");
  }

  if (estimator == VisibilityEstimator::MaxMin) {
    const auto [lo, hi] = std::minmax_element(samples.begin(), samples.end(), [](const auto& a, const auto& b) {
      return a.population < b.population;
    });
    const double denom = hi->population + lo->population;
    if (!(denom > 0.0)) {
      throw std::domain_error("fringe is identically zero");
    }
    return clamp_unit((hi->population - lo->population) / denom, "V");
  }

  const auto n = static_cast<Eigen::Index>(samples.size());
  Eigen::MatrixX3d design(n, 3);
  Eigen::VectorXd rhs(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& s = samples[static_cast<std::size_t>(i)];
    design(i, 0) = 1.0;
    design(i, 1) = std::cos(s.phase);
    design(i, 2) = std::sin(s.phase);
    rhs(i) = s.population;
  }
  const Eigen::ColPivHouseholderQR<Eigen::MatrixX3d> qr(design);
  if (qr.rank() < 3) {
    throw std::domain_error("fringe fit is singular; phases do not span a period");
  }
  const Eigen::Vector3d coeffs = qr.solve(rhs);
  const double mean = coeffs(0);
  if (!(mean > 0.0)) {
    throw std::domain_error("fringe fit has non-positive mean");
  }
  return clamp_unit(std::hypot(coeffs(1), coeffs(2)) / mean, "V");
}

Basis2 beta_basis(const MarkerPair& markers) {
  return Basis2{(markers.phi_plus + markers.phi_minus) / 2.0 - std::numbers::pi / 4.0};
}

DecompositionCoeffs decompose(const MarkerPair& markers) {
  const double half = std::numbers::pi / 4.0 - markers.marker_angle() / 2.0;
  return {std::cos(half), std::sin(half), std::sin(half), std::cos(half)};
}

JointProbs ideal_joint_probabilities(const MarkerPair& markers, const Basis2& basis) {
  const StateVector psi = psi1(markers);
  auto project = [&](const Eigen::Vector2cd& beta, int b) {
    const Complex amp = std::conj(beta(0)) * psi[basis_index(b, 0)] + std::conj(beta(1)) * psi[basis_index(b, 1)];
    return std::norm(amp);
  };
  return {project(basis.plus(), 0), project(basis.minus(), 0), project(basis.plus(), 1), project(basis.minus(), 1)};
}

double distinguishability_geometric(const JointProbs& jp) {
  const double gamma_plus2 = 2.0 * jp.p_bp_0;
  const double gamma_minus2 = 2.0 * jp.p_bm_0;
  const double delta_plus2 = 2.0 * jp.p_bp_1;
  const double delta_minus2 = 2.0 * jp.p_bm_1;
  const double d = (std::abs(gamma_plus2 - delta_plus2) + std::abs(delta_minus2 - gamma_minus2)) / 2.0;
  return clamp_unit(d, "D_geo");
}

double likelihood(const JointProbs& jp) {
  return std::max(jp.p_bp_0, jp.p_bp_1) + std::max(jp.p_bm_0, jp.p_bm_1);
}

double distinguishability_likelihood(double L) {
  if (!(L >= 0.5 - kJointProbTolerance && L <= 1.0 + kJointProbTolerance)) {
    throw std::domain_error("likelihood outside [1/2, 1]");
  }
  return clamp_unit(2.0 * L - 1.0, "D_lik");
}

ObservableSearchResult optimal_observable_search(const MarkerPair& markers, std::size_t grid_size) {
  if (grid_size < kMinObservableGrid) {
    throw std::invalid_argument("observable search grid must have at least 64 points");
  }
  constexpr double kTie = 1e-12;
  ObservableSearchResult best{0.0, -1.0};
  for (std::size_t k = 0; k < grid_size; ++k) {
    const double theta = std::numbers::pi * static_cast<double>(k) / static_cast<double>(grid_size);
    const double L = likelihood(ideal_joint_probabilities(markers, Basis2{theta}));
    if (L > best.likelihood_max + kTie) {
      best = {theta, L};
    }
  }
  return best;
}

double entanglement(const MarkerPair& markers) {
  return binary_entropy((1.0 - std::cos(markers.marker_angle())) / 2.0);
}

double duality_sum(double V, double D) { return D * D + V * V; }

} // namespace duality
