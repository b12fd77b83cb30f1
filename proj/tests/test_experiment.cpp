#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "duality/experiment.hpp"
#include "oracles.hpp"

using namespace duality;
using doctest::Approx;

namespace {

constexpr double kPi = std::numbers::pi;

// |<beta+-| m+->|^2 / 2 from the explicit vectors.
JointProbs direct_joint_probabilities(const MarkerPair& m) {
  const double theta = (m.phi_plus + m.phi_minus) / 2 - kPi / 4;
  const Eigen::Vector2d bp(std::cos(theta), std::sin(theta));
  const Eigen::Vector2d bm(-std::sin(theta), std::cos(theta));
  const Eigen::Vector2d mp(std::cos(m.phi_plus), std::sin(m.phi_plus));
  const Eigen::Vector2d mm(std::cos(m.phi_minus), std::sin(m.phi_minus));
  auto sq = [](double x) { return x * x; };
  return {sq(bp.dot(mp)) / 2, sq(bm.dot(mp)) / 2, sq(bp.dot(mm)) / 2, sq(bm.dot(mm)) / 2};
}

double max_diff(const JointProbs& a, const JointProbs& b) {
  return std::max({std::abs(a.p_bp_0 - b.p_bp_0), std::abs(a.p_bm_0 - b.p_bm_0), std::abs(a.p_bp_1 - b.p_bp_1),
                   std::abs(a.p_bm_1 - b.p_bm_1)});
}

NoiseModel quiet_noise() {
  NoiseModel n;
  n.miscalibration = 0.0;
  n.t2_a = 1e12;
  n.t2_b = 1e12;
  return n;
}

} // namespace

TEST_CASE("marker_rotation") {
  CHECK((marker_rotation(MarkerPair{kPi / 4, kPi / 4}).matrix() - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff() <
        1e-15);

  // alpha = pi/4 - (pi/2 + 3pi/4)/2 = -3pi/8
  const Unitary2 r = marker_rotation(MarkerPair{kPi / 2, 3 * kPi / 4});
  CHECK(r.matrix()(0, 0).real() == Approx(std::cos(3 * kPi / 8)));
  CHECK(r.matrix()(1, 0).real() == Approx(-std::sin(3 * kPi / 8)));

  std::mt19937_64 rng(67);
  std::uniform_real_distribution<double> angle(-2 * kPi, 2 * kPi);
  for (int trial = 0; trial < 100; ++trial) {
    const MarkerPair m{angle(rng), angle(rng)};
    const Basis2 b = beta_basis(m);
    const Eigen::Vector2cd mapped_plus = marker_rotation(m).matrix() * b.plus();
    const Eigen::Vector2cd mapped_minus = marker_rotation(m).matrix() * b.minus();
    CHECK(std::abs(std::abs(mapped_plus(0)) - 1) < 1e-12);
    CHECK(std::abs(std::abs(mapped_minus(1)) - 1) < 1e-12);
  }
}

TEST_CASE("dephase") {
  std::mt19937_64 rng(71);
  for (int trial = 0; trial < 50; ++trial) {
    const DensityMatrix4 rho(oracle::random_density(rng));
    const DensityMatrix4 d = dephase(rho);
    CHECK((d.entries().diagonal() - rho.entries().diagonal()).cwiseAbs().maxCoeff() == 0.0);
    CHECK(std::abs(d.entries().trace() - Complex(1.0)) < 1e-12);
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) {
        if (i != j) CHECK(d(i, j) == Complex(0.0));
      }
    }
    CHECK((dephase(d).entries() - d.entries()).cwiseAbs().maxCoeff() == 0.0);
  }
  const DensityMatrix4 bell = density(psi1(MarkerPair{0.0, kPi / 2}));
  const DensityMatrix4 mixed = dephase(bell);
  CHECK(mixed(0, 0).real() == Approx(0.5));
  CHECK(mixed(3, 3).real() == Approx(0.5));
  CHECK(std::abs(mixed(0, 3)) == 0.0);
}

TEST_CASE("joint_probabilities") {
  SUBCASE("identical markers") {
    const JointProbs jp = joint_probabilities(MarkerPair{kPi / 2, kPi / 2}, std::nullopt);
    CHECK(max_diff(jp, {0.25, 0.25, 0.25, 0.25}) < 1e-12);
  }
  SUBCASE("orthogonal markers") {
    const JointProbs jp = joint_probabilities(MarkerPair{kPi / 2, kPi}, std::nullopt);
    CHECK(max_diff(jp, {0.5, 0.0, 0.0, 0.5}) < 1e-12);
  }
  SUBCASE("marker angle pi/4") {
    const JointProbs jp = joint_probabilities(MarkerPair::from_marker_angle(kPi / 2, kPi / 4), std::nullopt);
    CHECK(jp.p_bp_0 == Approx(0.426777).epsilon(1e-6));
    CHECK(jp.p_bm_0 == Approx(0.073223).epsilon(1e-5));
    CHECK(jp.p_bp_1 == Approx(0.073223).epsilon(1e-5));
    CHECK(jp.p_bm_1 == Approx(0.426777).epsilon(1e-6));
  }
  SUBCASE("closed forms on a 64-point grid") {
    for (int k = 0; k < 64; ++k) {
      const double phi = 2 * kPi * k / 64.0;
      const MarkerPair m = MarkerPair::from_marker_angle(kPi / 2, phi);
      const JointProbs jp = joint_probabilities(m, std::nullopt);
      const double c = std::cos(kPi / 4 - phi / 2);
      const double s = std::sin(kPi / 4 - phi / 2);
      CHECK(max_diff(jp, {c * c / 2, s * s / 2, s * s / 2, c * c / 2}) < 1e-12);
      CHECK(max_diff(jp, direct_joint_probabilities(m)) < 1e-12);
    }
  }
  SUBCASE("noisy and sampled probabilities are normalized") {
    std::mt19937_64 rng(73);
    std::uniform_real_distribution<double> angle(0.0, 2 * kPi);
    for (int trial = 0; trial < 50; ++trial) {
      const MarkerPair m{angle(rng), angle(rng)};
      NoiseModel noise;
      noise.rng_seed = rng();
      for (const JointProbs& jp : {joint_probabilities(m, noise), joint_probabilities(m, noise, {1000, 5})}) {
        CHECK(std::abs(jp.p_bp_0 + jp.p_bm_0 + jp.p_bp_1 + jp.p_bm_1 - 1) < 1e-9);
        CHECK(jp.p_bp_0 >= 0.0);
      }
    }
  }
  SUBCASE("pulse-prepared states match the reference without errors") {
    std::mt19937_64 rng(79);
    std::uniform_real_distribution<double> angle(-kPi, kPi);
    for (int trial = 0; trial < 50; ++trial) {
      const MarkerPair m{angle(rng), angle(rng)};
      CHECK(max_diff(joint_probabilities(m, quiet_noise()), direct_joint_probabilities(m)) < 1e-10);
      const DensityMatrix4 prepared = prepare_marked_state(m, quiet_noise());
      const DensityMatrix4 reference = prepare_marked_state(m, std::nullopt);
      CHECK((prepared.entries() - reference.entries()).cwiseAbs().maxCoeff() < 1e-10);
    }
  }
}

TEST_CASE("t2_dephasing_weight") {
  CHECK(t2_dephasing_weight(0.0, 0.35) == 1.0);
  CHECK(t2_dephasing_weight(0.35, 0.35) == Approx(std::exp(-1.0)));
  // A pi/2 coupling evolution: t = 1 / (2 J).
  const double t = coupling_duration(kPi / 2, kCouplingHz);
  CHECK(t == Approx(1.0 / (2 * kCouplingHz)));
  CHECK(t2_dephasing_weight(t, kCarbonT2) == Approx(0.99338).epsilon(1e-5));
  CHECK_THROWS_AS(t2_dephasing_weight(-1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(t2_dephasing_weight(1.0, 0.0), std::invalid_argument);
}

TEST_CASE("simulate_fringe") {
  CHECK_THROWS_AS(simulate_fringe(MarkerPair{0, 0}, std::vector<double>{}, std::nullopt), std::invalid_argument);

  const auto grid = uniform_phase_grid(16);
  CHECK(grid.size() == 16);
  CHECK(grid[4] == Approx(kPi / 2));

  const auto full = simulate_fringe(MarkerPair{0.3, 0.3}, grid, std::nullopt);
  CHECK(full[0].population == Approx(1.0));
  CHECK(full[8].population < 1e-12);
  const auto flat = simulate_fringe(MarkerPair{0.3, 0.3 + kPi / 2}, grid, std::nullopt);
  for (const FringeSample& s : flat) CHECK(s.population == Approx(0.5));

  SUBCASE("error-free pulses reproduce the reference fringe") {
    const MarkerPair m = MarkerPair::from_marker_angle(0.4, 1.1);
    const auto reference = simulate_fringe(m, grid, std::nullopt);
    const auto pulsed = simulate_fringe(m, grid, quiet_noise());
    for (std::size_t k = 0; k < grid.size(); ++k) {
      CHECK(std::abs(reference[k].population - pulsed[k].population) < 1e-10);
    }
  }

  SUBCASE("5% miscalibration keeps the visibility within 0.1") {
    NoiseModel noise;
    noise.rng_seed = 42;
    const auto grid32 = uniform_phase_grid(32);
    for (int k = 0; k <= 8; ++k) {
      const MarkerPair m = MarkerPair::from_marker_angle(kPi / 2, k * kPi / 8);
      const double v = visibility_from_fringe(simulate_fringe(m, grid32, noise));
      CHECK(std::abs(v - visibility_analytic(m)) <= 0.1);
    }
  }
}

TEST_CASE("seeded runs are reproducible") {
  const MarkerPair m = MarkerPair::from_marker_angle(kPi / 2, 0.9);
  NoiseModel noise;
  noise.rng_seed = 1234;
  const auto grid = uniform_phase_grid(32);
  const auto a = simulate_fringe(m, grid, noise, {500, 9});
  const auto b = simulate_fringe(m, grid, noise, {500, 9});
  for (std::size_t k = 0; k < grid.size(); ++k) {
    CHECK(a[k].population == b[k].population);
  }
  const JointProbs ja = joint_probabilities(m, noise);
  const JointProbs jb = joint_probabilities(m, noise);
  CHECK(ja.p_bp_0 == jb.p_bp_0);
  CHECK(ja.p_bm_1 == jb.p_bm_1);

  noise.rng_seed = 1235;
  CHECK(joint_probabilities(m, noise).p_bp_0 != ja.p_bp_0);

  CHECK(derive_seed(42, 0) == derive_seed(42, 0));
  CHECK(derive_seed(42, 0) != derive_seed(42, 1));
  CHECK(derive_seed(42, 0) != derive_seed(43, 0));
}

TEST_CASE("invalid noise is rejected") {
  NoiseModel noise;
  noise.miscalibration = 0.25;
  CHECK_THROWS_AS(noise.validate(), std::invalid_argument);
  CHECK_THROWS_AS(joint_probabilities(MarkerPair{0, 1}, noise), std::invalid_argument);
  noise = NoiseModel{};
  noise.t2_b = 0.0;
  CHECK_THROWS_AS(noise.validate(), std::invalid_argument);
  noise = NoiseModel{};
  noise.j_coupling = -1.0;
  CHECK_THROWS_AS(noise.validate(), std::invalid_argument);
  CHECK_NOTHROW(NoiseModel{}.validate());
}

TEST_CASE("shot sampling") {
  const DensityMatrix4 rho = dephase(density(psi1(MarkerPair{0.0, kPi / 2})));
  const MeasurementRecord exact = read_diagonal(rho);
  CHECK(exact[0] == Approx(0.5));
  CHECK(exact[3] == Approx(0.5));

  const MeasurementRecord sampled = read_diagonal(rho, {20000, 3});
  CHECK(sampled[1] == 0.0);
  CHECK(sampled[2] == 0.0);
  CHECK(std::abs(sampled[0] - 0.5) < 0.02);
  CHECK(sampled[0] + sampled[3] == Approx(1.0));
  // Counts are integers out of the shot total.
  CHECK(std::abs(sampled[0] * 20000 - std::round(sampled[0] * 20000)) < 1e-6);

  CHECK_THROWS_AS(read_diagonal(rho, {0, 3}), std::invalid_argument);
  CHECK_THROWS_AS(MeasurementRecord({0.5, 0.6, 0.0, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(MeasurementRecord({1.1, -0.1, 0.0, 0.0}), std::invalid_argument);
}
