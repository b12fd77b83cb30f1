#include "duality/interferometer.hpp"

#include <cmath>

namespace duality {

Eigen::Vector2cd MarkerPair::plus_state() const { return {std::cos(phi_plus), std::sin(phi_plus)}; }

Eigen::Vector2cd MarkerPair::minus_state() const { return {std::cos(phi_minus), std::sin(phi_minus)}; }

double MarkerPair::overlap() const { return plus_state().dot(minus_state()).real(); }

StateVector psi1(const MarkerPair& markers) {
  const double r = 1.0 / std::sqrt(2.0);
  const Eigen::Vector2cd plus = markers.plus_state();
  const Eigen::Vector2cd minus = markers.minus_state();
  StateVector::Amplitudes amps;
  amps << r * plus(0), r * plus(1), r * minus(0), r * minus(1);
  return StateVector(amps);
}

Unitary2 u2(const PhaseSetting& phase) {
  const Complex shift = std::polar(1.0, phase.phase);
  SquareMatrix<2> m;
  m << 1.0, shift, -std::conj(shift), 1.0;
  return Unitary2(m / std::sqrt(2.0));
}

StateVector psi2(const MarkerPair& markers, const PhaseSetting& phase) {
  return apply(tensor(u2(phase), pauli::identity()), psi1(markers));
}

double population(const MarkerPair& markers, const PhaseSetting& phase, Path path) {
  const StateVector out = psi2(markers, phase);
  const int b = static_cast<int>(path);
  return std::norm(out[basis_index(b, 0)]) + std::norm(out[basis_index(b, 1)]);
}

} // namespace duality
