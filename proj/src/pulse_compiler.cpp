#include "duality/pulse.hpp"

#include <algorithm>
#include <cmath>

namespace duality {

void FrameConvention::validate() const {
  for (int sign : {sign_x, sign_y, sign_z, sign_j}) {
    if (sign != 1 && sign != -1) {
      throw std::invalid_argument("frame convention signs must be +1 or -1");
    }
  }
}

std::vector<ResolvedPulse> application_order(const PulseSequence& seq, const FrameConvention& frame) {
  std::vector<ResolvedPulse> resolved;
  resolved.reserve(seq.pulses.size());
  for (const auto& pulse : seq.pulses) {
    resolved.push_back({pulse.kind, pulse.target, pulse.axis, pulse.angle.evaluate(seq.params)});
  }
  if (frame.order == PulseOrder::AsWritten) {
    std::reverse(resolved.begin(), resolved.end());
  }
  return resolved;
}

Unitary4 pulse_unitary(const ResolvedPulse& pulse, const FrameConvention& frame) {
  frame.validate();
  if (pulse.kind == PulseKind::Coupling) {
    // sigma_z (x) sigma_z is diagonal with entries (+1, -1, -1, +1).
    const double half = frame.sign_j * pulse.angle / 2.0;
    const Complex same = std::polar(1.0, -half);
    const Complex opposite = std::polar(1.0, half);
    return Unitary4(Eigen::Vector4cd(same, opposite, opposite, same).asDiagonal().toDenseMatrix());
  }

  int sign = 1;
  const Unitary2* generator = nullptr;
  static const Unitary2 sx = pauli::x();
  static const Unitary2 sy = pauli::y();
  static const Unitary2 sz = pauli::z();
  switch (pulse.axis) {
  case Axis::X: sign = frame.sign_x; generator = &sx; break;
  case Axis::Y: sign = frame.sign_y; generator = &sy; break;
  case Axis::Z: sign = frame.sign_z; generator = &sz; break;
  }
  // exp(-i a sigma) = cos a I - i sin a sigma for any Pauli sigma.
  const double half = sign * pulse.angle / 2.0;
  const Unitary2 rotation(std::cos(half) * SquareMatrix<2>::Identity() -
                          Complex(0.0, std::sin(half)) * generator->matrix());
  return pulse.target == Subsystem::B ? tensor(rotation, pauli::identity())
                                      : tensor(pauli::identity(), rotation);
}

Unitary4 compile(const PulseSequence& seq, const FrameConvention& frame) {
  frame.validate();
  SquareMatrix<4> total = SquareMatrix<4>::Identity();
  for (const auto& pulse : application_order(seq, frame)) {
    total = pulse_unitary(pulse, frame).matrix() * total;
  }
  return Unitary4(total);
}

namespace programs {

PulseSequence phase_shift_merge(double phase) {
  return parse_program(kPhaseShiftMerge)
      .with("theta1", std::atan(-std::sin(phase)))
      .with("theta2", 2.0 * std::asin(-std::cos(phase) / std::sqrt(2.0)));
}

PulseSequence beam_splitter_markers(double phi_plus, double phi_minus) {
  return parse_program(kBeamSplitterMarkers).with("phi_p", phi_plus).with("phi_m", phi_minus);
}

PulseSequence marker_readout(double alpha) { return parse_program(kMarkerReadout).with("alpha", alpha); }

} // namespace programs

} // namespace duality
