#pragma once

// Ideal two-way interferometer with a marker spin: the analytic reference path.
//
// Two distinct angles appear here. The marker angle phi = phi_minus - phi_plus
// is the Hilbert-space angle between the marker states; the interferometer
// phase (PhaseSetting) is the relative phase added before the beams merge.

#include "duality/quantum.hpp"

namespace duality {

/// Real marker states |m+-> = cos(phi+-)|0> + sin(phi+-)|1> on spin A.
struct MarkerPair {
  double phi_plus = 0.0;
  double phi_minus = 0.0;

  static MarkerPair from_marker_angle(double phi_plus, double marker_angle) {
    return {phi_plus, phi_plus + marker_angle};
  }

  double marker_angle() const { return phi_minus - phi_plus; }
  Eigen::Vector2cd plus_state() const;
  Eigen::Vector2cd minus_state() const;
  /// <m+|m-> = cos(marker_angle), real.
  double overlap() const;
};

struct PhaseSetting {
  double phase = 0.0;
};

enum class Path { Zero = 0, One = 1 };

/// (|0>_B |m+>_A + |1>_B |m->_A) / sqrt 2.
StateVector psi1(const MarkerPair& markers);

/// Phase shift and beam merge on B: (1/sqrt 2) [[1, e^{i p}], [-e^{-i p}, 1]].
Unitary2 u2(const PhaseSetting& phase);

/// (u2 (x) 1_A) psi1.
StateVector psi2(const MarkerPair& markers, const PhaseSetting& phase);

/// Population of path |0>_B or |1>_B in psi2: (1 +- cos(phi) cos(p)) / 2.
double population(const MarkerPair& markers, const PhaseSetting& phase, Path path);

} // namespace duality
