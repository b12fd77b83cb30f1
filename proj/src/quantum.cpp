#include "duality/quantum.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace duality {

namespace {

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      const Complex z = m(i, j);
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
        return false;
      }
    }
  }
  return true;
}

} // namespace

StateVector::StateVector(const Amplitudes& amplitudes) : amplitudes_(amplitudes) {
  if (!all_finite(amplitudes_)) {
    throw std::invalid_argument("state vector has non-finite amplitudes");
  }
  const double norm2 = amplitudes_.squaredNorm();
  if (std::abs(norm2 - 1.0) > kNormTolerance) {
    throw std::invalid_argument("state vector not normalized: |psi|^2 = " + std::to_string(norm2));
  }
}

StateVector StateVector::basis(int b, int a) {
  Amplitudes amps = Amplitudes::Zero();
  amps(basis_index(b, a)) = 1.0;
  return StateVector(amps);
}

template <int N>
DensityMatrix<N>::DensityMatrix(const SquareMatrix<N>& entries) : entries_(entries) {
  if (!all_finite(entries_)) {
    throw std::invalid_argument("density matrix has non-finite entries");
  }
  const double hermitian_error = (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff();
  if (hermitian_error > kHermitianTolerance) {
    throw std::invalid_argument("density matrix not Hermitian");
  }
  if (std::abs(entries_.trace() - Complex(1.0)) > kTraceTolerance) {
    throw std::invalid_argument("density matrix trace differs from 1");
  }
  if (eigenvalues().minCoeff() < -kPsdTolerance) {
    throw std::invalid_argument("density matrix has a negative eigenvalue");
  }
}

template <int N>
DensityMatrix<N> DensityMatrix<N>::pure(const Eigen::Matrix<Complex, N, 1>& psi) {
  return DensityMatrix(psi * psi.adjoint());
}

template <int N>
Eigen::Matrix<double, N, 1> DensityMatrix<N>::eigenvalues() const {
  // Symmetrize so roundoff in the lower triangle cannot leak into the solver.
  const SquareMatrix<N> h = 0.5 * (entries_ + entries_.adjoint());
  Eigen::SelfAdjointEigenSolver<SquareMatrix<N>> solver(h, Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

template class DensityMatrix<2>;
template class DensityMatrix<4>;

DensityMatrix4 density(const StateVector& psi) { return DensityMatrix4::pure(psi.amplitudes()); }

template <int N>
Unitary<N>::Unitary(const SquareMatrix<N>& entries) : entries_(entries) {
  if (!all_finite(entries_)) {
    throw std::invalid_argument("unitary has non-finite entries");
  }
  const SquareMatrix<N> defect = entries_.adjoint() * entries_ - SquareMatrix<N>::Identity();
  if (defect.cwiseAbs().maxCoeff() >= kUnitaryTolerance) {
    throw std::invalid_argument("matrix is not unitary");
  }
}

template class Unitary<2>;
template class Unitary<4>;

Eigen::Vector2cd Basis2::plus() const { return {std::cos(angle), std::sin(angle)}; }

Eigen::Vector2cd Basis2::minus() const { return {std::sin(angle), -std::cos(angle)}; }

Unitary4 tensor(const Unitary2& b_op, const Unitary2& a_op) {
  SquareMatrix<4> m;
  for (int b_row = 0; b_row < 2; ++b_row) {
    for (int b_col = 0; b_col < 2; ++b_col) {
      m.block<2, 2>(2 * b_row, 2 * b_col) = b_op(b_row, b_col) * a_op.matrix();
    }
  }
  return Unitary4(m);
}

StateVector apply(const Unitary4& u, const StateVector& s) {
  return StateVector(u.matrix() * s.amplitudes());
}

DensityMatrix4 evolve(const Unitary4& u, const DensityMatrix4& rho) {
  return DensityMatrix4(u.matrix() * rho.entries() * u.matrix().adjoint());
}

DensityMatrix2 partial_trace(const DensityMatrix4& rho, Subsystem keep) {
  SquareMatrix<2> reduced = SquareMatrix<2>::Zero();
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      for (int k = 0; k < 2; ++k) {
        reduced(i, j) += keep == Subsystem::B ? rho(basis_index(i, k), basis_index(j, k))
                                              : rho(basis_index(k, i), basis_index(k, j));
      }
    }
  }
  return DensityMatrix2(reduced);
}

double von_neumann_entropy(const DensityMatrix2& rho) {
  double s = 0.0;
  for (double lambda : rho.eigenvalues()) {
    if (lambda > kEntropyClamp) {
      s -= lambda * std::log2(lambda);
    }
  }
  return s < 0.0 ? 0.0 : s;
}

double phase_aligned_fidelity(const StateVector& a, const StateVector& b) {
  const double overlap = std::abs(a.amplitudes().dot(b.amplitudes()));
  return overlap > 1.0 ? 1.0 : overlap;
}

namespace pauli {

Unitary2 identity() { return Unitary2::identity(); }

Unitary2 x() {
  SquareMatrix<2> m;
  m << 0, 1, 1, 0;
  return Unitary2(m);
}

Unitary2 y() {
  SquareMatrix<2> m;
  m << 0, Complex(0, -1), Complex(0, 1), 0;
  return Unitary2(m);
}

Unitary2 z() {
  SquareMatrix<2> m;
  m << 1, 0, 0, -1;
  return Unitary2(m);
}

Unitary2 hadamard() {
  SquareMatrix<2> m;
  m << 1, 1, 1, -1;
  return Unitary2(m / std::sqrt(2.0));
}

} // namespace pauli

} // namespace duality
