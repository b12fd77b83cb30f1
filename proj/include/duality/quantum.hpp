#pragma once

// Exact linear algebra for one- and two-qubit objects.
//
// The joint space is ordered B (x) A: the first label of |ba> is spin B, the
// second spin A, so the computational index of |b>|a> is 2*b + a.

#include <complex>
#include <cstddef>

#include <Eigen/Dense>

namespace duality {

using Complex = std::complex<double>;

enum class Subsystem { A, B };

constexpr int basis_index(int b, int a) { return 2 * b + a; }

inline constexpr double kNormTolerance = 1e-12;
inline constexpr double kHermitianTolerance = 1e-12;
inline constexpr double kTraceTolerance = 1e-12;
inline constexpr double kUnitaryTolerance = 1e-10;
inline constexpr double kPsdTolerance = 1e-10;
inline constexpr double kEntropyClamp = 1e-12;

template <int N>
using SquareMatrix = Eigen::Matrix<Complex, N, N>;

/// Normalized two-qubit pure state.
class StateVector {
public:
  using Amplitudes = Eigen::Matrix<Complex, 4, 1>;

  /// Throws std::invalid_argument unless the amplitudes are finite and
  /// normalized within kNormTolerance.
  explicit StateVector(const Amplitudes& amplitudes);

  static StateVector basis(int b, int a);

  const Amplitudes& amplitudes() const { return amplitudes_; }
  Complex operator[](std::size_t i) const { return amplitudes_(static_cast<Eigen::Index>(i)); }

private:
  Amplitudes amplitudes_;
};

/// Hermitian, unit-trace, positive semidefinite matrix on N = 2 or 4 levels.
template <int N>
class DensityMatrix {
public:
  explicit DensityMatrix(const SquareMatrix<N>& entries);

  static DensityMatrix pure(const Eigen::Matrix<Complex, N, 1>& psi);

  const SquareMatrix<N>& entries() const { return entries_; }
  Complex operator()(int row, int col) const { return entries_(row, col); }
  Eigen::Matrix<double, N, 1> eigenvalues() const;

private:
  SquareMatrix<N> entries_;
};

using DensityMatrix2 = DensityMatrix<2>;
using DensityMatrix4 = DensityMatrix<4>;

DensityMatrix4 density(const StateVector& psi);

template <int N>
class Unitary {
public:
  /// Throws std::invalid_argument unless max |U^dagger U - I| < kUnitaryTolerance.
  explicit Unitary(const SquareMatrix<N>& entries);

  static Unitary identity() { return Unitary(SquareMatrix<N>::Identity()); }

  const SquareMatrix<N>& matrix() const { return entries_; }
  Complex operator()(int row, int col) const { return entries_(row, col); }
  Unitary adjoint() const { return Unitary(entries_.adjoint()); }

  friend Unitary operator*(const Unitary& lhs, const Unitary& rhs) {
    return Unitary(lhs.entries_ * rhs.entries_);
  }

private:
  SquareMatrix<N> entries_;
};

using Unitary2 = Unitary<2>;
using Unitary4 = Unitary<4>;

/// Measurement basis on a single real great circle:
/// |beta+> = cos t |0> + sin t |1>, |beta-> = sin t |0> - cos t |1>.
struct Basis2 {
  double angle = 0.0;

  Eigen::Vector2cd plus() const;
  Eigen::Vector2cd minus() const;
};

/// b_op acts on spin B, a_op on spin A.
Unitary4 tensor(const Unitary2& b_op, const Unitary2& a_op);

StateVector apply(const Unitary4& u, const StateVector& s);

DensityMatrix4 evolve(const Unitary4& u, const DensityMatrix4& rho);

DensityMatrix2 partial_trace(const DensityMatrix4& rho, Subsystem keep);

/// Entropy in bits. Eigenvalues below kEntropyClamp count as zero.
double von_neumann_entropy(const DensityMatrix2& rho);

/// |<a|b>|, insensitive to global phase.
double phase_aligned_fidelity(const StateVector& a, const StateVector& b);

namespace pauli {
Unitary2 identity();
Unitary2 x();
Unitary2 y();
Unitary2 z();
Unitary2 hadamard();
} // namespace pauli

} // namespace duality
