#pragma once

// Pulse-sequence programs for the two-spin system and their compilation to
// 4x4 unitaries.
//
// Program text:
//
//   program := pulse*
//   pulse   := AXIS TARGET '(' expr ')' | 'JAB' '(' expr ')'
//   AXIS    := 'X' | 'Y' | 'Z'     TARGET := 'A' | 'B'
//   expr    := numbers, 'pi', identifiers, + - * /, unary minus, parentheses
//
// Tokens are separated by whitespace and '#' comments run to end of line.

#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "duality/quantum.hpp"

namespace duality {

using Bindings = std::map<std::string, double, std::less<>>;

/// Parse failure with a 1-based source position.
class ParseError : public std::runtime_error {
public:
  ParseError(const std::string& message, std::size_t line, std::size_t column);

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

private:
  std::size_t line_;
  std::size_t column_;
};

/// Raised when a pulse angle cannot be resolved to a finite number.
class CompileError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Immutable angle expression. Subtrees without parameters are folded to a
/// single number when built.
class Expr {
public:
  enum class Op { Number, Param, Negate, Add, Subtract, Multiply, Divide };

  static Expr number(double value);
  static Expr param(std::string name);
  static Expr negate(Expr operand);
  static Expr binary(Op op, Expr lhs, Expr rhs);

  Op op() const;
  bool is_constant() const { return op() == Op::Number; }
  double value() const; // Number only

  /// Throws CompileError on an unbound name or non-finite result.
  double evaluate(const Bindings& bindings) const;

  std::set<std::string> parameters() const;

  /// Text that parses back to an identical expression.
  std::string render() const;

  friend bool operator==(const Expr& lhs, const Expr& rhs);

private:
  struct Node;
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  std::shared_ptr<const Node> node_;
};

enum class PulseKind { Rotation, Coupling };
enum class Axis { X, Y, Z };

struct Pulse {
  PulseKind kind = PulseKind::Rotation;
  Subsystem target = Subsystem::A; // rotation only
  Axis axis = Axis::X;             // rotation only
  Expr angle = Expr::number(0.0);

  static Pulse rotation(Axis axis, Subsystem target, Expr angle);
  static Pulse coupling(Expr phase);

  friend bool operator==(const Pulse& lhs, const Pulse& rhs);
};

struct PulseSequence {
  std::vector<Pulse> pulses;
  Bindings params;

  PulseSequence with(std::string_view name, double value) const;
  /// Names used by pulse angles but absent from params.
  std::set<std::string> unbound() const;

  friend bool operator==(const PulseSequence& lhs, const PulseSequence& rhs) {
    return lhs.pulses == rhs.pulses && lhs.params == rhs.params;
  }
};

/// How the list order maps onto time.
enum class PulseOrder {
  /// The program is an operator product as written: the last-listed pulse
  /// acts on the state first.
  AsWritten,
  /// The first-listed pulse acts first.
  Temporal,
};

/// Sign of each generator relative to the textbook exp(-i theta/2 sigma), plus
/// the list-to-time ordering.
///
/// The default is the assignment under which the beam-splitter/marker program
/// reproduces the marked state from |00> and the three-pulse merge program
/// reproduces the phase-shift/merge operator (see the equivalence tests).
struct FrameConvention {
  int sign_x = -1;
  int sign_y = +1;
  int sign_z = +1;
  int sign_j = -1;
  PulseOrder order = PulseOrder::AsWritten;

  static FrameConvention textbook() { return {+1, +1, +1, +1, PulseOrder::Temporal}; }

  /// Throws std::invalid_argument unless every sign is exactly +1 or -1.
  void validate() const;
};

/// A pulse with its angle evaluated.
struct ResolvedPulse {
  PulseKind kind = PulseKind::Rotation;
  Subsystem target = Subsystem::A;
  Axis axis = Axis::X;
  double angle = 0.0;
};

PulseSequence parse_program(std::string_view text);
Expr parse_expression(std::string_view text);

/// Convenience: parse and evaluate a closed expression such as "3*pi/4".
double evaluate_angle(std::string_view text, const Bindings& bindings = {});

std::string render(const PulseSequence& seq);

/// Pulses with evaluated angles, in the order they act on the state.
std::vector<ResolvedPulse> application_order(const PulseSequence& seq,
                                             const FrameConvention& frame = {});

/// Rotation: exp(-i s_axis (theta/2) sigma_axis) on the target spin.
/// Coupling: exp(-i s_j (phi/2) sigma_z (x) sigma_z).
Unitary4 pulse_unitary(const ResolvedPulse& pulse, const FrameConvention& frame = {});

Unitary4 compile(const PulseSequence& seq, const FrameConvention& frame = {});

/// |Tr(U^dagger V)| / N, equal to 1 exactly when U = e^{i a} V.
template <int N>
double equivalent_up_to_phase(const Unitary<N>& u, const Unitary<N>& v) {
  const double score = std::abs((u.matrix().adjoint() * v.matrix()).trace()) / N;
  return score > 1.0 ? 1.0 : score;
}

namespace programs {
/// Beam splitter and path markers; parameters phi_p, phi_m.
inline constexpr std::string_view kBeamSplitterMarkers =
    "YA(phi_p + phi_m) XA(pi/2) JAB(phi_m - phi_p) XA(-pi/2) XB(pi) YB(pi/2)";
/// Phase shift and beam merge; parameters theta1, theta2.
inline constexpr std::string_view kPhaseShiftMerge = "XB(-theta1) YB(theta2) XB(-theta1)";
/// Readout rotation into the beta basis; parameter alpha.
inline constexpr std::string_view kMarkerReadout = "YA(2*alpha)";

/// Binds theta1 = atan(-sin phase) and theta2 = 2 asin(-cos phase / sqrt 2).
PulseSequence phase_shift_merge(double phase);
PulseSequence beam_splitter_markers(double phi_plus, double phi_minus);
PulseSequence marker_readout(double alpha);
} // namespace programs

} // namespace duality
