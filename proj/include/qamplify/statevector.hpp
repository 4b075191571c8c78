#ifndef QAMPLIFY_STATEVECTOR_HPP
#define QAMPLIFY_STATEVECTOR_HPP

#include <array>
#include <complex>
#include <vector>

namespace qamplify::quantum {

using Complex = std::complex<double>;

// Full complex amplitude vector of an n-qubit register.
// Convention: qubit 0 is the MOST significant bit of the basis index, so for
// n = 2 the basis order is |00>, |01>, |10>, |11> with index = 2*q0 + q1.
struct StateVector {
  int n_qubits = 0;
  std::vector<Complex> amplitudes;

  static StateVector zero_state(int n_qubits);
  static StateVector from_amplitudes(int n_qubits, std::vector<Complex> amps);

  std::size_t dim() const { return amplitudes.size(); }
  double norm_squared() const;
};

enum class GateKind { RY, RZ, CNOT, CZ, ROT };

struct Gate {
  GateKind kind = GateKind::RY;
  std::array<double, 3> angles{};  // leading n_angles() entries are used
  std::array<int, 2> qubits{};     // leading n_qubits_used() entries are used

  int n_angles() const;
  int n_qubits_used() const;

  static Gate ry(double angle, int qubit);
  static Gate rz(double angle, int qubit);
  // Rot(a, b, c) = RZ(c) * RY(b) * RZ(a); RZ(a) hits the state first.
  static Gate rot(double a, double b, double c, int qubit);
  static Gate cnot(int control, int target);
  static Gate cz(int a, int b);
};

// 2x2 matrix of a single-qubit gate, row-major {m00, m01, m10, m11}.
std::array<Complex, 4> single_qubit_matrix(const Gate &gate);

StateVector apply_gate(const StateVector &state, const Gate &gate);

// <sigma_z> on one qubit: sum of +-|amp|^2, +1 where the qubit's bit is 0.
double expectation_z(const StateVector &state, int qubit);

// Loads a classical vector into amplitudes: zero-pad to 2^n, then divide by
// the Euclidean norm. Rejects all-zero input and oversized input.
StateVector amplitude_embed(const std::vector<double> &features, int n_qubits);

struct PredictionProbabilities {
  double p_not_backorder = 0.0;
  double p_backorder = 0.0;
};

// Maps <sigma_z> in [-1, 1] to the two class probabilities.
PredictionProbabilities class_probabilities(double expectation);

}  // namespace qamplify::quantum

#endif
