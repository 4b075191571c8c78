#ifndef QAMPLIFY_CIRCUIT_HPP
#define QAMPLIFY_CIRCUIT_HPP

#include <vector>

#include "qamplify/statevector.hpp"

namespace qamplify::quantum {

// Trainable angles of the strongly-entangling ansatz: layers x n_qubits x 3.
struct SELWeights {
  int layers = 0;
  int n_qubits = 0;
  std::vector<double> angles;  // [l][q][k] row-major

  static SELWeights zeros(int layers, int n_qubits);

  double &at(int l, int q, int k) {
    return angles[static_cast<std::size_t>((l * n_qubits + q) * 3 + k)];
  }
  double at(int l, int q, int k) const {
    return angles[static_cast<std::size_t>((l * n_qubits + q) * 3 + k)];
  }

  std::size_t parameter_count() const {
    return static_cast<std::size_t>(3 * n_qubits * layers);
  }
  void validate() const;
};

// Per layer: Rot on every qubit, then a CNOT ring with the last qubit a
// neighbor of the first (skipped for a 1-qubit register).
StateVector sel_circuit(const StateVector &state, const SELWeights &weights);

// amplitude_embed -> sel_circuit -> per-qubit <sigma_z>.
std::vector<double> quantum_layer_forward(const std::vector<double> &inputs,
                                          const SELWeights &weights);

// d<sigma_z on `qubit`>/d(angle) via the parameter-shift rule,
// shaped like weights.angles.
std::vector<double> param_shift_grad(const std::vector<double> &inputs,
                                     const SELWeights &weights, int qubit);

// Shift once, read every qubit: grads[q][k] = d<sigma_z^q>/d(angle k).
std::vector<std::vector<double>> param_shift_grad_all(
    const std::vector<double> &inputs, const SELWeights &weights);

}  // namespace qamplify::quantum

#endif
