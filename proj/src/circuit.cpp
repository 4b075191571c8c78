#include "qamplify/circuit.hpp"

#include <cmath>
#include <string>

#include "qamplify/common.hpp"

namespace qamplify::quantum {

SELWeights SELWeights::zeros(int layers, int n_qubits) {
  if (layers < 1 || n_qubits < 1) {
    throw SchemaError("SELWeights: layers and n_qubits must be positive");
  }
  SELWeights w;
  w.layers = layers;
  w.n_qubits = n_qubits;
  w.angles.assign(static_cast<std::size_t>(3 * n_qubits * layers), 0.0);
  return w;
}

void SELWeights::validate() const {
  if (layers < 1 || n_qubits < 1) {
    throw SchemaError("SELWeights: layers and n_qubits must be positive");
  }
  if (angles.size() != parameter_count()) {
    throw SchemaError("SELWeights: expected " +
                      std::to_string(parameter_count()) + " angles, have " +
                      std::to_string(angles.size()));
  }
  for (double a : angles) {
    if (!std::isfinite(a)) throw NumericError("SELWeights: angle not finite");
  }
}

StateVector sel_circuit(const StateVector &state, const SELWeights &weights) {
  weights.validate();
  if (weights.n_qubits != state.n_qubits) {
    throw SchemaError("SELWeights qubit count does not match state");
  }
  const int n = state.n_qubits;
  StateVector s = state;
  for (int l = 0; l < weights.layers; ++l) {
    for (int q = 0; q < n; ++q) {
      s = apply_gate(s, Gate::rot(weights.at(l, q, 0), weights.at(l, q, 1),
                                  weights.at(l, q, 2), q));
    }
    if (n >= 2) {
      for (int q = 0; q < n; ++q) {
        s = apply_gate(s, Gate::cnot(q, (q + 1) % n));
      }
    }
  }
  return s;
}

std::vector<double> quantum_layer_forward(const std::vector<double> &inputs,
                                          const SELWeights &weights) {
  const StateVector embedded = amplitude_embed(inputs, weights.n_qubits);
  const StateVector evolved = sel_circuit(embedded, weights);
  std::vector<double> out(static_cast<std::size_t>(weights.n_qubits));
  for (int q = 0; q < weights.n_qubits; ++q) {
    out[static_cast<std::size_t>(q)] = expectation_z(evolved, q);
  }
  return out;
}

std::vector<double> param_shift_grad(const std::vector<double> &inputs,
                                     const SELWeights &weights, int qubit) {
  if (qubit < 0 || qubit >= weights.n_qubits) {
    throw SchemaError("param_shift_grad: invalid qubit");
  }
  const auto all = param_shift_grad_all(inputs, weights);
  std::vector<double> out(weights.angles.size());
  for (std::size_t k = 0; k < out.size(); ++k) {
    out[k] = all[static_cast<std::size_t>(qubit)][k];
  }
  return out;
}

std::vector<std::vector<double>> param_shift_grad_all(
    const std::vector<double> &inputs, const SELWeights &weights) {
  weights.validate();
  const std::size_t n_params = weights.angles.size();
  const std::size_t n = static_cast<std::size_t>(weights.n_qubits);
  const double shift = M_PI / 2.0;

  std::vector<std::vector<double>> grads(n, std::vector<double>(n_params, 0.0));
  SELWeights shifted = weights;
  for (std::size_t k = 0; k < n_params; ++k) {
    shifted.angles[k] = weights.angles[k] + shift;
    const auto plus = quantum_layer_forward(inputs, shifted);
    shifted.angles[k] = weights.angles[k] - shift;
    const auto minus = quantum_layer_forward(inputs, shifted);
    shifted.angles[k] = weights.angles[k];
    for (std::size_t q = 0; q < n; ++q) {
      grads[q][k] = (plus[q] - minus[q]) / 2.0;
    }
  }
  return grads;
}

}  // namespace qamplify::quantum
