#include "qamplify/statevector.hpp"

#include <cmath>
#include <string>

#include "qamplify/common.hpp"

namespace qamplify::quantum {

namespace {

void check_qubit(int qubit, int n_qubits) {
  if (qubit < 0 || qubit >= n_qubits) {
    throw SchemaError("qubit index " + std::to_string(qubit) +
                      " out of range for " + std::to_string(n_qubits) +
                      "-qubit register");
  }
}

void check_angles(const Gate &gate) {
  for (int i = 0; i < gate.n_angles(); ++i) {
    if (!std::isfinite(gate.angles[static_cast<std::size_t>(i)])) {
      throw NumericError("gate angle is not finite");
    }
  }
}

// bit position of qubit q in the basis index (qubit 0 = MSB)
std::size_t qubit_mask(int qubit, int n_qubits) {
  return std::size_t{1} << (n_qubits - 1 - qubit);
}

}  // namespace

StateVector StateVector::zero_state(int n_qubits) {
  if (n_qubits < 1) throw SchemaError("n_qubits must be positive");
  StateVector s;
  s.n_qubits = n_qubits;
  s.amplitudes.assign(std::size_t{1} << n_qubits, Complex{0.0, 0.0});
  s.amplitudes[0] = Complex{1.0, 0.0};
  return s;
}

StateVector StateVector::from_amplitudes(int n_qubits, std::vector<Complex> amps) {
  if (n_qubits < 1) throw SchemaError("n_qubits must be positive");
  if (amps.size() != (std::size_t{1} << n_qubits)) {
    throw SchemaError("amplitude count must be 2^n_qubits");
  }
  StateVector s;
  s.n_qubits = n_qubits;
  s.amplitudes = std::move(amps);
  return s;
}

double StateVector::norm_squared() const {
  double acc = 0.0;
  for (const Complex &a : amplitudes) acc += std::norm(a);
  return acc;
}

int Gate::n_angles() const {
  switch (kind) {
    case GateKind::RY:
    case GateKind::RZ:
      return 1;
    case GateKind::ROT:
      return 3;
    default:
      return 0;
  }
}

int Gate::n_qubits_used() const {
  return (kind == GateKind::CNOT || kind == GateKind::CZ) ? 2 : 1;
}

Gate Gate::ry(double angle, int qubit) {
  return Gate{GateKind::RY, {angle, 0.0, 0.0}, {qubit, 0}};
}

Gate Gate::rz(double angle, int qubit) {
  return Gate{GateKind::RZ, {angle, 0.0, 0.0}, {qubit, 0}};
}

Gate Gate::rot(double a, double b, double c, int qubit) {
  return Gate{GateKind::ROT, {a, b, c}, {qubit, 0}};
}

Gate Gate::cnot(int control, int target) {
  return Gate{GateKind::CNOT, {}, {control, target}};
}

Gate Gate::cz(int a, int b) {
  return Gate{GateKind::CZ, {}, {a, b}};
}

std::array<Complex, 4> single_qubit_matrix(const Gate &gate) {
  check_angles(gate);
  switch (gate.kind) {
    case GateKind::RY: {
      const double h = gate.angles[0] / 2.0;
      return {Complex{std::cos(h), 0.0}, Complex{-std::sin(h), 0.0},
              Complex{std::sin(h), 0.0}, Complex{std::cos(h), 0.0}};
    }
    case GateKind::RZ: {
      const double h = gate.angles[0] / 2.0;
      return {std::polar(1.0, -h), Complex{0.0, 0.0},
              Complex{0.0, 0.0}, std::polar(1.0, h)};
    }
    case GateKind::ROT: {
      const auto za = single_qubit_matrix(Gate::rz(gate.angles[0], 0));
      const auto yb = single_qubit_matrix(Gate::ry(gate.angles[1], 0));
      const auto zc = single_qubit_matrix(Gate::rz(gate.angles[2], 0));
      auto mul = [](const std::array<Complex, 4> &l, const std::array<Complex, 4> &r) {
        return std::array<Complex, 4>{
            l[0] * r[0] + l[1] * r[2], l[0] * r[1] + l[1] * r[3],
            l[2] * r[0] + l[3] * r[2], l[2] * r[1] + l[3] * r[3]};
      };
      return mul(zc, mul(yb, za));
    }
    default:
      throw SchemaError("not a single-qubit gate");
  }
}

StateVector apply_gate(const StateVector &state, const Gate &gate) {
  const int n = state.n_qubits;
  check_angles(gate);

  StateVector out = state;
  if (gate.n_qubits_used() == 1) {
    const int q = gate.qubits[0];
    check_qubit(q, n);
    const auto m = single_qubit_matrix(gate);
    const std::size_t mask = qubit_mask(q, n);
    for (std::size_t i = 0; i < state.dim(); ++i) {
      if (i & mask) continue;
      const Complex a0 = state.amplitudes[i];
      const Complex a1 = state.amplitudes[i | mask];
      out.amplitudes[i] = m[0] * a0 + m[1] * a1;
      out.amplitudes[i | mask] = m[2] * a0 + m[3] * a1;
    }
    return out;
  }

  const int qa = gate.qubits[0], qb = gate.qubits[1];
  check_qubit(qa, n);
  check_qubit(qb, n);
  if (qa == qb) throw SchemaError("two-qubit gate needs distinct qubits");
  const std::size_t mask_a = qubit_mask(qa, n);
  const std::size_t mask_b = qubit_mask(qb, n);

  if (gate.kind == GateKind::CNOT) {
    // control = qa, target = qb
    for (std::size_t i = 0; i < state.dim(); ++i) {
      out.amplitudes[i] = (i & mask_a) ? state.amplitudes[i ^ mask_b]
                                       : state.amplitudes[i];
    }
  } else {  // CZ
    for (std::size_t i = 0; i < state.dim(); ++i) {
      out.amplitudes[i] = ((i & mask_a) && (i & mask_b)) ? -state.amplitudes[i]
                                                         : state.amplitudes[i];
    }
  }
  return out;
}

double expectation_z(const StateVector &state, int qubit) {
  check_qubit(qubit, state.n_qubits);
  const std::size_t mask = qubit_mask(qubit, state.n_qubits);
  double acc = 0.0;
  for (std::size_t i = 0; i < state.dim(); ++i) {
    const double p = std::norm(state.amplitudes[i]);
    acc += (i & mask) ? -p : p;
  }
  return acc;
}

StateVector amplitude_embed(const std::vector<double> &features, int n_qubits) {
  if (n_qubits < 1) throw SchemaError("n_qubits must be positive");
  const std::size_t dim = std::size_t{1} << n_qubits;
  if (features.size() > dim) {
    throw SchemaError("too many features for register: " +
                      std::to_string(features.size()) + " > " +
                      std::to_string(dim));
  }
  double norm_sq = 0.0;
  for (double v : features) {
    if (!std::isfinite(v)) throw NumericError("feature is not finite");
    norm_sq += v * v;
  }
  if (norm_sq == 0.0) throw DataError("cannot embed an all-zero vector");
  const double norm = std::sqrt(norm_sq);

  StateVector s;
  s.n_qubits = n_qubits;
  s.amplitudes.assign(dim, Complex{0.0, 0.0});
  for (std::size_t i = 0; i < features.size(); ++i) {
    s.amplitudes[i] = Complex{features[i] / norm, 0.0};
  }
  return s;
}

PredictionProbabilities class_probabilities(double expectation) {
  if (!std::isfinite(expectation) || std::abs(expectation) > 1.0 + 1e-9) {
    throw NumericError("expectation outside [-1, 1]");
  }
  const double clamped = std::min(1.0, std::max(-1.0, expectation));
  PredictionProbabilities p;
  p.p_not_backorder = (clamped + 1.0) / 2.0;
  p.p_backorder = 1.0 - p.p_not_backorder;
  return p;
}

}  // namespace qamplify::quantum
