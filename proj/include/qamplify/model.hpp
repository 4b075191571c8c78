#ifndef QAMPLIFY_MODEL_HPP
#define QAMPLIFY_MODEL_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "qamplify/circuit.hpp"
#include "qamplify/linalg.hpp"

namespace qamplify::nn {

enum class LayerKind { Dense, Relu, Quantum, Softmax };

struct LayerSpec {
  LayerKind kind = LayerKind::Dense;
  int in_dim = 0;
  int out_dim = 0;
  bool trainable = false;
};

struct DenseWeights {
  linalg::Matrix w;       // out_dim x in_dim
  std::vector<double> b;  // out_dim
};

// The fixed stack: 4 -> Dense 512 (frozen) -> ReLU -> Dense 256 (frozen)
// -> ReLU -> Dense 4 (frozen) -> ReLU -> Quantum(2 qubits, 1 layer)
// -> Dense 2 (trainable) -> Softmax. Class 0 = not backorder, 1 = backorder.
struct HybridModel {
  std::vector<LayerSpec> layers;
  std::map<int, DenseWeights> dense_weights;  // keyed by layer index
  quantum::SELWeights quantum_weights;
  std::uint64_t rng_seed = 0;
  std::string preprocessing_artifact_ref;

  // Builds the stack above with Glorot-uniform dense weights, zero biases and
  // U(0, 2pi) quantum angles, all drawn from `seed`.
  static HybridModel make(std::uint64_t seed);

  void validate() const;
  std::vector<int> trainable_dense_layers() const;
};

// Shift-invariant softmax; output sums to 1.
std::vector<double> softmax(const std::vector<double> &logits);

struct ForwardTrace {
  std::vector<double> quantum_input;  // 4-vector reaching the quantum layer
  std::vector<double> expectations;   // per-qubit <sigma_z>
  std::vector<double> logits;
  std::vector<double> probabilities;
  bool zero_substituted = false;  // all-zero quantum input replaced by |0..0>
};

ForwardTrace forward_trace(const HybridModel &model,
                           const std::vector<double> &features);

std::vector<double> forward(const HybridModel &model,
                            const std::vector<double> &features);

}  // namespace qamplify::nn

#endif
