#include "qamplify/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "qamplify/common.hpp"
#include "qamplify/rng.hpp"

namespace qamplify::nn {

namespace {

DenseWeights glorot_dense(Rng &rng, int in_dim, int out_dim) {
  const double limit = std::sqrt(6.0 / (in_dim + out_dim));
  DenseWeights d;
  d.w = linalg::Matrix(static_cast<std::size_t>(out_dim),
                       static_cast<std::size_t>(in_dim));
  for (std::size_t r = 0; r < d.w.rows(); ++r) {
    for (std::size_t c = 0; c < d.w.cols(); ++c) {
      d.w(r, c) = rng.uniform(-limit, limit);
    }
  }
  d.b.assign(static_cast<std::size_t>(out_dim), 0.0);
  return d;
}

std::vector<double> relu(std::vector<double> v) {
  for (double &x : v) x = std::max(0.0, x);
  return v;
}

}  // namespace

HybridModel HybridModel::make(std::uint64_t seed) {
  HybridModel m;
  m.rng_seed = seed;
  m.layers = {
      {LayerKind::Dense, 4, 512, false},  {LayerKind::Relu, 512, 512, false},
      {LayerKind::Dense, 512, 256, false}, {LayerKind::Relu, 256, 256, false},
      {LayerKind::Dense, 256, 4, false},  {LayerKind::Relu, 4, 4, false},
      {LayerKind::Quantum, 4, 2, true},   {LayerKind::Dense, 2, 2, true},
      {LayerKind::Softmax, 2, 2, false},
  };
  Rng rng(seed);
  for (std::size_t i = 0; i < m.layers.size(); ++i) {
    const LayerSpec &spec = m.layers[i];
    if (spec.kind == LayerKind::Dense) {
      m.dense_weights[static_cast<int>(i)] =
          glorot_dense(rng, spec.in_dim, spec.out_dim);
    }
  }
  m.quantum_weights = quantum::SELWeights::zeros(1, 2);
  for (double &a : m.quantum_weights.angles) a = rng.uniform(0.0, 2.0 * M_PI);
  return m;
}

void HybridModel::validate() const {
  if (layers.empty()) throw SchemaError("model has no layers");
  for (std::size_t i = 1; i < layers.size(); ++i) {
    if (layers[i].in_dim != layers[i - 1].out_dim) {
      throw SchemaError("layer " + std::to_string(i) +
                        " in_dim does not match previous out_dim");
    }
  }
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const LayerSpec &spec = layers[i];
    if (spec.kind == LayerKind::Dense) {
      auto it = dense_weights.find(static_cast<int>(i));
      if (it == dense_weights.end()) {
        throw SchemaError("missing weights for dense layer " + std::to_string(i));
      }
      if (it->second.w.rows() != static_cast<std::size_t>(spec.out_dim) ||
          it->second.w.cols() != static_cast<std::size_t>(spec.in_dim) ||
          it->second.b.size() != static_cast<std::size_t>(spec.out_dim)) {
        throw SchemaError("dense layer " + std::to_string(i) + " shape mismatch");
      }
    }
    if (spec.kind == LayerKind::Quantum) {
      quantum_weights.validate();
      if (spec.in_dim != (1 << quantum_weights.n_qubits) ||
          spec.out_dim != quantum_weights.n_qubits) {
        throw SchemaError("quantum layer dims must be 2^n -> n");
      }
    }
  }
}

std::vector<int> HybridModel::trainable_dense_layers() const {
  std::vector<int> out;
  for (std::size_t i = 0; i < layers.size(); ++i) {
    if (layers[i].kind == LayerKind::Dense && layers[i].trainable) {
      out.push_back(static_cast<int>(i));
    }
  }
  return out;
}

std::vector<double> softmax(const std::vector<double> &logits) {
  if (logits.empty()) throw SchemaError("softmax: empty input");
  double mx = logits[0];
  for (double v : logits) {
    if (!std::isfinite(v)) throw NumericError("softmax: non-finite logit");
    mx = std::max(mx, v);
  }
  std::vector<double> out(logits.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    out[i] = std::exp(logits[i] - mx);
    sum += out[i];
  }
  for (double &v : out) v /= sum;
  return out;
}

ForwardTrace forward_trace(const HybridModel &model,
                           const std::vector<double> &features) {
  if (features.size() != static_cast<std::size_t>(model.layers.front().in_dim)) {
    throw SchemaError("forward: expected " +
                      std::to_string(model.layers.front().in_dim) +
                      " features, got " + std::to_string(features.size()));
  }
  ForwardTrace trace;
  std::vector<double> h = features;
  for (std::size_t i = 0; i < model.layers.size(); ++i) {
    const LayerSpec &spec = model.layers[i];
    switch (spec.kind) {
      case LayerKind::Dense: {
        const DenseWeights &d = model.dense_weights.at(static_cast<int>(i));
        std::vector<double> z = linalg::matvec(d.w, h);
        for (std::size_t r = 0; r < z.size(); ++r) z[r] += d.b[r];
        h = std::move(z);
        break;
      }
      case LayerKind::Relu:
        h = relu(std::move(h));
        break;
      case LayerKind::Quantum: {
        bool all_zero = true;
        for (double v : h) all_zero = all_zero && v == 0.0;
        if (all_zero) {
          // Degenerate post-ReLU sample: fall back to the first basis vector
          // instead of aborting on an undefined embedding.
          static thread_local bool warned = false;
          if (!warned) {
            std::fputs("warning: all-zero quantum-layer input, substituting "
                       "the first basis vector\n", stderr);
            warned = true;
          }
          h.assign(h.size(), 0.0);
          h[0] = 1.0;
          trace.zero_substituted = true;
        }
        trace.quantum_input = h;
        h = quantum::quantum_layer_forward(h, model.quantum_weights);
        trace.expectations = h;
        break;
      }
      case LayerKind::Softmax:
        trace.logits = h;
        h = softmax(h);
        break;
    }
  }
  trace.probabilities = h;
  return trace;
}

std::vector<double> forward(const HybridModel &model,
                            const std::vector<double> &features) {
  return forward_trace(model, features).probabilities;
}

}  // namespace qamplify::nn
