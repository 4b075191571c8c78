#include <cmath>

#include <doctest.h>

#include "oracles.hpp"
#include "qamplify/circuit.hpp"
#include "qamplify/common.hpp"
#include "qamplify/rng.hpp"
#include "qamplify/statevector.hpp"

using namespace qamplify;
using quantum::Gate;
using quantum::SELWeights;
using quantum::StateVector;

namespace {

StateVector basis(int n, std::size_t index) {
  StateVector s = StateVector::zero_state(n);
  s.amplitudes[0] = {0.0, 0.0};
  s.amplitudes[index] = {1.0, 0.0};
  return s;
}

SELWeights random_weights(int layers, int n, Rng &rng) {
  SELWeights w = SELWeights::zeros(layers, n);
  for (double &a : w.angles) a = rng.uniform(0.0, 2.0 * M_PI);
  return w;
}

std::vector<double> random_nonzero(std::size_t len, Rng &rng) {
  std::vector<double> v(len);
  double norm = 0.0;
  while (norm == 0.0) {
    for (double &x : v) x = rng.normal();
    norm = 0.0;
    for (double x : v) norm += x * x;
  }
  return v;
}

}  // namespace

TEST_CASE("RY(pi) flips |0> to |1>") {
  const StateVector out = apply_gate(StateVector::zero_state(1), Gate::ry(M_PI, 0));
  CHECK(out.amplitudes[0].real() == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(out.amplitudes[1].real() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(out.amplitudes[1].imag() == 0.0);
}

TEST_CASE("CNOT truth table on basis states") {
  // CNOT(0,1): |10> -> |11>
  StateVector out = apply_gate(basis(2, 2), Gate::cnot(0, 1));
  CHECK(out.amplitudes[3] == quantum::Complex{1.0, 0.0});
  // control clear: |01> unchanged
  out = apply_gate(basis(2, 1), Gate::cnot(0, 1));
  CHECK(out.amplitudes[1] == quantum::Complex{1.0, 0.0});
}

TEST_CASE("CZ flips the sign of |11> only") {
  for (std::size_t idx = 0; idx < 4; ++idx) {
    const StateVector out = apply_gate(basis(2, idx), Gate::cz(0, 1));
    const double expected = idx == 3 ? -1.0 : 1.0;
    CHECK(out.amplitudes[idx].real() == expected);
  }
}

TEST_CASE("RZ changes phase but not probability") {
  const double psi = 1.234;
  const StateVector out = apply_gate(StateVector::zero_state(1), Gate::rz(psi, 0));
  CHECK(std::norm(out.amplitudes[0]) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(out.amplitudes[0].real() == doctest::Approx(std::cos(psi / 2.0)));
  CHECK(out.amplitudes[0].imag() == doctest::Approx(-std::sin(psi / 2.0)));
}

TEST_CASE("gate errors: invalid qubit and non-finite angle") {
  CHECK_THROWS_AS(apply_gate(StateVector::zero_state(1), Gate::ry(0.1, 1)), SchemaError);
  CHECK_THROWS_AS(apply_gate(StateVector::zero_state(2), Gate::cnot(0, 0)), SchemaError);
  CHECK_THROWS_AS(apply_gate(StateVector::zero_state(1), Gate::ry(NAN, 0)), NumericError);
}

TEST_CASE("every gate's expanded matrix is unitary within 1e-12") {
  Rng rng(7);
  const int n = 2;
  const std::size_t dim = 4;
  const std::vector<Gate> gates = {
      Gate::ry(rng.uniform(-6.0, 6.0), 1), Gate::rz(rng.uniform(-6.0, 6.0), 0),
      Gate::rot(rng.uniform(-6.0, 6.0), rng.uniform(-6.0, 6.0), rng.uniform(-6.0, 6.0), 1),
      Gate::cnot(1, 0), Gate::cz(0, 1)};
  for (const Gate &g : gates) {
    // columns of U = action on basis vectors
    std::vector<std::vector<quantum::Complex>> u(dim);
    for (std::size_t c = 0; c < dim; ++c) {
      u[c] = apply_gate(basis(n, c), g).amplitudes;
    }
    for (std::size_t i = 0; i < dim; ++i) {
      for (std::size_t j = 0; j < dim; ++j) {
        quantum::Complex dot{0.0, 0.0};
        for (std::size_t k = 0; k < dim; ++k) dot += u[i][k] * std::conj(u[j][k]);
        const double expected = i == j ? 1.0 : 0.0;
        CHECK(std::abs(dot - expected) < 1e-12);
      }
    }
  }
}

TEST_CASE("norm is conserved across random gate sequences") {
  Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + static_cast<int>(rng.integer(3));
    StateVector s = quantum::amplitude_embed(
        random_nonzero(std::size_t{1} << n, rng), n);
    for (int step = 0; step < 20; ++step) {
      const int pick = static_cast<int>(rng.integer(n >= 2 ? 5 : 3));
      const int q = static_cast<int>(rng.integer(static_cast<std::uint64_t>(n)));
      const int q2 = (q + 1 + static_cast<int>(rng.integer(
                                   static_cast<std::uint64_t>(n - 1 > 0 ? n - 1 : 1)))) %
                     n;
      switch (pick) {
        case 0: s = apply_gate(s, Gate::ry(rng.uniform(-6.0, 6.0), q)); break;
        case 1: s = apply_gate(s, Gate::rz(rng.uniform(-6.0, 6.0), q)); break;
        case 2:
          s = apply_gate(s, Gate::rot(rng.uniform(-6.0, 6.0), rng.uniform(-6.0, 6.0),
                                      rng.uniform(-6.0, 6.0), q));
          break;
        case 3: s = apply_gate(s, Gate::cnot(q, q2)); break;
        default: s = apply_gate(s, Gate::cz(q, q2)); break;
      }
      CHECK(s.norm_squared() == doctest::Approx(1.0).epsilon(1e-9));
    }
  }
}

TEST_CASE("Rot(0,0,0) is the identity") {
  Rng rng(3);
  const StateVector s = quantum::amplitude_embed(random_nonzero(4, rng), 2);
  const StateVector out = apply_gate(s, Gate::rot(0.0, 0.0, 0.0, 1));
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(std::abs(out.amplitudes[i] - s.amplitudes[i]) < 1e-15);
  }
}

TEST_CASE("amplitude_embed normalizes, pads and validates") {
  const StateVector a = quantum::amplitude_embed({1, 0, 0, 0}, 2);
  CHECK(a.amplitudes[0] == quantum::Complex{1.0, 0.0});

  const StateVector b = quantum::amplitude_embed({1, 1, 1, 1}, 2);
  for (std::size_t i = 0; i < 4; ++i) CHECK(b.amplitudes[i].real() == 0.5);

  const StateVector c = quantum::amplitude_embed({3, 4}, 2);
  CHECK(c.amplitudes[0].real() == 0.6);
  CHECK(c.amplitudes[1].real() == 0.8);
  CHECK(c.amplitudes[2] == quantum::Complex{0.0, 0.0});
  CHECK(c.amplitudes[3] == quantum::Complex{0.0, 0.0});

  CHECK_THROWS_AS(quantum::amplitude_embed({0, 0, 0, 0}, 2), DataError);
  CHECK_THROWS_AS(quantum::amplitude_embed({1, 2, 3, 4, 5}, 2), SchemaError);
}

TEST_CASE("embedded states satisfy the unit-norm definition") {
  Rng rng(23);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + static_cast<int>(rng.integer(4));
    const std::size_t len = 1 + rng.integer(std::size_t{1} << n);
    const StateVector s = quantum::amplitude_embed(random_nonzero(len, rng), n);
    CHECK(std::abs(s.norm_squared() - 1.0) < 1e-12);
  }
}

TEST_CASE("expectation_z on basis states is exactly +-1") {
  CHECK(quantum::expectation_z(basis(2, 0), 0) == 1.0);
  CHECK(quantum::expectation_z(basis(2, 2), 0) == -1.0);
  CHECK(quantum::expectation_z(basis(2, 2), 1) == 1.0);
  for (int n = 1; n <= 3; ++n) {
    for (std::size_t i = 0; i < (std::size_t{1} << n); ++i) {
      for (int q = 0; q < n; ++q) {
        const double e = quantum::expectation_z(basis(n, i), q);
        const bool bit = (i >> (n - 1 - q)) & 1;
        CHECK(e == (bit ? -1.0 : 1.0));
      }
    }
  }
}

TEST_CASE("expectation of equal superposition is 0") {
  const StateVector s = quantum::amplitude_embed({0.5, 0.5, 0.5, 0.5}, 2);
  CHECK(quantum::expectation_z(s, 0) == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("class_probabilities maps the expectation linearly") {
  auto p = quantum::class_probabilities(1.0);
  CHECK(p.p_not_backorder == 1.0);
  CHECK(p.p_backorder == 0.0);
  p = quantum::class_probabilities(0.0);
  CHECK(p.p_not_backorder == 0.5);
  p = quantum::class_probabilities(-1.0);
  CHECK(p.p_backorder == 1.0);
  CHECK_THROWS_AS(quantum::class_probabilities(1.1), NumericError);

  Rng rng(5);
  for (int i = 0; i < 100; ++i) {
    const auto pp = quantum::class_probabilities(rng.uniform(-1.0, 1.0));
    CHECK(pp.p_not_backorder + pp.p_backorder == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("SEL with zero angles reduces to the CNOT ring") {
  const SELWeights zeros = SELWeights::zeros(1, 2);
  // |00> fixed point
  StateVector out = quantum::sel_circuit(basis(2, 0), zeros);
  CHECK(std::abs(out.amplitudes[0] - quantum::Complex{1.0, 0.0}) < 1e-15);
  // |10> -> CNOT(0,1) -> |11> -> CNOT(1,0) -> |01>
  out = quantum::sel_circuit(basis(2, 2), zeros);
  CHECK(std::abs(out.amplitudes[1] - quantum::Complex{1.0, 0.0}) < 1e-15);
}

TEST_CASE("SEL matches the dense matrix-chain oracle") {
  Rng rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    const int layers = 1 + static_cast<int>(rng.integer(2));
    const SELWeights w = random_weights(layers, 2, rng);
    const std::vector<double> inputs = random_nonzero(4, rng);
    const auto expected = oracles::quantum_forward_2q(inputs, w);
    const auto got = quantum::quantum_layer_forward(inputs, w);
    REQUIRE(got.size() == 2);
    CHECK(std::abs(got[0] - expected[0]) < 1e-10);
    CHECK(std::abs(got[1] - expected[1]) < 1e-10);
  }
}

TEST_CASE("quantum_layer_forward on basis inputs with zero weights") {
  const SELWeights zeros = SELWeights::zeros(1, 2);
  auto out = quantum::quantum_layer_forward({1, 0, 0, 0}, zeros);
  CHECK(out[0] == 1.0);
  CHECK(out[1] == 1.0);
  // |10> -> ring -> |01>: expectations (+1, -1)
  out = quantum::quantum_layer_forward({0, 0, 1, 0}, zeros);
  CHECK(out[0] == 1.0);
  CHECK(out[1] == -1.0);
}

TEST_CASE("SEL rejects mismatched register sizes") {
  const SELWeights w = SELWeights::zeros(1, 2);
  CHECK_THROWS_AS(quantum::sel_circuit(StateVector::zero_state(3), w), SchemaError);
}

TEST_CASE("parameter count is 3*n*L") {
  for (int l = 1; l <= 3; ++l) {
    for (int n = 1; n <= 4; ++n) {
      CHECK(SELWeights::zeros(l, n).parameter_count() ==
            static_cast<std::size_t>(3 * n * l));
    }
  }
}

TEST_CASE("parameter-shift gradient of RY(theta)|0> is -sin(theta)") {
  // single-qubit Rot(0, theta, 0) acts as RY(theta); <Z> = cos(theta)
  SELWeights w = SELWeights::zeros(1, 1);
  w.at(0, 0, 1) = 0.0;
  std::vector<double> g = quantum::param_shift_grad({1.0}, w, 0);
  CHECK(std::abs(g[1] - 0.0) < 1e-12);

  w.at(0, 0, 1) = M_PI / 3.0;
  g = quantum::param_shift_grad({1.0}, w, 0);
  CHECK(g[1] == doctest::Approx(-std::sin(M_PI / 3.0)).epsilon(1e-12));
  CHECK(g[1] == doctest::Approx(-0.86602540).epsilon(1e-7));
}

TEST_CASE("parameter-shift matches central finite differences") {
  Rng rng(29);
  for (int trial = 0; trial < 100; ++trial) {
    const SELWeights w = random_weights(1, 2, rng);
    const std::vector<double> inputs = random_nonzero(4, rng);
    for (int q = 0; q < 2; ++q) {
      const auto exact = quantum::param_shift_grad(inputs, w, q);
      const auto fd = oracles::finite_difference_grad(inputs, w, q);
      for (std::size_t k = 0; k < exact.size(); ++k) {
        CHECK(std::abs(exact[k] - fd[k]) < 1e-6);
      }
    }
  }
}
