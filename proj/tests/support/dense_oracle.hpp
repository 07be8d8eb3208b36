// Copyright 2026 The QFSL Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Dense reference simulator for tests. Every gate becomes an explicit
// 2^n x 2^n matrix built from Kronecker products, independently of the
// engine's in-place kernels.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "qfsl/circuit.hpp"
#include "qfsl/random.hpp"

namespace qfsl::testing {

using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using C = std::complex<double>;

inline Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

inline Mat pauli(char p) {
  Mat m(2, 2);
  switch (p) {
    case 'X': m << 0, 1, 1, 0; break;
    case 'Y': m << 0, C(0, -1), C(0, 1), 0; break;
    case 'Z': m << 1, 0, 0, -1; break;
    default: m = Mat::Identity(2, 2);
  }
  return m;
}

/// exp(-i t P / 2) through the matrix exponential identity for Paulis.
inline Mat rotation(char p, double t) {
  return std::cos(t / 2) * Mat::Identity(2, 2) - C(0, 1) * std::sin(t / 2) * pauli(p);
}

inline Mat single_qubit(GateKind kind, double angle) {
  switch (kind) {
    case GateKind::H: {
      Mat h(2, 2);
      h << 1, 1, 1, -1;
      return h / std::sqrt(2.0);
    }
    case GateKind::Rx:
    case GateKind::CRx: return rotation('X', angle);
    case GateKind::Ry: return rotation('Y', angle);
    case GateKind::Rz:
    case GateKind::CRz: return rotation('Z', angle);
    case GateKind::CNOT: return pauli('X');
  }
  return Mat::Identity(2, 2);
}

/// Operator `op` on qubit q of n (qubit 0 leftmost in the Kronecker chain).
inline Mat embed(const Mat& op, std::size_t q, std::size_t n) {
  Mat out = Mat::Identity(1, 1);
  for (std::size_t k = 0; k < n; ++k) out = kron(out, k == q ? op : Mat::Identity(2, 2));
  return out;
}

inline Mat projector(int bit) {
  Mat p = Mat::Zero(2, 2);
  p(bit, bit) = 1.0;
  return p;
}

inline Mat gate_unitary(const Gate& g, double angle, std::size_t n) {
  const Mat u = single_qubit(g.kind, angle);
  if (g.control == Gate::kNone) return embed(u, g.target, n);
  Mat off = Mat::Identity(1, 1);
  Mat on = Mat::Identity(1, 1);
  for (std::size_t k = 0; k < n; ++k) {
    off = kron(off, k == g.control ? projector(0) : Mat::Identity(2, 2));
    on = kron(on, k == g.control ? projector(1) : (k == g.target ? u : Mat::Identity(2, 2)));
  }
  return off + on;
}

struct DenseOutcome {
  Vec sentence;  // normalized unless degenerate
  double success = 0.0;
};

/// Gates, then the product of |0><0| projectors, then the sentence block.
template <typename Lookup>
DenseOutcome dense_run(const CircuitIR& c, Lookup&& angle_of) {
  const std::size_t n = c.qubit_count;
  Vec psi = Vec::Zero(Eigen::Index{1} << n);
  psi(0) = 1.0;
  for (const Gate& g : c.gates) psi = gate_unitary(g, angle_of(g), n) * psi;
  for (std::size_t q : c.postselect) psi = embed(projector(0), q, n) * psi;
  DenseOutcome out;
  out.success = psi.squaredNorm();
  const std::size_t m = c.sentence_qubits.size();
  out.sentence = Vec::Zero(Eigen::Index{1} << m);
  for (std::size_t s = 0; s < (std::size_t{1} << m); ++s) {
    std::size_t index = 0;
    for (std::size_t k = 0; k < m; ++k) {
      if ((s >> (m - 1 - k)) & 1U) index |= std::size_t{1} << (n - 1 - c.sentence_qubits[k]);
    }
    out.sentence(static_cast<Eigen::Index>(s)) = psi(static_cast<Eigen::Index>(index));
  }
  if (out.success > 1e-12) out.sentence /= std::sqrt(out.success);
  return out;
}

inline double constant_angle(const Gate& g) {
  if (const double* a = std::get_if<double>(&g.param)) return *a;
  return 0.0;
}

/// Random circuit on `qubits` qubits with constant angles from the full
/// gate set and up to `max_post` post-selected qubits.
inline CircuitIR random_circuit(Rng& rng, std::size_t qubits, std::size_t gates, std::size_t max_post) {
  static constexpr GateKind kinds[] = {GateKind::H,   GateKind::Rx,  GateKind::Ry,  GateKind::Rz,
                                       GateKind::CRx, GateKind::CRz, GateKind::CNOT};
  CircuitIR c;
  c.qubit_count = qubits;
  for (std::size_t i = 0; i < gates; ++i) {
    GateKind k = kinds[rng.below(qubits > 1 ? 7 : 4)];
    const double angle = rng.uniform(-6.5, 6.5);
    GateParam p = is_parametrized(k) ? GateParam{angle} : GateParam{};
    if (is_controlled(k)) {
      const std::size_t a = rng.below(qubits);
      std::size_t b = rng.below(qubits - 1);
      if (b >= a) ++b;
      c.gates.push_back(make_controlled(k, a, b, p));
    } else {
      c.gates.push_back(make_gate(k, rng.below(qubits), p));
    }
  }
  std::vector<std::size_t> order(qubits);
  for (std::size_t q = 0; q < qubits; ++q) order[q] = q;
  for (std::size_t i = qubits; i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
  const std::size_t post = std::min<std::size_t>(rng.below(max_post + 1), qubits - 1);
  for (std::size_t i = 0; i < qubits; ++i) {
    (i < post ? c.postselect : c.sentence_qubits).push_back(order[i]);
  }
  std::sort(c.sentence_qubits.begin(), c.sentence_qubits.end());
  return c;
}

}  // namespace qfsl::testing
