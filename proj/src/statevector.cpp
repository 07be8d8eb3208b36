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

#include "qfsl/statevector.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "qfsl/error.hpp"

namespace qfsl {

StateVector::StateVector(std::size_t qubits) : qubits_(qubits) {
  if (qubits >= 8 * sizeof(std::size_t) - 1) throw DimensionError("too many qubits");
  amps_.assign(std::size_t{1} << qubits, Complex{});
  amps_[0] = 1.0;
}

StateVector StateVector::from_amplitudes(std::vector<Complex> amplitudes) {
  if (amplitudes.empty() || !std::has_single_bit(amplitudes.size())) {
    throw DimensionError("amplitude count " + std::to_string(amplitudes.size()) +
                         " is not a power of two");
  }
  StateVector s(static_cast<std::size_t>(std::countr_zero(amplitudes.size())));
  s.amps_ = std::move(amplitudes);
  return s;
}

double StateVector::squared_norm() const noexcept {
  double s = 0.0;
  for (const Complex& a : amps_) s += std::norm(a);
  return s;
}

void StateVector::normalize() {
  const double n2 = squared_norm();
  if (n2 == 0.0) throw Error("cannot normalize a zero state");
  const double inv = 1.0 / std::sqrt(n2);
  for (Complex& a : amps_) a *= inv;
}

double resolve_angle(const Gate& gate, const ParamLookup& lookup) {
  if (const auto* angle = std::get_if<double>(&gate.param)) return *angle;
  if (const auto* ref = std::get_if<ParamRef>(&gate.param)) {
    if (!lookup) throw Error("no parameter lookup for " + to_string(*ref));
    return lookup(*ref);
  }
  return 0.0;
}

std::array<Complex, 4> gate_matrix(GateKind kind, double angle) {
  const double c = std::cos(angle / 2.0);
  const double s = std::sin(angle / 2.0);
  const Complex i{0.0, 1.0};
  switch (kind) {
    case GateKind::H: {
      const double h = 1.0 / std::sqrt(2.0);
      return {h, h, h, -h};
    }
    case GateKind::Rx:
    case GateKind::CRx:
      return {c, -i * s, -i * s, c};
    case GateKind::Ry:
      return {c, -s, s, c};
    case GateKind::Rz:
    case GateKind::CRz:
      return {std::polar(1.0, -angle / 2.0), 0.0, 0.0, std::polar(1.0, angle / 2.0)};
    case GateKind::CNOT:
      return {0.0, 1.0, 1.0, 0.0};
  }
  return {1.0, 0.0, 0.0, 1.0};
}

void apply_gate(StateVector& state, const Gate& gate, double angle) {
  const std::size_t n = state.qubit_count();
  if (gate.target >= n) throw Error("gate target " + std::to_string(gate.target) + " out of range");
  const bool controlled = is_controlled(gate.kind);
  if (controlled && (gate.control >= n || gate.control == gate.target)) {
    throw Error("invalid control qubit for " + std::string(to_string(gate.kind)));
  }
  const auto m = gate_matrix(gate.kind, angle);
  const std::size_t tmask = state.mask(gate.target);
  const std::size_t cmask = controlled ? state.mask(gate.control) : 0;
  auto amps = state.amplitudes();
  for (std::size_t i = 0; i < amps.size(); ++i) {
    if ((i & tmask) != 0 || (i & cmask) != cmask) continue;
    const std::size_t j = i | tmask;
    const Complex a0 = amps[i];
    const Complex a1 = amps[j];
    amps[i] = m[0] * a0 + m[1] * a1;
    amps[j] = m[2] * a0 + m[3] * a1;
  }
}

void apply_gate(StateVector& state, const Gate& gate) {
  if (std::holds_alternative<ParamRef>(gate.param)) {
    throw Error("symbolic gate parameter needs a lookup");
  }
  apply_gate(state, gate, resolve_angle(gate, {}));
}

void project(StateVector& state, std::size_t qubit, int outcome) {
  if (qubit >= state.qubit_count()) throw Error("projected qubit out of range");
  const std::size_t m = state.mask(qubit);
  const std::size_t keep = outcome != 0 ? m : 0;
  auto amps = state.amplitudes();
  for (std::size_t i = 0; i < amps.size(); ++i) {
    if ((i & m) != keep) amps[i] = 0.0;
  }
}

StateVector simulate(const CircuitIR& circuit, const ParamLookup& lookup) {
  StateVector state(circuit.qubit_count);
  for (const Gate& g : circuit.gates) apply_gate(state, g, resolve_angle(g, lookup));
  return state;
}

StateVector simulate(const CircuitIR& circuit, const ParamStore& params) {
  return simulate(circuit, [&params](const ParamRef& r) { return params.get(r); });
}

RunOutcome extract_outcome(const StateVector& projected,
                           std::span<const std::size_t> sentence_qubits) {
  RunOutcome out;
  out.success_probability = projected.squared_norm();
  out.sentence_state = StateVector(sentence_qubits.size());
  auto dst = out.sentence_state.amplitudes();
  // Non-sentence bits stay 0: every post-selected qubit reads |0>.
  const std::size_t k = sentence_qubits.size();
  for (std::size_t s = 0; s < dst.size(); ++s) {
    std::size_t index = 0;
    for (std::size_t b = 0; b < k; ++b) {
      if ((s >> (k - 1 - b)) & 1U) index |= projected.mask(sentence_qubits[b]);
    }
    dst[s] = projected[index];
  }
  if (out.success_probability < kZeroSuccessThreshold) {
    out.degenerate = true;
    for (Complex& a : dst) a = 0.0;
    return out;
  }
  out.sentence_state.normalize();
  return out;
}

RunOutcome run(const CircuitIR& circuit, const ParamLookup& lookup) {
  circuit.validate();
  StateVector state = simulate(circuit, lookup);
  for (std::size_t q : circuit.postselect) project(state, q, 0);
  return extract_outcome(state, circuit.sentence_qubits);
}

RunOutcome run(const CircuitIR& circuit, const ParamStore& params) {
  return run(circuit, [&params](const ParamRef& r) { return params.get(r); });
}

Complex overlap(const StateVector& a, const StateVector& b) {
  if (a.size() != b.size()) throw DimensionError("overlap of states with different sizes");
  Complex s{};
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

double fidelity(const StateVector& a, const StateVector& b) { return std::norm(overlap(a, b)); }

std::vector<double> born_probabilities(const StateVector& state) {
  std::vector<double> p(state.size());
  for (std::size_t i = 0; i < state.size(); ++i) p[i] = std::norm(state[i]);
  return p;
}

void write_amplitudes_csv(std::ostream& out, const StateVector& state) {
  out << "index,re,im\n";
  char buf[96];
  for (std::size_t i = 0; i < state.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g\n", i, state[i].real(), state[i].imag());
    out << buf;
  }
}

}  // namespace qfsl
