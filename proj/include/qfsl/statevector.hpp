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

#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "qfsl/circuit.hpp"

namespace qfsl {

using Complex = std::complex<double>;

/// Dense pure state on n qubits. Qubit 0 is the most significant bit of the
/// basis index, so |q0 q1 ... q(n-1)> sits at index sum q_k * 2^(n-1-k).
class StateVector {
 public:
  /// |0...0> on `qubits` qubits. A zero-qubit state is the scalar 1.
  explicit StateVector(std::size_t qubits = 0);
  /// Throws DimensionError unless the size is a power of two.
  static StateVector from_amplitudes(std::vector<Complex> amplitudes);

  std::size_t qubit_count() const noexcept { return qubits_; }
  std::size_t size() const noexcept { return amps_.size(); }
  std::span<const Complex> amplitudes() const noexcept { return amps_; }
  std::span<Complex> amplitudes() noexcept { return amps_; }
  const Complex& operator[](std::size_t i) const { return amps_[i]; }
  Complex& operator[](std::size_t i) { return amps_[i]; }

  double squared_norm() const noexcept;
  /// Divides by the norm; throws Error on a zero vector.
  void normalize();

  /// Bit mask of qubit q in the basis index.
  std::size_t mask(std::size_t q) const noexcept { return std::size_t{1} << (qubits_ - 1 - q); }

 private:
  std::size_t qubits_;
  std::vector<Complex> amps_;
};

/// Angle lookup for symbolic gate parameters.
using ParamLookup = std::function<double(const ParamRef&)>;

/// Angle of a gate: its constant, its resolved reference, or 0 for
/// unparametrized gates.
double resolve_angle(const Gate& gate, const ParamLookup& lookup);

/// 2x2 matrix of the single-qubit operation (the target action for
/// controlled gates). Rotations are R_P(t) = exp(-i t P / 2).
std::array<Complex, 4> gate_matrix(GateKind kind, double angle);

/// Applies one gate with an explicit angle. Throws Error for out-of-range
/// qubits.
void apply_gate(StateVector& state, const Gate& gate, double angle);
/// Applies one gate whose angle is constant or absent.
void apply_gate(StateVector& state, const Gate& gate);

/// Zeroes every amplitude whose `qubit` differs from `outcome`, without
/// renormalizing.
void project(StateVector& state, std::size_t qubit, int outcome);

/// Gates applied in order to |0...0>; no post-selection.
StateVector simulate(const CircuitIR& circuit, const ParamLookup& lookup);
StateVector simulate(const CircuitIR& circuit, const ParamStore& params);

/// Success probabilities below this are treated as zero.
inline constexpr double kZeroSuccessThreshold = 1e-12;

struct RunOutcome {
  /// Normalized state over the sentence qubits (first listed qubit is the
  /// most significant). All-zero when `degenerate`.
  StateVector sentence_state;
  double success_probability = 0.0;
  /// Success probability fell below kZeroSuccessThreshold.
  bool degenerate = false;
};

/// Simulates, projects every post-selected qubit onto |0>, and extracts the
/// sentence register.
RunOutcome run(const CircuitIR& circuit, const ParamLookup& lookup);
RunOutcome run(const CircuitIR& circuit, const ParamStore& params);

/// Extracts the normalized sentence register from a state whose
/// post-selected qubits have already been projected onto |0>. Qubits outside
/// `sentence_qubits` are read at |0>.
RunOutcome extract_outcome(const StateVector& projected,
                           std::span<const std::size_t> sentence_qubits);

/// <a|b>. Throws DimensionError for mismatched sizes.
Complex overlap(const StateVector& a, const StateVector& b);
/// |<a|b>|^2.
double fidelity(const StateVector& a, const StateVector& b);
/// |a_i|^2 for every basis state.
std::vector<double> born_probabilities(const StateVector& state);

/// `index,re,im` rows for debugging.
void write_amplitudes_csv(std::ostream& out, const StateVector& state);

}  // namespace qfsl
