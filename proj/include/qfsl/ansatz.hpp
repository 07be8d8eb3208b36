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

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qfsl/circuit.hpp"
#include "qfsl/pregroup.hpp"

namespace qfsl {

enum class AnsatzKind { IQP, Sim15, Euler, Circuit4 };

std::string_view to_string(AnsatzKind kind);
AnsatzKind parse_ansatz_kind(std::string_view name);

struct AnsatzSpec {
  AnsatzKind kind = AnsatzKind::Circuit4;
  int layers = 1;

  friend bool operator==(const AnsatzSpec&, const AnsatzSpec&) = default;
};

/// Qubits per basic type. The sentence type always maps to one qubit.
struct TypeDimensionMap {
  std::size_t qubits_per_n = 1;
  static constexpr std::size_t qubits_per_s = 1;

  std::size_t width(const AtomicType& atom) const noexcept {
    return atom.base == BaseType::Noun ? qubits_per_n : qubits_per_s;
  }
  std::size_t width(const PregroupType& type) const noexcept;
};

/// Gate structure of the frozen encoding layer in fsl mode.
///  - EulerBroadcast: Rx, Ry, Rz with one shared angle triplet on every qubit.
///  - Circuit4: Rx row, Ry row, CRx chain; 3N - 1 angles.
enum class PqeLayout { EulerBroadcast, Circuit4 };

std::string_view to_string(PqeLayout layout);

/// Trainable angles in one layer of `kind` on `width` qubits.
/// IQP: N-1, Sim15: N, Euler: 3 (width 1 only), Circuit4: 3N-1.
std::size_t params_per_layer(AnsatzKind kind, std::size_t width);
std::size_t pqe_param_count(PqeLayout layout, std::size_t width);

/// Produces the angle for parameter number `index` of a layer stack.
using ParamFactory = std::function<GateParam(int index)>;

/// `spec.layers` layers of the ansatz on qubits [offset, offset + width).
/// Throws Error for Euler on width > 1 or layers < 1.
std::vector<Gate> ansatz_gates(const AnsatzSpec& spec, std::size_t width, std::size_t offset,
                               const ParamFactory& param);

/// Encoding-layer gates on qubits [offset, offset + width).
std::vector<Gate> pqe_gates(PqeLayout layout, std::size_t width, std::size_t offset,
                            const ParamFactory& param);

struct CompileOptions {
  AnsatzSpec ansatz;
  TypeDimensionMap dims;
  ParamMode mode = ParamMode::Traditional;
  PqeLayout pqe = PqeLayout::EulerBroadcast;
};

/// Key of the shared W parameters for a pregroup type, e.g. "n^r.s.n^l".
std::string type_key(const PregroupType& type);

/// Gates for one word occupying qubits [offset, offset + width).
/// Traditional mode: the ansatz with word-scoped parameters keyed by token.
/// Fsl mode: the frozen encoding layer keyed by token, then the ansatz as
/// the W layer with parameters keyed by pregroup type.
std::vector<Gate> build_word_register(const DiagramWord& word, std::size_t offset,
                                      const CompileOptions& options);

struct CupRealization {
  std::vector<Gate> gates;
  std::vector<std::size_t> postselect;
};

/// Bell effect on paired wires: for each pair (a, b), CNOT(a -> b), H(a),
/// then post-select a and b on |0>. Throws DimensionError if the wire lists
/// differ in length.
CupRealization realize_cup(std::span<const std::size_t> left, std::span<const std::size_t> right);

/// Lays out word registers left to right, realizes every cup, marks the
/// open sentence wire, and post-selects everything else.
CircuitIR compile(const SentenceDiagram& diagram, const CompileOptions& options);

/// Distinct trainable parameter references across the circuits.
std::size_t count_trainable(std::span<const CircuitIR> circuits);
std::size_t count_trainable(const ParamStore& store);

/// Stand-alone ansatz on `width` qubits with parameters
/// word:"theta":0..P-1 and every qubit an output qubit.
CircuitIR ansatz_template(const AnsatzSpec& spec, std::size_t width);

}  // namespace qfsl
