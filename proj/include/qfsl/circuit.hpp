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
#include <compare>
#include <cstddef>
#include <iosfwd>
#include <limits>
#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace qfsl {

enum class GateKind { H, Rx, Ry, Rz, CRx, CRz, CNOT };

std::string_view to_string(GateKind kind);
GateKind parse_gate_kind(std::string_view name);
bool is_controlled(GateKind kind) noexcept;
bool is_parametrized(GateKind kind) noexcept;

/// Where a gate angle lives.
///  - Word: one parameter set per word (traditional ansatze).
///  - PregroupType: shared by every word of that type (the trainable W layer).
///  - FrozenPqe: encoder output for a word; never updated by training.
enum class ParamScope { Word, PregroupType, FrozenPqe };

std::string_view to_string(ParamScope scope);
ParamScope parse_param_scope(std::string_view name);

struct ParamRef {
  ParamScope scope = ParamScope::Word;
  std::string key;
  int index = 0;

  friend auto operator<=>(const ParamRef&, const ParamRef&) = default;
  friend bool operator==(const ParamRef&, const ParamRef&) = default;
};

/// "scope:key:index".
std::string to_string(const ParamRef& ref);

/// No angle, a fixed angle, or a symbolic reference.
using GateParam = std::variant<std::monostate, double, ParamRef>;

struct Gate {
  static constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

  GateKind kind = GateKind::H;
  /// Single-qubit gates use `target`; controlled gates also set `control`.
  std::size_t control = kNone;
  std::size_t target = 0;
  GateParam param;

  friend bool operator==(const Gate&, const Gate&) = default;
};

Gate make_gate(GateKind kind, std::size_t target, GateParam param = {});
Gate make_controlled(GateKind kind, std::size_t control, std::size_t target,
                     GateParam param = {});

/// Contiguous qubit range owned by one word occurrence.
struct WordRegister {
  std::size_t word_index = 0;
  std::string token;
  std::size_t first_qubit = 0;
  std::size_t width = 0;

  friend bool operator==(const WordRegister&, const WordRegister&) = default;
};

/// A compiled circuit: gates on `qubit_count` qubits, all starting in |0>,
/// then projection of `postselect` qubits onto |0>. Every qubit is either
/// post-selected or listed in `sentence_qubits`.
struct CircuitIR {
  std::size_t qubit_count = 0;
  std::vector<WordRegister> registers;
  std::vector<Gate> gates;
  std::vector<std::size_t> postselect;
  std::vector<std::size_t> sentence_qubits;

  /// Throws Error if a gate or index is out of range, a qubit is both
  /// post-selected and a sentence qubit, or a qubit is neither.
  void validate() const;

  /// Distinct parameter references, sorted.
  std::vector<ParamRef> param_refs() const;

  friend bool operator==(const CircuitIR&, const CircuitIR&) = default;
};

/// Text form used for golden files and debugging.
std::string to_json(const CircuitIR& circuit, int indent = 2);
CircuitIR circuit_from_json(std::string_view text);

enum class ParamMode { Traditional, Fsl };

/// Angle values for parameter references. Word- and type-scoped values are
/// trainable; FrozenPqe values are fixed encoder outputs.
class ParamStore {
 public:
  explicit ParamStore(ParamMode mode = ParamMode::Traditional) : mode_(mode) {}

  ParamMode mode() const noexcept { return mode_; }

  bool contains(const ParamRef& ref) const { return values_.contains(ref); }
  /// Throws Error when the reference is not present.
  double get(const ParamRef& ref) const;
  /// Throws Error for a non-finite angle or, in fsl mode, for a trainable
  /// reference that is not type-scoped.
  void set(const ParamRef& ref, double value);

  std::size_t size() const noexcept { return values_.size(); }
  const std::map<ParamRef, double>& values() const noexcept { return values_; }
  std::vector<ParamRef> trainable_keys() const;
  std::vector<ParamRef> frozen_keys() const;

  /// Lines `scope<TAB>key<TAB>index<TAB>value`, preceded by a `# mode` line.
  void save(std::ostream& out) const;
  static ParamStore load(std::istream& in);

  friend bool operator==(const ParamStore&, const ParamStore&) = default;

 private:
  ParamMode mode_;
  std::map<ParamRef, double> values_;
};

bool is_trainable(ParamScope scope) noexcept;

}  // namespace qfsl
