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

#include "qfsl/ansatz.hpp"

#include <set>

#include "qfsl/error.hpp"

namespace qfsl {

std::string_view to_string(AnsatzKind kind) {
  switch (kind) {
    case AnsatzKind::IQP:
      return "iqp";
    case AnsatzKind::Sim15:
      return "sim15";
    case AnsatzKind::Euler:
      return "euler";
    case AnsatzKind::Circuit4:
      return "circuit4";
  }
  return "?";
}

AnsatzKind parse_ansatz_kind(std::string_view name) {
  for (AnsatzKind k : {AnsatzKind::IQP, AnsatzKind::Sim15, AnsatzKind::Euler, AnsatzKind::Circuit4}) {
    if (to_string(k) == name) return k;
  }
  throw Error("unknown ansatz '" + std::string(name) + "'");
}

std::string_view to_string(PqeLayout layout) {
  return layout == PqeLayout::EulerBroadcast ? "euler_broadcast" : "circuit4";
}

std::size_t TypeDimensionMap::width(const PregroupType& type) const noexcept {
  std::size_t w = 0;
  for (const auto& atom : type.atoms) w += width(atom);
  return w;
}

std::size_t params_per_layer(AnsatzKind kind, std::size_t width) {
  if (width == 0) throw Error("ansatz width must be positive");
  switch (kind) {
    case AnsatzKind::IQP:
      return width - 1;
    case AnsatzKind::Sim15:
      return width;
    case AnsatzKind::Euler:
      if (width != 1) throw Error("Euler ansatz is only defined on one qubit");
      return 3;
    case AnsatzKind::Circuit4:
      return 3 * width - 1;
  }
  return 0;
}

std::size_t pqe_param_count(PqeLayout layout, std::size_t width) {
  return layout == PqeLayout::EulerBroadcast ? 3 : params_per_layer(AnsatzKind::Circuit4, width);
}

namespace {

void circuit4_layer(std::vector<Gate>& out, std::size_t width, std::size_t offset,
                    const ParamFactory& param, int& next) {
  for (std::size_t q = 0; q < width; ++q) out.push_back(make_gate(GateKind::Rx, offset + q, param(next++)));
  for (std::size_t q = 0; q < width; ++q) out.push_back(make_gate(GateKind::Ry, offset + q, param(next++)));
  for (std::size_t q = 0; q + 1 < width; ++q) {
    out.push_back(make_controlled(GateKind::CRx, offset + q, offset + q + 1, param(next++)));
  }
}

}  // namespace

std::vector<Gate> ansatz_gates(const AnsatzSpec& spec, std::size_t width, std::size_t offset,
                               const ParamFactory& param) {
  if (spec.layers < 1) throw Error("ansatz needs at least one layer");
  params_per_layer(spec.kind, width);  // validates width
  std::vector<Gate> out;
  int next = 0;
  for (int layer = 0; layer < spec.layers; ++layer) {
    switch (spec.kind) {
      case AnsatzKind::IQP:
        for (std::size_t q = 0; q < width; ++q) out.push_back(make_gate(GateKind::H, offset + q));
        for (std::size_t q = 0; q + 1 < width; ++q) {
          out.push_back(make_controlled(GateKind::CRz, offset + q, offset + q + 1, param(next++)));
        }
        break;
      case AnsatzKind::Sim15:
        for (std::size_t q = 0; q < width; ++q) out.push_back(make_gate(GateKind::Ry, offset + q, param(next++)));
        // Ring: last -> first, then each qubit onto its successor.
        if (width > 1) {
          out.push_back(make_controlled(GateKind::CNOT, offset + width - 1, offset));
          for (std::size_t q = 0; q + 1 < width; ++q) {
            out.push_back(make_controlled(GateKind::CNOT, offset + q, offset + q + 1));
          }
        }
        break;
      case AnsatzKind::Euler:
        out.push_back(make_gate(GateKind::Rx, offset, param(next++)));
        out.push_back(make_gate(GateKind::Ry, offset, param(next++)));
        out.push_back(make_gate(GateKind::Rz, offset, param(next++)));
        break;
      case AnsatzKind::Circuit4:
        circuit4_layer(out, width, offset, param, next);
        break;
    }
  }
  return out;
}

std::vector<Gate> pqe_gates(PqeLayout layout, std::size_t width, std::size_t offset,
                            const ParamFactory& param) {
  if (width == 0) throw Error("encoding width must be positive");
  std::vector<Gate> out;
  if (layout == PqeLayout::EulerBroadcast) {
    for (std::size_t q = 0; q < width; ++q) {
      out.push_back(make_gate(GateKind::Rx, offset + q, param(0)));
      out.push_back(make_gate(GateKind::Ry, offset + q, param(1)));
      out.push_back(make_gate(GateKind::Rz, offset + q, param(2)));
    }
  } else {
    int next = 0;
    circuit4_layer(out, width, offset, param, next);
  }
  return out;
}

std::string type_key(const PregroupType& type) { return to_string(type); }

std::vector<Gate> build_word_register(const DiagramWord& word, std::size_t offset,
                                      const CompileOptions& options) {
  const std::size_t width = options.dims.width(word.type);
  if (options.mode == ParamMode::Traditional) {
    return ansatz_gates(options.ansatz, width, offset, [&word](int i) -> GateParam {
      return ParamRef{ParamScope::Word, word.token, i};
    });
  }
  std::vector<Gate> out = pqe_gates(options.pqe, width, offset, [&word](int i) -> GateParam {
    return ParamRef{ParamScope::FrozenPqe, word.token, i};
  });
  const std::string key = type_key(word.type);
  auto w = ansatz_gates(options.ansatz, width, offset, [&key](int i) -> GateParam {
    return ParamRef{ParamScope::PregroupType, key, i};
  });
  out.insert(out.end(), w.begin(), w.end());
  return out;
}

CupRealization realize_cup(std::span<const std::size_t> left, std::span<const std::size_t> right) {
  if (left.size() != right.size()) {
    throw DimensionError("cup joins wires of widths " + std::to_string(left.size()) + " and " +
                         std::to_string(right.size()));
  }
  CupRealization out;
  for (std::size_t k = 0; k < left.size(); ++k) {
    if (left[k] == right[k]) throw Error("cup joins a qubit to itself");
    out.gates.push_back(make_controlled(GateKind::CNOT, left[k], right[k]));
    out.gates.push_back(make_gate(GateKind::H, left[k]));
    out.postselect.push_back(left[k]);
    out.postselect.push_back(right[k]);
  }
  return out;
}

CircuitIR compile(const SentenceDiagram& diagram, const CompileOptions& options) {
  if (diagram.open_wires.size() != 1) throw GrammarError("diagram does not reduce to a single wire");
  CircuitIR circuit;
  // Qubits of each atom, in atom order.
  std::vector<std::vector<std::size_t>> atom_qubits(diagram.atoms.size());
  std::size_t next_qubit = 0;
  for (std::size_t w = 0; w < diagram.words.size(); ++w) {
    const DiagramWord& word = diagram.words[w];
    const std::size_t width = options.dims.width(word.type);
    circuit.registers.push_back({w, word.token, next_qubit, width});
    auto gates = build_word_register(word, next_qubit, options);
    circuit.gates.insert(circuit.gates.end(), gates.begin(), gates.end());
    for (std::size_t a = 0; a < word.type.atoms.size(); ++a) {
      auto& qubits = atom_qubits[word.first_atom + a];
      for (std::size_t k = 0; k < options.dims.width(word.type.atoms[a]); ++k) qubits.push_back(next_qubit++);
    }
  }
  circuit.qubit_count = next_qubit;
  for (const auto& [i, j] : diagram.cups) {
    if (diagram.word_of_atom(i) == diagram.word_of_atom(j)) throw Error("cup inside a single word");
    auto cup = realize_cup(atom_qubits[i], atom_qubits[j]);
    circuit.gates.insert(circuit.gates.end(), cup.gates.begin(), cup.gates.end());
    circuit.postselect.insert(circuit.postselect.end(), cup.postselect.begin(), cup.postselect.end());
  }
  circuit.sentence_qubits = atom_qubits[diagram.sentence_atom()];
  circuit.validate();
  return circuit;
}

std::size_t count_trainable(std::span<const CircuitIR> circuits) {
  std::set<ParamRef> refs;
  for (const auto& c : circuits) {
    for (const auto& r : c.param_refs()) {
      if (is_trainable(r.scope)) refs.insert(r);
    }
  }
  return refs.size();
}

std::size_t count_trainable(const ParamStore& store) { return store.trainable_keys().size(); }

CircuitIR ansatz_template(const AnsatzSpec& spec, std::size_t width) {
  CircuitIR c;
  c.qubit_count = width;
  c.registers.push_back({0, "template", 0, width});
  c.gates = ansatz_gates(spec, width, 0, [](int i) -> GateParam {
    return ParamRef{ParamScope::Word, "theta", i};
  });
  for (std::size_t q = 0; q < width; ++q) c.sentence_qubits.push_back(q);
  return c;
}

}  // namespace qfsl
