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

#include "qfsl/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <optional>
#include <ostream>
#include <set>

#include <json.hpp>

#include "qfsl/error.hpp"

namespace qfsl {

namespace {

constexpr std::array<std::pair<GateKind, std::string_view>, 7> kGateNames{{
    {GateKind::H, "H"},
    {GateKind::Rx, "Rx"},
    {GateKind::Ry, "Ry"},
    {GateKind::Rz, "Rz"},
    {GateKind::CRx, "CRx"},
    {GateKind::CRz, "CRz"},
    {GateKind::CNOT, "CNOT"},
}};

}  // namespace

std::string_view to_string(GateKind kind) {
  for (const auto& [k, name] : kGateNames) {
    if (k == kind) return name;
  }
  return "?";
}

GateKind parse_gate_kind(std::string_view name) {
  for (const auto& [k, n] : kGateNames) {
    if (n == name) return k;
  }
  throw Error("unknown gate '" + std::string(name) + "'");
}

bool is_controlled(GateKind kind) noexcept {
  return kind == GateKind::CRx || kind == GateKind::CRz || kind == GateKind::CNOT;
}

bool is_parametrized(GateKind kind) noexcept {
  return kind != GateKind::H && kind != GateKind::CNOT;
}

std::string_view to_string(ParamScope scope) {
  switch (scope) {
    case ParamScope::Word:
      return "word";
    case ParamScope::PregroupType:
      return "pregroup_type";
    case ParamScope::FrozenPqe:
      return "frozen_pqe";
  }
  return "?";
}

ParamScope parse_param_scope(std::string_view name) {
  if (name == "word") return ParamScope::Word;
  if (name == "pregroup_type") return ParamScope::PregroupType;
  if (name == "frozen_pqe") return ParamScope::FrozenPqe;
  throw Error("unknown parameter scope '" + std::string(name) + "'");
}

bool is_trainable(ParamScope scope) noexcept { return scope != ParamScope::FrozenPqe; }

std::string to_string(const ParamRef& ref) {
  return std::string(to_string(ref.scope)) + ":" + ref.key + ":" + std::to_string(ref.index);
}

Gate make_gate(GateKind kind, std::size_t target, GateParam param) {
  return Gate{kind, Gate::kNone, target, std::move(param)};
}

Gate make_controlled(GateKind kind, std::size_t control, std::size_t target, GateParam param) {
  return Gate{kind, control, target, std::move(param)};
}

void CircuitIR::validate() const {
  for (const Gate& g : gates) {
    if (g.target >= qubit_count) throw Error("gate target out of range");
    if (is_controlled(g.kind)) {
      if (g.control >= qubit_count) throw Error("gate control out of range");
      if (g.control == g.target) throw Error("control equals target");
    }
    if (is_parametrized(g.kind) && std::holds_alternative<std::monostate>(g.param)) {
      throw Error(std::string("gate ") + std::string(to_string(g.kind)) + " has no angle");
    }
  }
  std::vector<int> role(qubit_count, 0);
  for (std::size_t q : postselect) {
    if (q >= qubit_count) throw Error("post-selected qubit out of range");
    if (role[q] != 0) throw Error("qubit " + std::to_string(q) + " listed twice");
    role[q] = 1;
  }
  for (std::size_t q : sentence_qubits) {
    if (q >= qubit_count) throw Error("sentence qubit out of range");
    if (role[q] != 0) throw Error("qubit " + std::to_string(q) + " is both post-selected and a sentence qubit");
    role[q] = 2;
  }
  for (std::size_t q = 0; q < qubit_count; ++q) {
    if (role[q] == 0) throw Error("qubit " + std::to_string(q) + " is neither post-selected nor a sentence qubit");
  }
}

std::vector<ParamRef> CircuitIR::param_refs() const {
  std::set<ParamRef> refs;
  for (const Gate& g : gates) {
    if (const auto* r = std::get_if<ParamRef>(&g.param)) refs.insert(*r);
  }
  return {refs.begin(), refs.end()};
}

std::string to_json(const CircuitIR& circuit, int indent) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["qubit_count"] = circuit.qubit_count;
  ordered_json regs = ordered_json::array();
  for (const auto& r : circuit.registers) {
    regs.push_back({{"word", r.word_index}, {"token", r.token}, {"first_qubit", r.first_qubit},
                    {"width", r.width}});
  }
  j["registers"] = regs;
  ordered_json gates = ordered_json::array();
  for (const Gate& g : circuit.gates) {
    ordered_json jg;
    jg["gate"] = std::string(to_string(g.kind));
    if (is_controlled(g.kind)) {
      jg["qubits"] = {g.control, g.target};
    } else {
      jg["qubits"] = {g.target};
    }
    if (const auto* angle = std::get_if<double>(&g.param)) {
      jg["angle"] = *angle;
    } else if (const auto* ref = std::get_if<ParamRef>(&g.param)) {
      jg["param"] = {{"scope", std::string(to_string(ref->scope))}, {"key", ref->key},
                     {"index", ref->index}};
    }
    gates.push_back(std::move(jg));
  }
  j["gates"] = gates;
  j["postselect"] = circuit.postselect;
  j["sentence_qubits"] = circuit.sentence_qubits;
  return j.dump(indent);
}

CircuitIR circuit_from_json(std::string_view text) {
  try {
    const auto j = nlohmann::json::parse(text);
    CircuitIR c;
    c.qubit_count = j.at("qubit_count").get<std::size_t>();
    for (const auto& r : j.at("registers")) {
      c.registers.push_back({r.at("word").get<std::size_t>(), r.at("token").get<std::string>(),
                             r.at("first_qubit").get<std::size_t>(),
                             r.at("width").get<std::size_t>()});
    }
    for (const auto& jg : j.at("gates")) {
      const GateKind kind = parse_gate_kind(jg.at("gate").get<std::string>());
      const auto qubits = jg.at("qubits").get<std::vector<std::size_t>>();
      GateParam param;
      if (jg.contains("angle")) {
        param = jg.at("angle").get<double>();
      } else if (jg.contains("param")) {
        const auto& p = jg.at("param");
        param = ParamRef{parse_param_scope(p.at("scope").get<std::string>()),
                         p.at("key").get<std::string>(), p.at("index").get<int>()};
      }
      if (is_controlled(kind)) {
        if (qubits.size() != 2) throw Error("controlled gate needs two qubits");
        c.gates.push_back(make_controlled(kind, qubits[0], qubits[1], std::move(param)));
      } else {
        if (qubits.size() != 1) throw Error("single-qubit gate needs one qubit");
        c.gates.push_back(make_gate(kind, qubits[0], std::move(param)));
      }
    }
    c.postselect = j.at("postselect").get<std::vector<std::size_t>>();
    c.sentence_qubits = j.at("sentence_qubits").get<std::vector<std::size_t>>();
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("invalid circuit JSON: ") + e.what());
  }
}

double ParamStore::get(const ParamRef& ref) const {
  auto it = values_.find(ref);
  if (it == values_.end()) throw Error("unresolved parameter " + to_string(ref));
  return it->second;
}

void ParamStore::set(const ParamRef& ref, double value) {
  if (!std::isfinite(value)) throw Error("non-finite angle for " + to_string(ref));
  if (mode_ == ParamMode::Fsl && ref.scope == ParamScope::Word) {
    throw Error("word-scoped parameter " + to_string(ref) + " in an fsl store");
  }
  values_[ref] = value;
}

std::vector<ParamRef> ParamStore::trainable_keys() const {
  std::vector<ParamRef> out;
  for (const auto& [ref, _] : values_) {
    if (is_trainable(ref.scope)) out.push_back(ref);
  }
  return out;
}

std::vector<ParamRef> ParamStore::frozen_keys() const {
  std::vector<ParamRef> out;
  for (const auto& [ref, _] : values_) {
    if (!is_trainable(ref.scope)) out.push_back(ref);
  }
  return out;
}

void ParamStore::save(std::ostream& out) const {
  out << "# mode " << (mode_ == ParamMode::Fsl ? "fsl" : "traditional") << '\n';
  char buf[64];
  for (const auto& [ref, value] : values_) {
    std::snprintf(buf, sizeof buf, "%.17g", value);
    out << to_string(ref.scope) << '\t' << ref.key << '\t' << ref.index << '\t' << buf << '\n';
  }
}

ParamStore ParamStore::load(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  std::optional<ParamStore> store;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.rfind("# mode ", 0) == 0) {
      const std::string mode = line.substr(7);
      if (mode == "fsl") {
        store.emplace(ParamMode::Fsl);
      } else if (mode == "traditional") {
        store.emplace(ParamMode::Traditional);
      } else {
        throw ParseError("unknown mode '" + mode + "'", line_no);
      }
      continue;
    }
    if (line.front() == '#') continue;
    if (!store) throw ParseError("missing '# mode' header", line_no);
    std::vector<std::string> cells;
    std::size_t start = 0;
    for (std::size_t pos; (pos = line.find('\t', start)) != std::string::npos; start = pos + 1) {
      cells.push_back(line.substr(start, pos - start));
    }
    cells.push_back(line.substr(start));
    if (cells.size() != 4) throw ParseError("expected scope<TAB>key<TAB>index<TAB>value", line_no);
    try {
      store->set(ParamRef{parse_param_scope(cells[0]), cells[1], std::stoi(cells[2])},
                 std::stod(cells[3]));
    } catch (const ParseError&) {
      throw;
    } catch (const std::exception& e) {
      throw ParseError(e.what(), line_no);
    }
  }
  if (!store) throw ParseError("empty parameter file");
  return std::move(*store);
}

}  // namespace qfsl
