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

#include <algorithm>
#include <cmath>
#include <set>

#include <gtest/gtest.h>

#include "qfsl/ansatz.hpp"
#include "qfsl/error.hpp"
#include "qfsl/pregroup.hpp"
#include "qfsl/statevector.hpp"
#include "support/dense_oracle.hpp"

namespace qfsl {
namespace {

std::size_t count_kind(const std::vector<Gate>& gates, GateKind kind) {
  return static_cast<std::size_t>(std::count_if(gates.begin(), gates.end(), [kind](const Gate& g) { return g.kind == kind; }));
}

std::set<ParamRef> refs_of(const std::vector<Gate>& gates) {
  std::set<ParamRef> out;
  for (const Gate& g : gates) {
    if (const auto* r = std::get_if<ParamRef>(&g.param)) out.insert(*r);
  }
  return out;
}

Lexicon mc_lexicon() {
  Lexicon lex;
  for (const char* n : {"man", "woman", "guy", "supper", "soup", "application", "chef"}) lex.add(n, PartOfSpeech::Noun);
  for (const char* v : {"makes", "cooks", "debugs"}) lex.add(v, PartOfSpeech::TransitiveVerb);
  for (const char* a : {"flavorful", "useful", "helpful"}) lex.add(a, PartOfSpeech::Adjective);
  return lex;
}

DiagramWord word(const std::string& token, PartOfSpeech pos) {
  return {token, pos, pregroup_type_of(pos), 0};
}

const auto kIndex = [](int i) -> GateParam { return ParamRef{ParamScope::Word, "w", i}; };

TEST(Ansatz, GateCountFormulas) {
  for (std::size_t n = 1; n <= 5; ++n) {
    const auto iqp = ansatz_gates({AnsatzKind::IQP, 1}, n, 0, kIndex);
    EXPECT_EQ(count_kind(iqp, GateKind::H), n);
    EXPECT_EQ(count_kind(iqp, GateKind::CRz), n - 1);
    EXPECT_EQ(iqp.size(), 2 * n - 1);

    const auto c4 = ansatz_gates({AnsatzKind::Circuit4, 1}, n, 0, kIndex);
    EXPECT_EQ(count_kind(c4, GateKind::Rx), n);
    EXPECT_EQ(count_kind(c4, GateKind::Ry), n);
    EXPECT_EQ(count_kind(c4, GateKind::CRx), n - 1);
    EXPECT_EQ(refs_of(c4).size(), 3 * n - 1);

    const auto sim = ansatz_gates({AnsatzKind::Sim15, 1}, n, 0, kIndex);
    EXPECT_EQ(count_kind(sim, GateKind::Ry), n);
    // A one-qubit register has no ring to close.
    EXPECT_EQ(count_kind(sim, GateKind::CNOT), n == 1 ? 0 : n);
    EXPECT_EQ(refs_of(sim).size(), n);
  }
}

TEST(Ansatz, Sim15RingStartsWithWraparound) {
  const auto g = ansatz_gates({AnsatzKind::Sim15, 1}, 4, 0, kIndex);
  std::vector<std::pair<std::size_t, std::size_t>> cnots;
  for (const Gate& x : g) {
    if (x.kind == GateKind::CNOT) cnots.emplace_back(x.control, x.target);
  }
  const std::vector<std::pair<std::size_t, std::size_t>> want{{3, 0}, {0, 1}, {1, 2}, {2, 3}};
  EXPECT_EQ(cnots, want);
}

TEST(Ansatz, EulerOnlyOnOneQubit) {
  EXPECT_EQ(ansatz_gates({AnsatzKind::Euler, 2}, 1, 0, kIndex).size(), 6U);
  EXPECT_THROW(ansatz_gates({AnsatzKind::Euler, 1}, 2, 0, kIndex), Error);
  EXPECT_THROW(ansatz_gates({AnsatzKind::IQP, 0}, 2, 0, kIndex), Error);
}

TEST(Ansatz, LayersScaleParameters) {
  for (AnsatzKind k : {AnsatzKind::IQP, AnsatzKind::Sim15, AnsatzKind::Circuit4}) {
    for (std::size_t n = 1; n <= 4; ++n) {
      EXPECT_EQ(refs_of(ansatz_gates({k, 3}, n, 0, kIndex)).size(), 3 * params_per_layer(k, n));
    }
  }
}

TEST(WordRegister, IqpNounHasNoParameters) {
  CompileOptions o;
  o.ansatz = {AnsatzKind::IQP, 1};
  const auto g = build_word_register(word("man", PartOfSpeech::Noun), 0, o);
  ASSERT_EQ(g.size(), 1U);
  EXPECT_EQ(g[0].kind, GateKind::H);
  EXPECT_TRUE(refs_of(g).empty());
}

TEST(WordRegister, IqpTransitiveVerb) {
  CompileOptions o;
  o.ansatz = {AnsatzKind::IQP, 1};
  const auto g = build_word_register(word("makes", PartOfSpeech::TransitiveVerb), 0, o);
  ASSERT_EQ(g.size(), 5U);
  for (std::size_t q = 0; q < 3; ++q) EXPECT_EQ(g[q], make_gate(GateKind::H, q));
  EXPECT_EQ(g[3], make_controlled(GateKind::CRz, 0, 1, ParamRef{ParamScope::Word, "makes", 0}));
  EXPECT_EQ(g[4], make_controlled(GateKind::CRz, 1, 2, ParamRef{ParamScope::Word, "makes", 1}));
}

TEST(WordRegister, FslNounTwoQubits) {
  CompileOptions o;
  o.ansatz = {AnsatzKind::Circuit4, 1};
  o.dims.qubits_per_n = 2;
  o.mode = ParamMode::Fsl;
  const auto g = build_word_register(word("supper", PartOfSpeech::Noun), 0, o);
  std::vector<Gate> w;
  std::size_t frozen = 0;
  for (const Gate& x : g) {
    const auto* r = std::get_if<ParamRef>(&x.param);
    ASSERT_NE(r, nullptr);
    if (r->scope == ParamScope::FrozenPqe) {
      ++frozen;
      EXPECT_TRUE(w.empty()) << "encoder gates come first";
    } else {
      EXPECT_EQ(r->scope, ParamScope::PregroupType);
      EXPECT_EQ(r->key, "n");
      w.push_back(x);
    }
  }
  EXPECT_EQ(frozen, 6U);  // Euler triplet on each of the two qubits
  ASSERT_EQ(w.size(), 5U);
  EXPECT_EQ(w[0].kind, GateKind::Rx);
  EXPECT_EQ(w[1].kind, GateKind::Rx);
  EXPECT_EQ(w[2].kind, GateKind::Ry);
  EXPECT_EQ(w[3].kind, GateKind::Ry);
  EXPECT_EQ(w[4].kind, GateKind::CRx);
  EXPECT_EQ(w[4].control, 0U);
  EXPECT_EQ(w[4].target, 1U);
  EXPECT_EQ(refs_of(w).size(), 5U);
}

TEST(WordRegister, FslSameTypeDiffersOnlyInFrozenKeys) {
  CompileOptions o;
  o.mode = ParamMode::Fsl;
  o.dims.qubits_per_n = 2;
  auto a = build_word_register(word("soup", PartOfSpeech::Noun), 0, o);
  auto b = build_word_register(word("supper", PartOfSpeech::Noun), 0, o);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto& ra = std::get<ParamRef>(a[i].param);
    const auto& rb = std::get<ParamRef>(b[i].param);
    EXPECT_EQ(a[i].kind, b[i].kind);
    EXPECT_EQ(a[i].target, b[i].target);
    if (ra.scope == ParamScope::FrozenPqe) {
      EXPECT_NE(ra.key, rb.key);
    } else {
      EXPECT_EQ(ra, rb);
    }
  }
}

TEST(Cup, BellStateIsAcceptedWithCertainty) {
  // (<00| + <11|)/sqrt2 applied to (|00> + |11>)/sqrt2 has amplitude 1.
  const std::vector<std::size_t> l{0};
  const std::vector<std::size_t> r{1};
  const auto cup = realize_cup(l, r);
  CircuitIR c;
  c.qubit_count = 2;
  c.gates = {make_gate(GateKind::H, 0), make_controlled(GateKind::CNOT, 0, 1)};
  c.gates.insert(c.gates.end(), cup.gates.begin(), cup.gates.end());
  c.postselect = cup.postselect;
  const RunOutcome got = run(c, ParamStore{});
  const auto want = testing::dense_run(c, testing::constant_angle);
  EXPECT_NEAR(got.success_probability, want.success, 1e-12);
  EXPECT_NEAR(got.success_probability, 1.0, 1e-12);
  EXPECT_EQ(got.sentence_state.qubit_count(), 0U);
}

TEST(Cup, OrthogonalBellStateIsRejected) {
  const std::vector<std::size_t> l{0};
  const std::vector<std::size_t> r{1};
  const auto cup = realize_cup(l, r);
  CircuitIR c;
  c.qubit_count = 2;
  // (|01> - |10>)/sqrt2 has no overlap with the cup effect.
  c.gates = {make_gate(GateKind::Ry, 1, std::numbers::pi), make_gate(GateKind::H, 0),
             make_controlled(GateKind::CNOT, 0, 1), make_gate(GateKind::Rz, 0, std::numbers::pi)};
  c.gates.insert(c.gates.end(), cup.gates.begin(), cup.gates.end());
  c.postselect = cup.postselect;
  EXPECT_TRUE(run(c, ParamStore{}).degenerate);
}

TEST(Cup, Teleportation) {
  const std::vector<std::size_t> l{0};
  const std::vector<std::size_t> r{1};
  const auto cup = realize_cup(l, r);
  CircuitIR c;
  c.qubit_count = 3;
  c.gates = {make_gate(GateKind::Ry, 0, 1.234), make_gate(GateKind::Rz, 0, -0.4),
             make_gate(GateKind::H, 1), make_controlled(GateKind::CNOT, 1, 2)};
  c.gates.insert(c.gates.end(), cup.gates.begin(), cup.gates.end());
  c.postselect = cup.postselect;
  c.sentence_qubits = {2};
  const RunOutcome got = run(c, ParamStore{});
  const auto want = testing::dense_run(c, testing::constant_angle);
  EXPECT_NEAR(got.success_probability, 0.25, 1e-12);
  EXPECT_NEAR(want.success, 0.25, 1e-12);
  StateVector psi(1);
  apply_gate(psi, make_gate(GateKind::Ry, 0, 1.234));
  apply_gate(psi, make_gate(GateKind::Rz, 0, -0.4));
  EXPECT_NEAR(fidelity(got.sentence_state, psi), 1.0, 1e-12);
  EXPECT_NEAR(std::abs(overlap(psi, got.sentence_state) - Complex(1.0)), 0.0, 1e-12);
}

TEST(Cup, TwoQubitWires) {
  const std::vector<std::size_t> l{0, 1};
  const std::vector<std::size_t> r{2, 3};
  const auto cup = realize_cup(l, r);
  EXPECT_EQ(count_kind(cup.gates, GateKind::CNOT), 2U);
  EXPECT_EQ(count_kind(cup.gates, GateKind::H), 2U);
  EXPECT_EQ(cup.postselect.size(), 4U);
  const std::vector<std::size_t> bad{4};
  EXPECT_THROW(realize_cup(l, bad), DimensionError);
}

TEST(Compile, RegisterArithmetic) {
  const Lexicon lex = mc_lexicon();
  CompileOptions o;
  const CircuitIR a = compile(parse(tokenize("man makes supper"), lex), o);
  EXPECT_EQ(a.qubit_count, 5U);
  EXPECT_EQ(a.postselect.size(), 4U);
  EXPECT_EQ(a.sentence_qubits, std::vector<std::size_t>{2});

  const CircuitIR b = compile(parse(tokenize("woman cooks flavorful soup"), lex), o);
  EXPECT_EQ(b.qubit_count, 7U);
  EXPECT_EQ(b.postselect.size(), 6U);
  EXPECT_EQ(b.sentence_qubits, std::vector<std::size_t>{2});

  o.dims.qubits_per_n = 2;
  const CircuitIR c = compile(parse(tokenize("woman cooks flavorful soup"), lex), o);
  EXPECT_EQ(c.qubit_count, 13U);
  EXPECT_EQ(c.postselect.size(), 12U);
  EXPECT_EQ(c.sentence_qubits, std::vector<std::size_t>{4});
}

TEST(Compile, DeterministicAndTiedInTraditionalMode) {
  Lexicon lex = mc_lexicon();
  CompileOptions o;
  o.ansatz = {AnsatzKind::Sim15, 2};
  const auto d = parse(tokenize("man makes man"), lex);
  const CircuitIR a = compile(d, o);
  EXPECT_EQ(a, compile(d, o));
  // Both occurrences of "man" use the same references.
  std::set<ParamRef> first;
  std::set<ParamRef> last;
  for (const Gate& g : a.gates) {
    const auto* r = std::get_if<ParamRef>(&g.param);
    if (r == nullptr || r->key != "man") continue;
    (g.target == 0 ? first : last).insert(*r);
  }
  EXPECT_FALSE(first.empty());
  EXPECT_EQ(first, last);
}

TEST(Compile, TotalOnCorpusShapes) {
  const Lexicon lex = mc_lexicon();
  for (const char* s : {"man makes supper", "guy debugs helpful application", "woman cooks flavorful soup",
                        "useful chef makes flavorful helpful soup"}) {
    for (AnsatzKind k : {AnsatzKind::IQP, AnsatzKind::Sim15, AnsatzKind::Circuit4}) {
      for (ParamMode m : {ParamMode::Traditional, ParamMode::Fsl}) {
        CompileOptions o;
        o.ansatz = {k, 1};
        o.mode = m;
        EXPECT_NO_THROW(compile(parse(tokenize(s), lex), o).validate()) << s;
      }
    }
  }
}

TEST(Counts, Sim15IsWordsTimesLayersTimesWidth) {
  std::vector<CircuitIR> circuits;
  for (const char* w : {"a", "b", "c"}) {
    CircuitIR c;
    c.qubit_count = 2;
    c.gates = ansatz_gates({AnsatzKind::Sim15, 2}, 2, 0, [w](int i) -> GateParam {
      return ParamRef{ParamScope::Word, w, i};
    });
    c.sentence_qubits = {0, 1};
    circuits.push_back(c);
  }
  EXPECT_EQ(count_trainable(circuits), 12U);
}

TEST(Counts, FslIndependentOfVocabulary) {
  CompileOptions o;
  o.mode = ParamMode::Fsl;
  o.dims.qubits_per_n = 4;
  std::vector<CircuitIR> circuits;
  for (int i = 0; i < 100; ++i) {
    CircuitIR c;
    c.qubit_count = 4;
    c.gates = build_word_register(word("noun" + std::to_string(i), PartOfSpeech::Noun), 0, o);
    c.sentence_qubits = {0, 1, 2, 3};
    circuits.push_back(c);
  }
  EXPECT_EQ(count_trainable(circuits), 11U);
}

TEST(Counts, FslNounPlusVerb) {
  const Lexicon lex = mc_lexicon();
  CompileOptions o;
  o.mode = ParamMode::Fsl;
  const CircuitIR c = compile(parse(tokenize("man makes supper"), lex), o);
  EXPECT_EQ(count_trainable(std::span<const CircuitIR>(&c, 1)), 10U);
  o.dims.qubits_per_n = 2;
  const CircuitIR d = compile(parse(tokenize("man makes supper"), lex), o);
  EXPECT_EQ(count_trainable(std::span<const CircuitIR>(&d, 1)), 19U);
}

}  // namespace
}  // namespace qfsl
