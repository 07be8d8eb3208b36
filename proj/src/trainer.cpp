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

#include "qfsl/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <numbers>
#include <utility>

#include "qfsl/error.hpp"
#include "qfsl/random.hpp"

namespace qfsl {

std::string_view to_string(Split split) {
  switch (split) {
    case Split::Train: return "train";
    case Split::Dev: return "dev";
    case Split::Test: return "test";
    case Split::Redundancy: return "redundancy";
    case Split::Oov: return "oov";
  }
  return "?";
}

Split parse_split(std::string_view name) {
  for (Split s : kAllSplits) {
    if (to_string(s) == name) return s;
  }
  throw Error("unknown split '" + std::string(name) + "'");
}

LabeledCorpus load_corpus(std::istream& in, Split split) {
  LabeledCorpus corpus;
  corpus.split = split;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) throw ParseError("expected label<TAB>sentence", line_no);
    const std::string label = line.substr(0, tab);
    if (label != "0" && label != "1") throw ParseError("label must be 0 or 1, got '" + label + "'", line_no);
    std::string sentence = line.substr(tab + 1);
    if (sentence.find_first_not_of(" \t") == std::string::npos) throw ParseError("empty sentence", line_no);
    corpus.examples.push_back({std::move(sentence), label == "1" ? 1 : 0, line_no});
  }
  return corpus;
}

LabeledCorpus load_corpus_file(const std::string& path, Split split) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open corpus file " + path);
  try {
    return load_corpus(in, split);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

Prediction predict_outcome(const RunOutcome& outcome) {
  if (outcome.sentence_state.qubit_count() != 1) {
    throw Error("prediction needs a one-qubit sentence register");
  }
  Prediction p;
  if (outcome.degenerate) {
    p.degenerate = true;
    return p;
  }
  const auto born = born_probabilities(outcome.sentence_state);
  p.probs = {born[0], born[1]};
  p.cls = p.probs[1] > p.probs[0] ? 1 : 0;
  return p;
}

Prediction predict(const CircuitIR& circuit, const ParamStore& params) {
  return predict_outcome(run(circuit, params));
}

double bce_loss(const std::array<double, 2>& probs, int label) {
  return label == 1 ? -std::log(probs[1] + kBceEpsilon) : -std::log(probs[0] + kBceEpsilon);
}

double sample_loss(const Prediction& prediction, int label) {
  if (prediction.degenerate) return -std::log(kBceEpsilon);
  return bce_loss(prediction.probs, label);
}

void initialize_params(ParamStore& store, std::span<const CircuitIR> circuits, std::uint64_t seed,
                       const PqeEncoder* encoder) {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  for (const CircuitIR& circuit : circuits) {
    for (const WordRegister& reg : circuit.registers) {
      bool has_frozen = false;
      for (const Gate& g : circuit.gates) {
        const auto* ref = std::get_if<ParamRef>(&g.param);
        if (ref != nullptr && ref->scope == ParamScope::FrozenPqe && ref->key == reg.token) {
          has_frozen = true;
          break;
        }
      }
      if (!has_frozen || store.contains({ParamScope::FrozenPqe, reg.token, 0})) continue;
      if (encoder == nullptr) throw Error("frozen encoder parameters need an encoder");
      const auto angles = encoder->angles(reg.token, reg.width);
      for (std::size_t i = 0; i < angles.size(); ++i) {
        store.set({ParamScope::FrozenPqe, reg.token, static_cast<int>(i)}, angles[i]);
      }
    }
    for (const ParamRef& ref : circuit.param_refs()) {
      if (store.contains(ref)) continue;
      if (!is_trainable(ref.scope)) throw Error("no encoder angle for " + to_string(ref));
      Rng rng(derive_seed(seed, to_string(ref)));
      store.set(ref, rng.uniform(0.0, kTwoPi));
    }
  }
}

namespace {

/// A circuit with every angle resolved to a constant or a slot of theta.
struct BoundCircuit {
  const CircuitIR* circuit = nullptr;
  int label = 0;
  std::vector<int> slot;      // -1 for a constant angle
  std::vector<double> angle;  // constant angle, when slot == -1

  RunOutcome run(std::span<const double> theta) const {
    StateVector state(circuit->qubit_count);
    for (std::size_t g = 0; g < circuit->gates.size(); ++g) {
      const double a = slot[g] < 0 ? angle[g] : theta[static_cast<std::size_t>(slot[g])];
      apply_gate(state, circuit->gates[g], a);
    }
    for (std::size_t q : circuit->postselect) project(state, q, 0);
    return extract_outcome(state, circuit->sentence_qubits);
  }

  Prediction predict(std::span<const double> theta) const { return predict_outcome(run(theta)); }
};

BoundCircuit bind_circuit(const LabeledCircuit& lc, const ParamStore& params,
                  const std::map<ParamRef, int>& slots) {
  BoundCircuit b;
  b.circuit = &lc.circuit;
  b.label = lc.label;
  for (const Gate& g : lc.circuit.gates) {
    const auto* ref = std::get_if<ParamRef>(&g.param);
    if (ref != nullptr) {
      auto it = slots.find(*ref);
      if (it != slots.end()) {
        b.slot.push_back(it->second);
        b.angle.push_back(0.0);
        continue;
      }
      b.slot.push_back(-1);
      b.angle.push_back(params.get(*ref));
      continue;
    }
    b.slot.push_back(-1);
    b.angle.push_back(resolve_angle(g, {}));
  }
  return b;
}

struct Scores {
  double loss = 0.0;
  double accuracy = 0.0;
};

Scores score(std::span<const BoundCircuit> set, std::span<const double> theta) {
  Scores s;
  for (const BoundCircuit& b : set) {
    const Prediction p = b.predict(theta);
    s.loss += sample_loss(p, b.label);
    if (!p.degenerate && p.cls == b.label) s.accuracy += 1.0;
  }
  s.loss /= static_cast<double>(set.size());
  s.accuracy /= static_cast<double>(set.size());
  return s;
}

}  // namespace

double mean_loss(std::span<const LabeledCircuit> circuits, const ParamStore& params) {
  if (circuits.empty()) throw Error("cannot compute the loss of an empty set");
  double total = 0.0;
  for (const auto& lc : circuits) total += sample_loss(predict(lc.circuit, params), lc.label);
  return total / static_cast<double>(circuits.size());
}

double evaluate(std::span<const LabeledCircuit> circuits, const ParamStore& params) {
  if (circuits.empty()) throw Error("cannot evaluate an empty split");
  std::size_t correct = 0;
  for (const auto& lc : circuits) {
    const Prediction p = predict(lc.circuit, params);
    if (!p.degenerate && p.cls == lc.label) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(circuits.size());
}

TrainResult train(std::span<const LabeledCircuit> train_set, std::span<const LabeledCircuit> dev_set,
                  ParamStore& params, const TrainConfig& config, std::uint64_t seed,
                  const EpochCallback& on_epoch) {
  if (train_set.empty()) throw Error("training set is empty");
  if (config.epochs == 0) throw Error("epochs must be positive");
  if (config.batch_size == 0) throw Error("batch size must be positive");
  config.spsa.validate();

  TrainResult result;
  std::map<ParamRef, int> slots;
  for (const auto& lc : train_set) {
    for (const ParamRef& ref : lc.circuit.param_refs()) {
      if (is_trainable(ref.scope)) slots.emplace(ref, 0);
    }
  }
  std::vector<double> theta;
  for (auto& [ref, slot] : slots) {
    slot = static_cast<int>(theta.size());
    theta.push_back(params.get(ref));
    result.trained_keys.push_back(ref);
  }

  std::vector<BoundCircuit> bound_train;
  for (const auto& lc : train_set) bound_train.push_back(bind_circuit(lc, params, slots));
  std::vector<BoundCircuit> bound_dev;
  for (const auto& lc : dev_set) bound_dev.push_back(bind_circuit(lc, params, slots));

  result.initial_loss = score(bound_train, theta).loss;

  Rng rng(seed);
  std::vector<std::size_t> order(bound_train.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  const std::size_t batch = std::min(config.batch_size, order.size());
  std::vector<const BoundCircuit*> current;

  const LossFunction batch_loss = [&current](std::span<const double> t) {
    double total = 0.0;
    for (const BoundCircuit* b : current) total += sample_loss(b->predict(t), b->label);
    return total / static_cast<double>(current.size());
  };

  for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    for (std::size_t i = order.size(); i > 1; --i) {
      std::swap(order[i - 1], order[rng.below(i)]);
    }
    std::size_t batches = 0;
    std::size_t skipped = 0;
    for (std::size_t start = 0; start < order.size(); start += batch) {
      current.clear();
      const std::size_t end = std::min(order.size(), start + batch);
      for (std::size_t i = start; i < end; ++i) current.push_back(&bound_train[order[i]]);
      if (spsa_step(theta, batch_loss, config.spsa, result.steps, rng).skipped) ++skipped;
      ++result.steps;
      ++batches;
    }
    result.skipped_steps += skipped;
    if (2 * skipped > batches) {
      throw Error("non-finite loss in more than half the batches of epoch " + std::to_string(epoch));
    }
    const Scores tr = score(bound_train, theta);
    EpochMetrics m;
    m.epoch = epoch;
    m.seed = seed;
    m.train_loss = tr.loss;
    m.train_accuracy = tr.accuracy;
    m.dev_accuracy = bound_dev.empty() ? std::numeric_limits<double>::quiet_NaN()
                                       : score(bound_dev, theta).accuracy;
    result.metrics.push_back(m);
    if (on_epoch) on_epoch(m);
  }

  for (const auto& [ref, slot] : slots) params.set(ref, theta[static_cast<std::size_t>(slot)]);
  return result;
}

}  // namespace qfsl
