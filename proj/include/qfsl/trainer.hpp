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
#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qfsl/circuit.hpp"
#include "qfsl/pqe.hpp"
#include "qfsl/spsa.hpp"
#include "qfsl/statevector.hpp"

namespace qfsl {

enum class Split { Train, Dev, Test, Redundancy, Oov };

std::string_view to_string(Split split);
Split parse_split(std::string_view name);
inline constexpr std::array<Split, 5> kAllSplits{Split::Train, Split::Dev, Split::Test,
                                                 Split::Redundancy, Split::Oov};

struct LabeledExample {
  std::string sentence;
  int label = 0;
  /// 1-based line in the source file, 0 when built in memory.
  std::size_t line = 0;
};

struct LabeledCorpus {
  Split split = Split::Train;
  std::vector<LabeledExample> examples;
};

/// `label<TAB>sentence` lines; blank lines and `#` comments are skipped.
/// Throws ParseError with the line number on a bad label or missing tab.
LabeledCorpus load_corpus(std::istream& in, Split split);
LabeledCorpus load_corpus_file(const std::string& path, Split split);

struct Prediction {
  int cls = 0;
  std::array<double, 2> probs{};
  /// Post-selection never succeeded; the class is meaningless.
  bool degenerate = false;
};

/// Argmax of the Born probabilities of a one-qubit sentence state. Ties go
/// to class 0. Throws Error if the sentence register is not one qubit.
Prediction predict_outcome(const RunOutcome& outcome);
Prediction predict(const CircuitIR& circuit, const ParamStore& params);

inline constexpr double kBceEpsilon = 1e-9;

/// -[l log(p1 + eps) + (1 - l) log(p0 + eps)].
double bce_loss(const std::array<double, 2>& probs, int label);
/// bce_loss, or -log(eps) for a degenerate prediction.
double sample_loss(const Prediction& prediction, int label);

struct LabeledCircuit {
  CircuitIR circuit;
  int label = 0;
};

struct EpochMetrics {
  std::size_t epoch = 0;
  std::uint64_t seed = 0;
  double train_loss = 0.0;
  double train_accuracy = 0.0;
  /// NaN when no dev circuits were supplied.
  double dev_accuracy = 0.0;

  friend bool operator==(const EpochMetrics&, const EpochMetrics&) = default;
};

struct TrainConfig {
  SpsaConfig spsa;
  std::size_t epochs = 100;
  /// Larger than the training set means full batch.
  std::size_t batch_size = 700;
};

struct TrainResult {
  /// One entry per epoch, after that epoch's updates.
  std::vector<EpochMetrics> metrics;
  double initial_loss = 0.0;
  std::size_t steps = 0;
  std::size_t skipped_steps = 0;
  /// Trainable references that SPSA was allowed to move.
  std::vector<ParamRef> trained_keys;
};

/// Fills every reference of `circuits` missing from `store`. Trainable
/// references get U[0, 2 pi) drawn from a stream keyed by the reference
/// itself, so the value does not depend on which other circuits exist.
/// Frozen references take the encoder's angles; they require `encoder`.
void initialize_params(ParamStore& store, std::span<const CircuitIR> circuits, std::uint64_t seed,
                       const PqeEncoder* encoder = nullptr);

/// Mean sample loss over the circuits.
double mean_loss(std::span<const LabeledCircuit> circuits, const ParamStore& params);

/// Fraction of correct predictions; degenerate ones count as wrong.
/// Throws Error on an empty set.
double evaluate(std::span<const LabeledCircuit> circuits, const ParamStore& params);

using EpochCallback = std::function<void(const EpochMetrics&)>;

/// Per epoch: seeded shuffle, then one SPSA step per batch on the mean
/// loss. Only trainable references used by `train_set` move; frozen values
/// and parameters of words absent from training keep their initial values.
/// Throws Error on an empty training set, on missing parameters, or when
/// more than half the batches of an epoch produce a non-finite loss.
TrainResult train(std::span<const LabeledCircuit> train_set, std::span<const LabeledCircuit> dev_set,
                  ParamStore& params, const TrainConfig& config, std::uint64_t seed,
                  const EpochCallback& on_epoch = {});

}  // namespace qfsl
