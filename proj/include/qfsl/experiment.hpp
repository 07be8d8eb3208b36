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
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qfsl/ansatz.hpp"
#include "qfsl/embedding.hpp"
#include "qfsl/pqe.hpp"
#include "qfsl/pregroup.hpp"
#include "qfsl/trainer.hpp"

namespace qfsl {

enum class ExperimentMode { Traditional, FslBase, FslNn };

std::string_view to_string(ExperimentMode mode);
ExperimentMode parse_experiment_mode(std::string_view name);

/// One experiment. Text form is `key = value` per line with `#` comments;
/// see serialize() for the full key list.
struct ExperimentConfig {
  AnsatzSpec ansatz{AnsatzKind::Sim15, 1};
  std::size_t qubits_per_noun = 1;
  ExperimentMode mode = ExperimentMode::FslBase;
  SpsaConfig spsa;
  std::size_t epochs = 500;
  std::size_t batch_size = 700;
  std::vector<std::uint64_t> seeds{0};
  /// Corpus file per split; empty means the split is not used. Train is
  /// required.
  std::array<std::string, 5> corpora;
  std::string lexicon;
  /// Required by the fsl modes.
  std::string embeddings;
  std::string output_dir;
  std::size_t nn_hidden = kDefaultHiddenWidth;
  std::size_t nn_steps = 1000;
  std::size_t workers = 1;

  std::string& corpus(Split split) { return corpora[static_cast<std::size_t>(split)]; }
  const std::string& corpus(Split split) const { return corpora[static_cast<std::size_t>(split)]; }
};

/// Parses the text form. Relative paths are resolved against `base_dir`
/// when it is non-empty. When `spsa.A` is absent it becomes 0.01 * epochs.
/// Throws ParseError with the line number on unknown keys or bad values.
ExperimentConfig parse_config(std::istream& in, const std::string& base_dir = {});
/// Paths resolve against the file's directory.
ExperimentConfig load_config_file(const std::string& path);
std::string serialize(const ExperimentConfig& config);

/// Throws Error listing every problem: missing files, no seeds, no
/// embeddings in an fsl mode, zero epochs or batch size.
void validate(const ExperimentConfig& config);

/// `QFSL_OUTPUT_DIR` when set, otherwise "qfsl_out".
std::string default_output_dir();

CompileOptions compile_options(const ExperimentConfig& config);

/// Everything a seed needs, loaded and compiled once.
struct PreparedExperiment {
  ExperimentConfig config;
  CompileOptions options;
  Lexicon lexicon;
  /// Circuits per split; absent splits are empty.
  std::array<std::vector<LabeledCircuit>, 5> circuits;
  /// Embeddings of every lexicon token (fsl modes only).
  std::optional<Vocabulary> vocabulary;
  /// Fitted once; fsl_base only.
  std::optional<BasePqeMap> base_map;
  /// Register widths that occur in any circuit.
  std::vector<std::size_t> widths;

  const std::vector<LabeledCircuit>& split(Split s) const { return circuits[static_cast<std::size_t>(s)]; }
  std::vector<CircuitIR> all_circuits() const;
  std::vector<std::string> training_tokens() const;
};

/// Loads and parses every input. Sentences that fail to parse are all
/// reported in one ParseError, each prefixed by file and line.
PreparedExperiment prepare_experiment(const ExperimentConfig& config);

struct SeedResult {
  std::uint64_t seed = 0;
  TrainResult training;
  std::map<Split, double> accuracy;
  ParamStore params;
  std::optional<FeedForwardNet> net;
  std::optional<NNTrainReport> nn_report;
};

/// Builds the encoder for the seed, initializes, trains and evaluates.
SeedResult run_seed(const PreparedExperiment& prepared, std::uint64_t seed);

struct ExperimentSummary {
  std::vector<SeedResult> seeds;
  /// Distinct trainable parameters used by the training circuits.
  std::size_t trainable_parameters = 0;
  /// Same count over the circuits of every split.
  std::size_t trainable_parameters_all_splits = 0;
  std::map<Split, double> mean_accuracy;
};

/// Runs every seed on a pool of `config.workers` threads and writes
/// metrics_seed<k>.csv, params_seed<k>.dat and the encoder artifacts as each
/// seed finishes, then summary.json. Validation happens before any file is
/// written. If a seed fails, the others still write their files and the
/// first error is rethrown.
ExperimentSummary run_experiment(const ExperimentConfig& config, std::ostream* log = nullptr);

/// Header `epoch,seed,train_loss,train_acc,dev_acc`.
void write_metrics_csv(std::ostream& out, std::span<const EpochMetrics> metrics);
std::string summary_json(const ExperimentConfig& config, const ExperimentSummary& summary);

/// Reloads params_seed<k>.dat (and the encoder artifacts when new words
/// need frozen angles) and scores every configured split.
std::map<Split, double> evaluate_saved(const ExperimentConfig& config, std::uint64_t seed);

/// Trainable parameter count grouped by parameter key: pregroup type in
/// fsl mode, token in traditional mode.
std::map<std::string, std::size_t> parameter_counts_by_key(std::span<const CircuitIR> circuits);

}  // namespace qfsl
