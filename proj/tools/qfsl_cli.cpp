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

// qfsl: command-line front end for training, evaluation and diagnostics.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qfsl/aae.hpp"
#include "qfsl/ansatz.hpp"
#include "qfsl/diagnostics.hpp"
#include "qfsl/embedding.hpp"
#include "qfsl/error.hpp"
#include "qfsl/experiment.hpp"
#include "qfsl/pregroup.hpp"

namespace {

using namespace qfsl;

ExperimentConfig config_with_overrides(const std::string& path, const std::string& output_dir,
                                       const std::vector<std::uint64_t>& seeds) {
  ExperimentConfig c = load_config_file(path);
  if (!output_dir.empty()) c.output_dir = output_dir;
  if (!seeds.empty()) c.seeds = seeds;
  return c;
}

int cmd_train(const std::string& config_path, const std::string& output_dir,
              const std::vector<std::uint64_t>& seeds, std::size_t workers) {
  ExperimentConfig c = config_with_overrides(config_path, output_dir, seeds);
  if (workers > 0) c.workers = workers;
  const auto summary = run_experiment(c, &std::cerr);
  std::cout << summary_json(c, summary);
  return 0;
}

int cmd_eval(const std::string& config_path, const std::string& output_dir, std::uint64_t seed) {
  const ExperimentConfig c = config_with_overrides(config_path, output_dir, {});
  nlohmann::ordered_json j;
  j["seed"] = seed;
  for (const auto& [split, acc] : evaluate_saved(c, seed)) j["accuracy"][std::string(to_string(split))] = acc;
  std::cout << j.dump(2) << '\n';
  return 0;
}

CircuitIR expressibility_template(const std::string& name, std::size_t qubits, int layers) {
  if (name == "rz") return rz_only_template();
  if (name == "fixed") return fixed_state_template(qubits);
  return ansatz_template({parse_ansatz_kind(name), layers}, qubits);
}

int cmd_expressibility(const std::vector<std::string>& names, std::size_t qubits, int layers,
                       std::size_t samples, std::size_t bins, std::uint64_t seed,
                       const std::string& histogram_dir) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& name : names) {
    const CircuitIR tmpl = expressibility_template(name, qubits, layers);
    const auto report = expressibility(tmpl, name, layers, samples, bins, seed);
    out.push_back(nlohmann::json::parse(to_json(report)));
    if (!histogram_dir.empty()) {
      const std::string path = histogram_dir + "/histogram_" + name + ".csv";
      std::ofstream csv(path);
      if (!csv) throw Error("cannot write " + path);
      write_histogram_csv(csv, report.histogram, std::size_t{1} << tmpl.qubit_count);
    }
  }
  std::cout << (out.size() == 1 ? out[0] : out).dump(2) << '\n';
  return 0;
}

std::vector<double> parse_vector(const std::string& text) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double x = 0.0;
    try {
      x = std::stod(item, &used);
    } catch (const std::exception&) {
      throw Error("bad vector entry '" + item + "'");
    }
    if (item.find_first_not_of(" \t", used) != std::string::npos) throw Error("bad vector entry '" + item + "'");
    v.push_back(x);
  }
  return v;
}

void print_vector(const char* label, std::span<const double> v) {
  std::printf("%-10s [", label);
  for (std::size_t i = 0; i < v.size(); ++i) std::printf("%s%.12f", i ? ", " : "", v[i]);
  std::printf("]\n");
}

int cmd_aae_demo(const std::string& vector_text, bool normalize, std::size_t fit_steps, std::uint64_t seed) {
  std::vector<double> data;
  if (vector_text.empty()) {
    const double r = 1.0 / std::sqrt(3.0);
    data = {r, 0.0, r, -r};
  } else {
    data = parse_vector(vector_text);
  }
  if (normalize) {
    double n2 = 0.0;
    for (double x : data) n2 += x * x;
    if (n2 == 0.0) throw Error("cannot normalize a zero vector");
    for (double& x : data) x /= std::sqrt(n2);
  }
  const SignSplit split = sign_split(data);
  const AaeRecovery rec = aae_recover(split);
  std::vector<double> recovered;
  double max_err = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    recovered.push_back(rec.state[i].real());
    max_err = std::max(max_err, std::abs(rec.state[i] - data[i]));
  }
  print_vector("input", data);
  print_vector("d_plus", split.d_plus);
  print_vector("d_minus", split.d_minus);
  print_vector("recovered", recovered);
  std::printf("success probability %.12f\nmax entry error %.3e\n", rec.success_probability, max_err);
  if (fit_steps > 0) {
    AaeFitOptions opt;
    opt.steps = fit_steps;
    opt.seed = seed;
    const AaeFit fit = aae_variational_fit(data, opt);
    std::printf("variational fit (circuit4, %d layers, %zu steps): fidelity %.6f -> %.6f\n",
                opt.ansatz.layers, fit.steps, fit.initial_fidelity, fit.final_fidelity);
  }
  return 0;
}

int cmd_counts(const std::string& config_path, const std::string& lexicon_path,
               const std::string& corpus_path, const std::string& ansatz, int layers,
               std::size_t qn, bool fsl) {
  std::vector<CircuitIR> circuits;
  if (!config_path.empty()) {
    const ExperimentConfig c = load_config_file(config_path);
    const PreparedExperiment p = prepare_experiment(c);
    for (const auto& lc : p.split(Split::Train)) circuits.push_back(lc.circuit);
  } else {
    if (lexicon_path.empty() || corpus_path.empty()) throw Error("counts needs --config or --lexicon with --corpus");
    const Lexicon lex = load_lexicon_file(lexicon_path);
    CompileOptions o;
    o.ansatz = {parse_ansatz_kind(ansatz), layers};
    o.dims.qubits_per_n = qn;
    o.mode = fsl ? ParamMode::Fsl : ParamMode::Traditional;
    for (const auto& ex : load_corpus_file(corpus_path, Split::Train).examples) {
      circuits.push_back(compile(parse(tokenize(ex.sentence), lex), o));
    }
  }
  nlohmann::ordered_json j;
  j["per_key"] = nlohmann::ordered_json::object();
  for (const auto& [key, n] : parameter_counts_by_key(circuits)) j["per_key"][key] = n;
  j["total"] = count_trainable(circuits);
  std::cout << j.dump(2) << '\n';
  return 0;
}

int cmd_reduce(const std::string& embeddings, const std::string& lexicon_path, const std::string& out_path,
               bool normalize) {
  std::set<std::string, std::less<>> filter;
  if (!lexicon_path.empty()) {
    const Lexicon lex = load_lexicon_file(lexicon_path);
    for (const auto& [token, _] : lex.entries()) filter.insert(token);
  }
  auto loaded = load_embeddings_file(embeddings, lexicon_path.empty() ? nullptr : &filter);
  for (const auto& m : loaded.missing) std::cerr << "warning: no embedding for '" << m << "'\n";
  const Reduction r = reduce_dimensions(loaded.vocabulary, {normalize});
  if (r.rank_deficient()) std::cerr << "warning: only " << r.rank << " non-degenerate component(s)\n";
  for (const auto& [a, b] : r.collisions) std::cerr << "warning: '" << a << "' and '" << b << "' collide\n";
  if (out_path.empty() || out_path == "-") {
    write_reduced_csv(std::cout, r.coords);
  } else {
    std::ofstream out(out_path);
    if (!out) throw Error("cannot write " + out_path);
    write_reduced_csv(out, r.coords);
  }
  return 0;
}

int cmd_parse_check(const std::string& lexicon_path, const std::vector<std::string>& sentences,
                    const std::string& corpus_path) {
  const Lexicon lex = load_lexicon_file(lexicon_path);
  std::vector<std::pair<std::string, std::size_t>> items;
  for (const auto& s : sentences) items.emplace_back(s, 0);
  if (!corpus_path.empty()) {
    for (const auto& ex : load_corpus_file(corpus_path, Split::Train).examples) items.emplace_back(ex.sentence, ex.line);
  }
  int failures = 0;
  for (const auto& [sentence, line] : items) {
    try {
      const SentenceDiagram d = parse(tokenize(sentence), lex);
      std::cout << "ok    " << to_sentence(d) << " :";
      for (const auto& w : d.words) std::cout << ' ' << to_string(w.type);
      std::cout << " | cups";
      for (const auto& [a, b] : d.cups) std::cout << " (" << a << ',' << b << ')';
      std::cout << '\n';
    } catch (const Error& e) {
      ++failures;
      std::cout << "error ";
      if (line) std::cout << "line " << line << ": ";
      std::cout << sentence << " : " << e.what() << '\n';
    }
  }
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Variational sentence classifiers on a statevector simulator"};
  app.require_subcommand(1);

  std::string config;
  std::string output_dir;
  std::vector<std::uint64_t> seeds;
  std::size_t workers = 0;
  auto* train = app.add_subcommand("train", "train every seed of an experiment and write metrics");
  train->add_option("-c,--config", config, "experiment config file")->required()->check(CLI::ExistingFile);
  train->add_option("-o,--output-dir", output_dir, "output directory (default: config, then $QFSL_OUTPUT_DIR)");
  train->add_option("--seeds", seeds, "override the seed list")->delimiter(',');
  train->add_option("-j,--workers", workers, "parallel seeds");

  std::uint64_t seed = 0;
  auto* eval = app.add_subcommand("eval", "score saved parameters on every configured split");
  eval->add_option("-c,--config", config, "experiment config file")->required()->check(CLI::ExistingFile);
  eval->add_option("-o,--output-dir", output_dir, "directory holding the saved run");
  eval->add_option("--seed", seed, "which seed's parameters to load");

  std::vector<std::string> names{"euler"};
  std::size_t qubits = 1;
  int layers = 1;
  std::size_t samples = kDefaultSamples;
  std::size_t bins = kDefaultBins;
  std::string histogram_dir;
  auto* expr = app.add_subcommand("expressibility", "KL divergence of sampled fidelities from Haar");
  expr->add_option("-a,--ansatz", names, "iqp, sim15, euler, circuit4, rz or fixed")->delimiter(',');
  expr->add_option("-n,--qubits", qubits);
  expr->add_option("-l,--layers", layers);
  expr->add_option("-s,--samples", samples);
  expr->add_option("-b,--bins", bins);
  expr->add_option("--seed", seed);
  expr->add_option("--histogram-dir", histogram_dir, "write histogram_<ansatz>.csv here");

  std::string vector_text;
  bool normalize = false;
  std::size_t fit_steps = 0;
  auto* aae = app.add_subcommand("aae-demo", "sign-split amplitude encoding and recovery");
  aae->add_option("-v,--vector", vector_text, "comma-separated data (default: a 4-entry example)");
  aae->add_flag("--normalize", normalize, "scale the input to unit norm first");
  aae->add_option("--fit-steps", fit_steps, "also run a variational fit for this many SPSA steps");
  aae->add_option("--seed", seed);

  std::string lexicon;
  std::string corpus;
  std::string ansatz = "circuit4";
  std::size_t qn = 1;
  bool traditional = false;
  auto* counts = app.add_subcommand("counts", "trainable parameters per key");
  auto* counts_config = counts->add_option("-c,--config", config, "use the training split of this experiment");
  // The config already fixes everything below.
  for (auto* opt : {counts->add_option("--lexicon", lexicon), counts->add_option("--corpus", corpus),
                    counts->add_option("-a,--ansatz", ansatz), counts->add_option("-l,--layers", layers),
                    counts->add_option("--qubits-per-noun", qn),
                    counts->add_flag("--traditional", traditional, "word-scoped parameters instead of shared W")}) {
    opt->excludes(counts_config);
  }

  std::string embeddings;
  std::string out_path;
  auto* reduce = app.add_subcommand("reduce-embeddings", "project embeddings onto three principal components");
  reduce->add_option("-e,--embeddings", embeddings)->required()->check(CLI::ExistingFile);
  reduce->add_option("--lexicon", lexicon, "keep only lexicon words");
  reduce->add_option("-o,--out", out_path, "CSV path, '-' for stdout");
  reduce->add_flag("--normalize", normalize, "unit-normalize before centering");

  std::vector<std::string> sentences;
  auto* check = app.add_subcommand("parse-check", "parse sentences and print types and cups");
  check->add_option("--lexicon", lexicon)->required()->check(CLI::ExistingFile);
  check->add_option("-s,--sentence", sentences);
  check->add_option("--corpus", corpus);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*train) return cmd_train(config, output_dir, seeds, workers);
    if (*eval) return cmd_eval(config, output_dir, seed);
    if (*expr) return cmd_expressibility(names, qubits, layers, samples, bins, seed, histogram_dir);
    if (*aae) return cmd_aae_demo(vector_text, normalize, fit_steps, seed);
    if (*counts) return cmd_counts(config, lexicon, corpus, ansatz, layers, qn, !traditional);
    if (*reduce) return cmd_reduce(embeddings, lexicon, out_path, normalize);
    if (*check) return cmd_parse_check(lexicon, sentences, corpus);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
