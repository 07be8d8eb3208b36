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

#include "qfsl/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <istream>
#include <mutex>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "qfsl/error.hpp"
#include "qfsl/random.hpp"

namespace qfsl {

namespace fs = std::filesystem;

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

double parse_real(const std::string& v, std::size_t line) {
  char* end = nullptr;
  const double x = std::strtod(v.c_str(), &end);
  if (v.empty() || end != v.c_str() + v.size() || !std::isfinite(x)) {
    throw ParseError("expected a number, got '" + v + "'", line);
  }
  return x;
}

std::uint64_t parse_count(const std::string& v, std::size_t line) {
  if (v.empty() || v.find_first_not_of("0123456789") != std::string::npos) {
    throw ParseError("expected a non-negative integer, got '" + v + "'", line);
  }
  try {
    return std::stoull(v);
  } catch (const std::exception&) {
    throw ParseError("integer out of range: '" + v + "'", line);
  }
}

std::string fmt_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string resolve(const std::string& path, const std::string& base) {
  if (path.empty() || base.empty() || fs::path(path).is_absolute()) return path;
  return (fs::path(base) / path).lexically_normal().string();
}

std::string seed_file(const std::string& dir, const char* stem, std::uint64_t seed, const char* ext) {
  return (fs::path(dir) / (std::string(stem) + "_seed" + std::to_string(seed) + ext)).string();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << text;
  if (!out) throw Error("failed writing " + path);
}

}  // namespace

std::string_view to_string(ExperimentMode mode) {
  switch (mode) {
    case ExperimentMode::Traditional: return "traditional";
    case ExperimentMode::FslBase: return "fsl_base";
    case ExperimentMode::FslNn: return "fsl_nn";
  }
  return "?";
}

ExperimentMode parse_experiment_mode(std::string_view name) {
  for (auto m : {ExperimentMode::Traditional, ExperimentMode::FslBase, ExperimentMode::FslNn}) {
    if (to_string(m) == name) return m;
  }
  throw Error("unknown mode '" + std::string(name) + "' (traditional, fsl_base, fsl_nn)");
}

ExperimentConfig parse_config(std::istream& in, const std::string& base_dir) {
  ExperimentConfig c;
  bool a_given = false;
  std::set<std::string> seen;
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string text = trim(raw);
    if (text.empty() || text.front() == '#') continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos) throw ParseError("expected key = value", line);
    const std::string key = trim(std::string_view(text).substr(0, eq));
    const std::string value = trim(std::string_view(text).substr(eq + 1));
    if (!seen.insert(key).second) throw ParseError("duplicate key '" + key + "'", line);
    try {
      if (key == "ansatz") {
        c.ansatz.kind = parse_ansatz_kind(value);
      } else if (key == "layers") {
        c.ansatz.layers = static_cast<int>(parse_count(value, line));
      } else if (key == "qubits_per_noun") {
        c.qubits_per_noun = parse_count(value, line);
      } else if (key == "mode") {
        c.mode = parse_experiment_mode(value);
      } else if (key == "spsa.a") {
        c.spsa.a = parse_real(value, line);
      } else if (key == "spsa.c") {
        c.spsa.c = parse_real(value, line);
      } else if (key == "spsa.A") {
        c.spsa.A = parse_real(value, line);
        a_given = true;
      } else if (key == "spsa.alpha") {
        c.spsa.alpha = parse_real(value, line);
      } else if (key == "spsa.gamma") {
        c.spsa.gamma = parse_real(value, line);
      } else if (key == "epochs") {
        c.epochs = parse_count(value, line);
      } else if (key == "batch_size") {
        c.batch_size = parse_count(value, line);
      } else if (key == "seeds") {
        c.seeds.clear();
        std::stringstream ss(value);
        std::string item;
        while (std::getline(ss, item, ',')) c.seeds.push_back(parse_count(trim(item), line));
      } else if (key == "lexicon") {
        c.lexicon = resolve(value, base_dir);
      } else if (key == "embeddings") {
        c.embeddings = resolve(value, base_dir);
      } else if (key == "output_dir") {
        c.output_dir = resolve(value, base_dir);
      } else if (key == "nn.hidden") {
        c.nn_hidden = parse_count(value, line);
      } else if (key == "nn.steps") {
        c.nn_steps = parse_count(value, line);
      } else if (key == "workers") {
        c.workers = parse_count(value, line);
      } else {
        bool matched = false;
        for (Split s : kAllSplits) {
          if (key == to_string(s)) {
            c.corpus(s) = resolve(value, base_dir);
            matched = true;
          }
        }
        if (!matched) throw ParseError("unknown key '" + key + "'", line);
      }
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(e.what(), line);
    }
  }
  if (!a_given) c.spsa.A = 0.01 * static_cast<double>(c.epochs);
  return c;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config file " + path);
  try {
    return parse_config(in, fs::path(path).parent_path().string());
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

std::string serialize(const ExperimentConfig& c) {
  std::ostringstream out;
  out << "ansatz = " << to_string(c.ansatz.kind) << '\n'
      << "layers = " << c.ansatz.layers << '\n'
      << "qubits_per_noun = " << c.qubits_per_noun << '\n'
      << "mode = " << to_string(c.mode) << '\n'
      << "spsa.a = " << fmt_real(c.spsa.a) << '\n'
      << "spsa.c = " << fmt_real(c.spsa.c) << '\n'
      << "spsa.A = " << fmt_real(c.spsa.A) << '\n'
      << "spsa.alpha = " << fmt_real(c.spsa.alpha) << '\n'
      << "spsa.gamma = " << fmt_real(c.spsa.gamma) << '\n'
      << "epochs = " << c.epochs << '\n'
      << "batch_size = " << c.batch_size << '\n'
      << "seeds = ";
  for (std::size_t i = 0; i < c.seeds.size(); ++i) out << (i ? "," : "") << c.seeds[i];
  out << '\n';
  for (Split s : kAllSplits) {
    if (!c.corpus(s).empty()) out << to_string(s) << " = " << c.corpus(s) << '\n';
  }
  if (!c.lexicon.empty()) out << "lexicon = " << c.lexicon << '\n';
  if (!c.embeddings.empty()) out << "embeddings = " << c.embeddings << '\n';
  if (!c.output_dir.empty()) out << "output_dir = " << c.output_dir << '\n';
  out << "nn.hidden = " << c.nn_hidden << '\n'
      << "nn.steps = " << c.nn_steps << '\n'
      << "workers = " << c.workers << '\n';
  return out.str();
}

void validate(const ExperimentConfig& c) {
  std::vector<std::string> problems;
  auto need_file = [&problems](const std::string& what, const std::string& path) {
    if (path.empty()) {
      problems.push_back(what + " path is not set");
    } else if (!fs::is_regular_file(path)) {
      problems.push_back(what + " file not found: " + path);
    }
  };
  need_file("train corpus", c.corpus(Split::Train));
  for (Split s : kAllSplits) {
    if (s != Split::Train && !c.corpus(s).empty()) need_file(std::string(to_string(s)) + " corpus", c.corpus(s));
  }
  need_file("lexicon", c.lexicon);
  if (c.mode != ExperimentMode::Traditional || !c.embeddings.empty()) need_file("embeddings", c.embeddings);
  if (c.seeds.empty()) problems.push_back("no seeds given");
  if (c.epochs == 0) problems.push_back("epochs must be positive");
  if (c.batch_size == 0) problems.push_back("batch_size must be positive");
  if (c.qubits_per_noun == 0) problems.push_back("qubits_per_noun must be positive");
  if (c.ansatz.layers < 1) problems.push_back("layers must be at least 1");
  if (c.mode == ExperimentMode::FslNn && c.nn_hidden == 0) problems.push_back("nn.hidden must be positive");
  try {
    c.spsa.validate();
  } catch (const Error& e) {
    problems.push_back(e.what());
  }
  if (problems.empty()) return;
  std::string msg = "invalid experiment config:";
  for (const auto& p : problems) msg += "\n  " + p;
  throw Error(msg);
}

std::string default_output_dir() {
  const char* env = std::getenv("QFSL_OUTPUT_DIR");
  return env != nullptr && *env != '\0' ? std::string(env) : std::string("qfsl_out");
}

CompileOptions compile_options(const ExperimentConfig& config) {
  CompileOptions o;
  o.ansatz = config.ansatz;
  o.dims.qubits_per_n = config.qubits_per_noun;
  o.mode = config.mode == ExperimentMode::Traditional ? ParamMode::Traditional : ParamMode::Fsl;
  o.pqe = config.mode == ExperimentMode::FslNn ? PqeLayout::Circuit4 : PqeLayout::EulerBroadcast;
  return o;
}

std::vector<CircuitIR> PreparedExperiment::all_circuits() const {
  std::vector<CircuitIR> out;
  for (const auto& split_circuits : circuits) {
    for (const auto& lc : split_circuits) out.push_back(lc.circuit);
  }
  return out;
}

std::vector<std::string> PreparedExperiment::training_tokens() const {
  std::set<std::string> tokens;
  for (const auto& lc : split(Split::Train)) {
    for (const auto& reg : lc.circuit.registers) tokens.insert(reg.token);
  }
  return {tokens.begin(), tokens.end()};
}

PreparedExperiment prepare_experiment(const ExperimentConfig& config) {
  validate(config);
  PreparedExperiment p;
  p.config = config;
  p.options = compile_options(config);
  p.lexicon = load_lexicon_file(config.lexicon);

  std::vector<std::string> errors;
  std::set<std::size_t> widths;
  for (Split s : kAllSplits) {
    if (config.corpus(s).empty()) continue;
    const LabeledCorpus corpus = load_corpus_file(config.corpus(s), s);
    auto& out = p.circuits[static_cast<std::size_t>(s)];
    for (const auto& ex : corpus.examples) {
      try {
        LabeledCircuit lc{compile(parse(tokenize(ex.sentence), p.lexicon), p.options), ex.label};
        for (const auto& reg : lc.circuit.registers) widths.insert(reg.width);
        out.push_back(std::move(lc));
      } catch (const Error& e) {
        errors.push_back(config.corpus(s) + ":" + std::to_string(ex.line) + ": " + e.what());
      }
    }
  }
  if (!errors.empty()) {
    std::string msg = std::to_string(errors.size()) + " sentence(s) failed to parse:";
    for (const auto& e : errors) msg += "\n  " + e;
    throw ParseError(msg);
  }
  if (p.split(Split::Train).empty()) throw Error("training corpus has no sentences");
  p.widths.assign(widths.begin(), widths.end());

  if (!config.embeddings.empty()) {
    std::set<std::string, std::less<>> wanted;
    for (const auto& [token, _] : p.lexicon.entries()) wanted.insert(token);
    auto loaded = load_embeddings_file(config.embeddings, &wanted);
    if (!loaded.missing.empty() && config.mode != ExperimentMode::Traditional) {
      std::string msg = "no embedding for lexicon word(s):";
      for (const auto& m : loaded.missing) msg += " " + m;
      throw OovError(msg);
    }
    p.vocabulary = std::move(loaded.vocabulary);
  }
  if (config.mode == ExperimentMode::FslBase) {
    const Reduction reduction = reduce_dimensions(*p.vocabulary);
    p.base_map = BasePqeMap::fit(reduction.coords, p.training_tokens());
  }
  return p;
}

SeedResult run_seed(const PreparedExperiment& p, std::uint64_t seed) {
  SeedResult r;
  r.seed = seed;
  r.params = ParamStore(p.options.mode);
  std::unique_ptr<PqeEncoder> encoder;
  if (p.config.mode == ExperimentMode::FslBase) {
    encoder = std::make_unique<BasePqeEncoder>(*p.base_map);
  } else if (p.config.mode == ExperimentMode::FslNn) {
    const std::size_t max_width = p.widths.back();
    FeedForwardNet net = FeedForwardNet::random(p.vocabulary->dimension(), p.config.nn_hidden,
                                                nn_output_size(max_width), derive_seed(seed, "nn-init"));
    r.nn_report = train_nn_pqe(net, *p.vocabulary, p.widths, default_nn_spsa(), p.config.nn_steps,
                               derive_seed(seed, "nn-spsa"));
    r.net = net;
    encoder = std::make_unique<NnPqeEncoder>(std::move(net), *p.vocabulary);
  }
  initialize_params(r.params, p.all_circuits(), seed, encoder.get());

  TrainConfig tc;
  tc.spsa = p.config.spsa;
  tc.epochs = p.config.epochs;
  tc.batch_size = p.config.batch_size;
  r.training = train(p.split(Split::Train), p.split(Split::Dev), r.params, tc, seed);
  for (Split s : kAllSplits) {
    if (!p.split(s).empty()) r.accuracy[s] = evaluate(p.split(s), r.params);
  }
  return r;
}

void write_metrics_csv(std::ostream& out, std::span<const EpochMetrics> metrics) {
  out << "epoch,seed,train_loss,train_acc,dev_acc\n";
  for (const auto& m : metrics) {
    out << m.epoch << ',' << m.seed << ',' << fmt_real(m.train_loss) << ','
        << fmt_real(m.train_accuracy) << ',' << fmt_real(m.dev_accuracy) << '\n';
  }
}

std::string summary_json(const ExperimentConfig& config, const ExperimentSummary& summary) {
  nlohmann::ordered_json j;
  j["mode"] = to_string(config.mode);
  j["ansatz"] = to_string(config.ansatz.kind);
  j["layers"] = config.ansatz.layers;
  j["qubits_per_noun"] = config.qubits_per_noun;
  j["epochs"] = config.epochs;
  j["batch_size"] = config.batch_size;
  j["trainable_parameters"] = summary.trainable_parameters;
  j["trainable_parameters_all_splits"] = summary.trainable_parameters_all_splits;
  nlohmann::ordered_json mean = nlohmann::ordered_json::object();
  for (const auto& [s, acc] : summary.mean_accuracy) mean[std::string(to_string(s))] = acc;
  j["mean_accuracy"] = mean;
  nlohmann::ordered_json runs = nlohmann::ordered_json::array();
  for (const auto& r : summary.seeds) {
    nlohmann::ordered_json run;
    run["seed"] = r.seed;
    nlohmann::ordered_json acc = nlohmann::ordered_json::object();
    for (const auto& [s, a] : r.accuracy) acc[std::string(to_string(s))] = a;
    run["accuracy"] = acc;
    run["initial_train_loss"] = r.training.initial_loss;
    run["final_train_loss"] = r.training.metrics.empty() ? r.training.initial_loss
                                                         : r.training.metrics.back().train_loss;
    run["spsa_steps"] = r.training.steps;
    run["skipped_steps"] = r.training.skipped_steps;
    if (r.nn_report) {
      run["encoder"] = {{"steps", r.nn_report->epochs},
                        {"initial_mse", r.nn_report->initial_mse},
                        {"final_mse", r.nn_report->final_mse}};
    }
    runs.push_back(run);
  }
  j["runs"] = runs;
  return j.dump(2) + "\n";
}

ExperimentSummary run_experiment(const ExperimentConfig& config, std::ostream* log) {
  const PreparedExperiment prepared = prepare_experiment(config);
  const std::string dir = config.output_dir.empty() ? default_output_dir() : config.output_dir;
  fs::create_directories(dir);

  std::mutex log_mutex;
  auto note = [&](const std::string& msg) {
    if (log == nullptr) return;
    std::lock_guard lock(log_mutex);
    *log << msg << '\n' << std::flush;
  };

  if (prepared.base_map) {
    std::ostringstream reduced;
    write_reduced_csv(reduced, prepared.base_map->coords());
    write_file((fs::path(dir) / "reduced.csv").string(), reduced.str());
    std::ostringstream scaling;
    prepared.base_map->scaling().save(scaling);
    write_file((fs::path(dir) / "scaling.csv").string(), scaling.str());
  }

  ExperimentSummary summary;
  {
    std::vector<CircuitIR> train_circuits;
    for (const auto& lc : prepared.split(Split::Train)) train_circuits.push_back(lc.circuit);
    summary.trainable_parameters = count_trainable(train_circuits);
    summary.trainable_parameters_all_splits = count_trainable(prepared.all_circuits());
  }

  const std::size_t n = config.seeds.size();
  std::vector<std::optional<SeedResult>> results(n);
  std::vector<std::exception_ptr> failures(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i = next++; i < n; i = next++) {
      const std::uint64_t seed = config.seeds[i];
      try {
        const auto t0 = std::chrono::steady_clock::now();
        SeedResult r = run_seed(prepared, seed);
        std::ostringstream csv;
        write_metrics_csv(csv, r.training.metrics);
        write_file(seed_file(dir, "metrics", seed, ".csv"), csv.str());
        std::ostringstream params;
        r.params.save(params);
        write_file(seed_file(dir, "params", seed, ".dat"), params.str());
        if (r.net) {
          std::ostringstream net;
          r.net->save(net);
          write_file(seed_file(dir, "nn", seed, ".txt"), net.str());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::ostringstream msg;
        msg << "seed " << seed << ": train_acc " << r.accuracy[Split::Train] << ", final loss "
            << r.training.metrics.back().train_loss << " (" << secs << " s)";
        note(msg.str());
        results[i] = std::move(r);
      } catch (...) {
        failures[i] = std::current_exception();
        note("seed " + std::to_string(seed) + ": failed");
      }
    }
  };
  const std::size_t threads = std::clamp<std::size_t>(config.workers, 1, n);
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::map<Split, std::size_t> counts;
  for (auto& r : results) {
    if (!r) continue;
    for (const auto& [s, acc] : r->accuracy) {
      summary.mean_accuracy[s] += acc;
      ++counts[s];
    }
    summary.seeds.push_back(std::move(*r));
  }
  for (auto& [s, total] : summary.mean_accuracy) total /= static_cast<double>(counts[s]);
  write_file((fs::path(dir) / "summary.json").string(), summary_json(config, summary));
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }
  return summary;
}

std::map<Split, double> evaluate_saved(const ExperimentConfig& config, std::uint64_t seed) {
  const PreparedExperiment prepared = prepare_experiment(config);
  const std::string dir = config.output_dir.empty() ? default_output_dir() : config.output_dir;
  const std::string params_path = seed_file(dir, "params", seed, ".dat");
  std::ifstream in(params_path);
  if (!in) throw Error("no saved parameters at " + params_path);
  ParamStore params = ParamStore::load(in);

  std::unique_ptr<PqeEncoder> encoder;
  if (config.mode == ExperimentMode::FslBase) {
    encoder = std::make_unique<BasePqeEncoder>(*prepared.base_map);
  } else if (config.mode == ExperimentMode::FslNn) {
    const std::string net_path = seed_file(dir, "nn", seed, ".txt");
    std::ifstream net_in(net_path);
    if (!net_in) throw Error("no saved encoder network at " + net_path);
    encoder = std::make_unique<NnPqeEncoder>(FeedForwardNet::load(net_in), *prepared.vocabulary);
  }
  initialize_params(params, prepared.all_circuits(), seed, encoder.get());

  std::map<Split, double> acc;
  for (Split s : kAllSplits) {
    if (!prepared.split(s).empty()) acc[s] = evaluate(prepared.split(s), params);
  }
  return acc;
}

std::map<std::string, std::size_t> parameter_counts_by_key(std::span<const CircuitIR> circuits) {
  std::set<ParamRef> refs;
  for (const auto& c : circuits) {
    for (const auto& r : c.param_refs()) {
      if (is_trainable(r.scope)) refs.insert(r);
    }
  }
  std::map<std::string, std::size_t> counts;
  for (const auto& r : refs) ++counts[r.key];
  return counts;
}

}  // namespace qfsl
