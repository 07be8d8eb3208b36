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

// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <thread>
#include <unistd.h>

#include "qfsl/aae.hpp"
#include "qfsl/ansatz.hpp"
#include "qfsl/diagnostics.hpp"
#include "qfsl/error.hpp"
#include "qfsl/experiment.hpp"
#include "qfsl/pqe.hpp"
#include "qfsl/spsa.hpp"
#include "qfsl/statevector.hpp"
#include "qfsl/trainer.hpp"
#include "support/dense_oracle.hpp"

namespace {

using namespace qfsl;
namespace fs = std::filesystem;

constexpr double kPi = std::numbers::pi;

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::string data_path(const std::string& name) { return std::string(QFSL_DATA_DIR) + "/" + name; }

Verdict simulator_oracle() {
  Rng rng(2026);
  double worst_amp = 0, worst_success = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng.below(4);
    const CircuitIR c = testing::random_circuit(rng, n, 1 + rng.below(50), 2);
    const RunOutcome got = run(c, [](const ParamRef&) -> double { throw Error("unexpected reference"); });
    const auto want = testing::dense_run(c, testing::constant_angle);
    worst_success = std::max(worst_success, std::abs(got.success_probability - want.success));
    if (want.success < kZeroSuccessThreshold) continue;
    for (std::size_t i = 0; i < got.sentence_state.size(); ++i) {
      worst_amp = std::max(worst_amp, std::abs(got.sentence_state[i] - want.sentence(static_cast<Eigen::Index>(i))));
    }
  }
  return {worst_amp < 1e-10 && worst_success < 1e-10,
          fmt("200 circuits, max amplitude error %.2e, max success error %.2e", worst_amp, worst_success)};
}

Verdict inner_product_law() {
  Rng rng(7);
  ReducedMap coords;
  std::vector<std::string> names;
  for (int i = 0; i < 60; ++i) {
    names.push_back("w" + std::to_string(i));
    coords[names.back()] = {rng.normal(), rng.normal(), rng.normal()};
  }
  const BasePqeMap map = BasePqeMap::fit(coords, names);
  double worst = 0;
  for (int pair = 0; pair < 100; ++pair) {
    const std::string& a = names[rng.below(names.size())];
    const std::string& b = names[rng.below(names.size())];
    for (std::size_t n = 1; n <= 3; ++n) {
      const OverlapLaw law = inner_product_law_check(map, a, b, n);
      worst = std::max(worst, std::abs(law.register_overlap - law.power_of_single));
    }
  }
  return {worst < 1e-9, fmt("100 pairs x N=1..3, max |<a|b> - C^N| = %.2e", worst)};
}

// One word register per token, every qubit an output.
CircuitIR word_circuit(const std::string& token, const PregroupType& type, const CompileOptions& opts) {
  CircuitIR c;
  c.qubit_count = opts.dims.width(type);
  c.registers.push_back({0, token, 0, c.qubit_count});
  c.gates = build_word_register({token, PartOfSpeech::Noun, type, 0}, 0, opts);
  for (std::size_t q = 0; q < c.qubit_count; ++q) c.sentence_qubits.push_back(q);
  return c;
}

Verdict parameter_economy() {
  const PregroupType noun = pregroup_type_of(PartOfSpeech::Noun);
  const PregroupType verb = pregroup_type_of(PartOfSpeech::TransitiveVerb);
  const PregroupType adj = pregroup_type_of(PartOfSpeech::Adjective);
  bool ok = true;
  std::string detail;
  for (std::size_t n = 1; n <= 5; ++n) {
    CompileOptions fsl;
    fsl.ansatz = {AnsatzKind::Circuit4, 1};
    fsl.mode = ParamMode::Fsl;
    fsl.dims.qubits_per_n = n;
    std::vector<CircuitIR> small, doubled;
    for (int w = 0; w < 6; ++w) {
      for (const PregroupType* t : {&noun, &verb, &adj}) {
        CircuitIR c = word_circuit("t" + std::to_string(w), *t, fsl);
        (w < 3 ? small : doubled).push_back(c);
        if (w < 3) doubled.push_back(c);
      }
    }
    for (const auto& [key, count] : parameter_counts_by_key(small)) {
      const std::size_t width = key == "n" ? fsl.dims.width(noun) : key == "n.n^l" ? fsl.dims.width(adj)
                                                                                    : fsl.dims.width(verb);
      ok &= count == 3 * width - 1;
    }
    ok &= count_trainable(small) == count_trainable(doubled);
  }
  detail += "fsl: 3N-1 per type for N=1..5, unchanged under vocabulary doubling";

  // Uniform width: M single-type words of width N, L layers.
  for (std::size_t n = 1; n <= 4; ++n) {
    for (int layers = 1; layers <= 3; ++layers) {
      CompileOptions trad;
      trad.ansatz = {AnsatzKind::Sim15, layers};
      trad.dims.qubits_per_n = n;
      std::vector<CircuitIR> circuits;
      const std::size_t m = 7;
      for (std::size_t w = 0; w < m; ++w) circuits.push_back(word_circuit("t" + std::to_string(w), noun, trad));
      ok &= count_trainable(circuits) == m * static_cast<std::size_t>(layers) * n;
    }
  }
  detail += "; traditional Sim15 = M*L*N";
  return {ok, detail};
}

Verdict rounding() {
  RunOutcome outcome;
  outcome.sentence_state = StateVector::from_amplitudes({std::sqrt(0.75), std::sqrt(0.25)});
  outcome.success_probability = 1.0;
  const Prediction p = predict_outcome(outcome);
  return {p.cls == 0 && !p.degenerate, fmt("[sqrt .75, sqrt .25] -> class %d", p.cls)};
}

Verdict expressibility_ordering() {
  const auto euler = expressibility(ansatz_template({AnsatzKind::Euler, 1}, 1), "euler", 1, 5000, 75, 0);
  const auto fixed = expressibility(fixed_state_template(1), "fixed", 1, 5000, 75, 0);
  const auto rz = expressibility(rz_only_template(), "rz", 1, 5000, 75, 0);
  // Haar Monte Carlo: 1e5 pairs of normalized complex Gaussian states.
  double worst = 0;
  for (std::size_t qubits : {1U, 2U}) {
    Rng rng(qubits);
    std::vector<double> f(100000);
    for (double& v : f) {
      const StateVector a = haar_random_state(qubits, rng);
      v = fidelity(a, haar_random_state(qubits, rng));
    }
    const FidelityHistogram h = make_histogram(f, 75);
    const auto p = haar_bin_probabilities(75, std::size_t{1} << qubits);
    for (std::size_t b = 0; b < 75; ++b) {
      worst = std::max(worst, std::abs(static_cast<double>(h.counts[b]) / 1e5 - p[b]));
    }
  }
  const bool ok = euler.kl_divergence < 0.1 && fixed.kl_divergence > 1.0 &&
                  euler.kl_divergence < rz.kl_divergence && worst < 0.02;
  return {ok, fmt("KL euler %.4f, fixed %.4f, rz %.4f; Haar MC max bin deviation %.4f", euler.kl_divergence,
                  fixed.kl_divergence, rz.kl_divergence, worst)};
}

Verdict meyer_wallach_checks() {
  const double r = 1 / std::sqrt(2.0);
  const double q00 = meyer_wallach(StateVector::from_amplitudes({1, 0, 0, 0})).q;
  const double bell = meyer_wallach(StateVector::from_amplitudes({r, 0, 0, r})).q;
  const double plus0 = meyer_wallach(StateVector::from_amplitudes({r, 0, r, 0})).q;
  Rng rng(6);
  double worst = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 2 + rng.below(3);
    StateVector psi = haar_random_state(n, rng);
    const double before = meyer_wallach(psi).q;
    for (std::size_t q = 0; q < n; ++q) {
      for (GateKind k : {GateKind::Rz, GateKind::Ry, GateKind::Rz}) {
        apply_gate(psi, make_gate(k, q), rng.uniform(0, 2 * kPi));
      }
    }
    worst = std::max(worst, std::abs(meyer_wallach(psi).q - before));
  }
  const bool ok = std::abs(q00) < 1e-9 && std::abs(bell - 1) < 1e-9 && std::abs(plus0) < 1e-9 && worst < 1e-9;
  return {ok, fmt("Q(|00>) %.1e, Q(Bell) %.12f, Q(|+0>) %.1e, local-unitary drift %.1e", q00, bell, plus0, worst)};
}

double recovery_error(const std::vector<double>& v, double& success) {
  const AaeRecovery r = aae_recover(sign_split(v));
  success = r.success_probability;
  double worst = 0;
  for (std::size_t i = 0; i < v.size(); ++i) worst = std::max(worst, std::abs(r.state[i] - v[i]));
  return worst;
}

Verdict aae_recovery() {
  const double t = 1 / std::sqrt(3.0);
  double success = 0;
  const double example = recovery_error({t, 0, t, -t}, success);
  bool ok = example < 1e-9 && std::abs(success - 0.5) < 1e-12;
  Rng rng(31);
  double worst = 0;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> v(std::size_t{1} << (1 + rng.below(4)));
    double norm = 0;
    for (double& x : v) norm += (x = rng.normal()) * x;
    for (double& x : v) x /= std::sqrt(norm);
    double s = 0;
    worst = std::max(worst, recovery_error(v, s));
    ok &= std::abs(s - 0.5) < 1e-12;
  }
  ok &= worst < 1e-9;
  return {ok, fmt("example error %.1e (success %.3f), 100 random max error %.1e", example, success, worst)};
}

Verdict spsa_sanity() {
  SpsaConfig cfg{0.05, 0.06, 5.0, 0.602, 0.101};
  Rng rng(0);
  std::vector<double> theta{1.0};
  const LossFunction loss = [](std::span<const double> x) { return x[0] * x[0]; };
  std::size_t reached = 0;
  for (std::size_t k = 0; k < 500; ++k) {
    spsa_step(theta, loss, cfg, k, rng);
    if (reached == 0 && std::abs(theta[0]) < 0.05) reached = k + 1;
  }
  if (reached > 0) return {true, fmt("|theta| < 0.05 after %zu steps", reached)};
  return {false, fmt("|theta| = %.7f after 500 steps; with exact central differences theta_k = prod(1 - 2 a_k), "
                     "which this gain schedule keeps above 0.05",
                     std::abs(theta[0]))};
}

struct DeskRun {
  ExperimentSummary summary;
  double seconds = 0;
};

DeskRun desk(ExperimentMode mode, AnsatzKind ansatz, const fs::path& out) {
  ExperimentConfig c = load_config_file(data_path("desk.ini"));
  c.mode = mode;
  c.ansatz = {ansatz, 1};
  c.output_dir = out.string();
  c.workers = std::max(1U, std::thread::hardware_concurrency());
  const auto t0 = std::chrono::steady_clock::now();
  DeskRun r{run_experiment(c), 0};
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

fs::path scratch_root() {
  const fs::path p = fs::temp_directory_path() / ("qfsl_acceptance_" + std::to_string(::getpid()));
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

Verdict desk_training(const fs::path& root) {
  const DeskRun base = desk(ExperimentMode::FslBase, AnsatzKind::Circuit4, root / "fsl_base");
  const DeskRun trad = desk(ExperimentMode::Traditional, AnsatzKind::Sim15, root / "traditional");
  const DeskRun nn = desk(ExperimentMode::FslNn, AnsatzKind::Circuit4, root / "fsl_nn");
  const double base_train = base.summary.mean_accuracy.at(Split::Train);
  const double trad_train = trad.summary.mean_accuracy.at(Split::Train);
  const double nn_oov = nn.summary.mean_accuracy.at(Split::Oov);
  const double trad_oov = trad.summary.mean_accuracy.at(Split::Oov);
  const std::size_t oov_size = prepare_experiment(load_config_file(data_path("desk.ini"))).split(Split::Oov).size();
  const bool a = base_train >= 0.85 && trad_train >= 0.85;
  const bool b = base.summary.trainable_parameters < trad.summary.trainable_parameters;
  const bool c = oov_size >= 8 && nn_oov - trad_oov >= 0.15;
  return {a && b && c,
          fmt("(a) train acc fsl_base %.3f, traditional %.3f; (b) params %zu < %zu; (c) OOV (%zu sentences) "
              "fsl_nn %.3f vs traditional %.3f; %.0f s + %.0f s + %.0f s",
              base_train, trad_train, base.summary.trainable_parameters, trad.summary.trainable_parameters,
              oov_size, nn_oov, trad_oov, base.seconds, trad.seconds, nn.seconds)};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

Verdict determinism(const fs::path& root) {
  bool ok = true;
  std::string detail;
  for (ExperimentMode mode : {ExperimentMode::FslBase, ExperimentMode::Traditional, ExperimentMode::FslNn}) {
    ExperimentConfig c = load_config_file(data_path("desk.ini"));
    c.mode = mode;
    c.seeds = {77};
    std::string first;
    for (int rep = 0; rep < 2; ++rep) {
      c.output_dir = (root / ("repeat_" + std::string(to_string(mode)) + std::to_string(rep))).string();
      run_experiment(c);
      const std::string csv = slurp(fs::path(c.output_dir) / "metrics_seed77.csv");
      if (rep == 0) first = csv;
      else ok &= !csv.empty() && csv == first;
    }
    detail += std::string(detail.empty() ? "" : ", ") + std::string(to_string(mode)) + " " +
              std::to_string(first.size()) + " bytes";
  }
  return {ok, "seed 77 repeated: " + detail + (ok ? " identical" : " differ")};
}

}  // namespace

int main() {
  const fs::path root = scratch_root();
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
      {"simulator oracle equivalence", simulator_oracle},
      {"inner-product law", inner_product_law},
      {"parameter economy", parameter_economy},
      {"rounding convention", rounding},
      {"expressibility ordering", expressibility_ordering},
      {"Meyer-Wallach", meyer_wallach_checks},
      {"AAE recovery", aae_recovery},
      {"SPSA sanity", spsa_sanity},
      {"desk-scale training", [&] { return desk_training(root); }},
      {"determinism", [&] { return determinism(root); }},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = {false, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s %2zu %s: %s (%.1f s)\n", v.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                v.detail.c_str(), secs);
    std::fflush(stdout);
    failed += v.pass ? 0 : 1;
  }
  fs::remove_all(root);
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
