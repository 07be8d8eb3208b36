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

#include "qfsl/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <ostream>

#include <json.hpp>

#include "qfsl/error.hpp"

namespace qfsl {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

}  // namespace

std::size_t template_param_count(const CircuitIR& tmpl) { return tmpl.param_refs().size(); }

StateVector template_state(const CircuitIR& tmpl, std::span<const double> theta) {
  const auto refs = tmpl.param_refs();
  if (refs.size() != theta.size()) throw DimensionError("template parameter count mismatch");
  std::map<ParamRef, double> values;
  for (std::size_t i = 0; i < refs.size(); ++i) values.emplace(refs[i], theta[i]);
  return simulate(tmpl, [&values](const ParamRef& r) { return values.at(r); });
}

std::vector<double> sample_fidelities(const CircuitIR& tmpl, std::size_t samples, Rng& rng) {
  if (samples < 2) throw Error("need at least two fidelity samples");
  const std::size_t p = template_param_count(tmpl);
  std::vector<double> theta(p);
  std::vector<double> phi(p);
  std::vector<double> out;
  out.reserve(samples);
  for (std::size_t s = 0; s < samples; ++s) {
    for (double& t : theta) t = rng.uniform(0.0, kTwoPi);
    for (double& t : phi) t = rng.uniform(0.0, kTwoPi);
    out.push_back(fidelity(template_state(tmpl, theta), template_state(tmpl, phi)));
  }
  return out;
}

std::vector<double> sample_fidelities(const AnsatzSpec& spec, std::size_t width,
                                      std::size_t samples, Rng& rng) {
  return sample_fidelities(ansatz_template(spec, width), samples, rng);
}

FidelityHistogram make_histogram(std::span<const double> fidelities, std::size_t bins) {
  if (bins == 0) throw Error("histogram needs at least one bin");
  FidelityHistogram h;
  h.bins = bins;
  h.samples = fidelities.size();
  h.counts.assign(bins, 0);
  for (double f : fidelities) {
    if (!std::isfinite(f)) throw Error("non-finite fidelity");
    const double x = std::clamp(f, 0.0, 1.0);
    auto bin = static_cast<std::size_t>(x * static_cast<double>(bins));
    ++h.counts[std::min(bin, bins - 1)];
  }
  return h;
}

std::vector<double> haar_bin_probabilities(std::size_t bins, std::size_t dimension) {
  if (dimension < 2) throw Error("Haar fidelity law needs dimension >= 2");
  if (bins == 0) throw Error("histogram needs at least one bin");
  const double e = static_cast<double>(dimension - 1);
  std::vector<double> p(bins);
  for (std::size_t i = 0; i < bins; ++i) {
    const double lo = static_cast<double>(i) / static_cast<double>(bins);
    const double hi = static_cast<double>(i + 1) / static_cast<double>(bins);
    p[i] = std::pow(1.0 - lo, e) - std::pow(1.0 - hi, e);
  }
  return p;
}

double kl_vs_haar(const FidelityHistogram& hist, std::size_t dimension) {
  if (hist.samples == 0) throw Error("empty fidelity histogram");
  const auto haar = haar_bin_probabilities(hist.bins, dimension);
  double kl = 0.0;
  for (std::size_t i = 0; i < hist.bins; ++i) {
    if (hist.counts[i] == 0) continue;
    const double p = static_cast<double>(hist.counts[i]) / static_cast<double>(hist.samples);
    kl += p * std::log(p / haar[i]);
  }
  return std::max(kl, 0.0);
}

StateVector haar_random_state(std::size_t qubits, Rng& rng) {
  StateVector s(qubits);
  for (auto& a : s.amplitudes()) {
    const double re = rng.normal();
    const double im = rng.normal();
    a = Complex(re, im);
  }
  s.normalize();
  return s;
}

ExpressibilityReport expressibility(const CircuitIR& tmpl, std::string label, int layers,
                                    std::size_t samples, std::size_t bins, std::uint64_t seed) {
  Rng rng(seed);
  const auto f = sample_fidelities(tmpl, samples, rng);
  ExpressibilityReport r;
  r.ansatz = std::move(label);
  r.qubits = tmpl.qubit_count;
  r.layers = layers;
  r.samples = samples;
  r.bins = bins;
  r.seed = seed;
  r.histogram = make_histogram(f, bins);
  r.kl_divergence = kl_vs_haar(r.histogram, std::size_t{1} << tmpl.qubit_count);
  return r;
}

std::string to_json(const ExpressibilityReport& report, int indent) {
  nlohmann::json j;
  j["ansatz"] = report.ansatz;
  j["qubits"] = report.qubits;
  j["layers"] = report.layers;
  j["samples"] = report.samples;
  j["bins"] = report.bins;
  j["seed"] = report.seed;
  j["kl_divergence"] = report.kl_divergence;
  return j.dump(indent);
}

void write_histogram_csv(std::ostream& out, const FidelityHistogram& hist, std::size_t dimension) {
  const auto haar = haar_bin_probabilities(hist.bins, dimension);
  out << "bin,lower,upper,count,empirical,haar\n";
  for (std::size_t i = 0; i < hist.bins; ++i) {
    const double p = hist.samples == 0 ? 0.0
                                       : static_cast<double>(hist.counts[i]) / static_cast<double>(hist.samples);
    out << i << ',' << hist.lower_edge(i) << ',' << hist.upper_edge(i) << ',' << hist.counts[i]
        << ',' << p << ',' << haar[i] << '\n';
  }
}

CircuitIR rz_only_template() {
  CircuitIR c;
  c.qubit_count = 1;
  c.gates.push_back(make_gate(GateKind::Rz, 0, ParamRef{ParamScope::Word, "theta", 0}));
  c.sentence_qubits = {0};
  return c;
}

CircuitIR fixed_state_template(std::size_t width) {
  CircuitIR c;
  c.qubit_count = width;
  for (std::size_t q = 0; q < width; ++q) {
    c.gates.push_back(make_gate(GateKind::H, q));
    c.sentence_qubits.push_back(q);
  }
  return c;
}

EntanglementQ meyer_wallach(const StateVector& state) {
  const std::size_t n = state.qubit_count();
  if (n < 2) return {0.0, false};
  const std::size_t half = state.size() / 2;
  std::vector<Complex> u(half);
  std::vector<Complex> v(half);
  double total = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t m = state.mask(j);
    const std::size_t low = m - 1;
    for (std::size_t r = 0; r < half; ++r) {
      // Insert a zero bit at the position of qubit j.
      const std::size_t base = ((r & ~low) << 1) | (r & low);
      u[r] = state[base];
      v[r] = state[base | m];
    }
    double uu = 0.0;
    double vv = 0.0;
    Complex uv = 0.0;
    for (std::size_t r = 0; r < half; ++r) {
      uu += std::norm(u[r]);
      vv += std::norm(v[r]);
      uv += std::conj(u[r]) * v[r];
    }
    total += uu * vv - std::norm(uv);
  }
  return {std::clamp(4.0 * total / static_cast<double>(n), 0.0, 1.0), true};
}

}  // namespace qfsl
