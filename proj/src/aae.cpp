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

#include "qfsl/aae.hpp"

#include <bit>
#include <cmath>
#include <numbers>

#include "qfsl/diagnostics.hpp"
#include "qfsl/error.hpp"
#include "qfsl/random.hpp"

namespace qfsl {

namespace {

void check_normalized(std::span<const double> data) {
  if (data.empty() || !std::has_single_bit(data.size())) {
    throw DimensionError("data length must be a power of two, got " + std::to_string(data.size()));
  }
  double n2 = 0.0;
  for (double x : data) {
    if (!std::isfinite(x)) throw Error("non-finite data entry");
    n2 += x * x;
  }
  if (n2 == 0.0) throw Error("cannot encode a zero vector");
  if (std::abs(std::sqrt(n2) - 1.0) > 1e-9) throw Error("data must have unit norm");
}

/// Ancilla branch 1 of `state` after H on the last qubit, unnormalized.
std::vector<Complex> ancilla_one_branch(StateVector state) {
  const std::size_t anc = state.qubit_count() - 1;
  apply_gate(state, make_gate(GateKind::H, anc));
  project(state, anc, 1);
  std::vector<Complex> out(state.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = state[(i << 1) | 1];
  return out;
}

}  // namespace

SignSplit sign_split(std::span<const double> data) {
  check_normalized(data);
  SignSplit s;
  s.qubits = static_cast<std::size_t>(std::countr_zero(data.size()));
  s.d_plus.assign(data.size(), 0.0);
  s.d_minus.assign(data.size(), 0.0);
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (data[i] > 0.0) s.d_plus[i] = data[i];
    if (data[i] < 0.0) s.d_minus[i] = -data[i];
  }
  return s;
}

StateVector aae_state(const SignSplit& split) {
  std::vector<Complex> amps(split.d_plus.size() * 2);
  for (std::size_t i = 0; i < split.d_plus.size(); ++i) {
    amps[i << 1] = split.d_plus[i];
    amps[(i << 1) | 1] = split.d_minus[i];
  }
  return StateVector::from_amplitudes(std::move(amps));
}

AaeRecovery aae_recover(const SignSplit& split) {
  auto branch = ancilla_one_branch(aae_state(split));
  AaeRecovery r;
  r.state = StateVector::from_amplitudes(std::move(branch));
  r.success_probability = r.state.squared_norm();
  if (r.success_probability < kZeroSuccessThreshold) throw Error("ancilla branch has no weight");
  r.state.normalize();
  return r;
}

double aae_fit_fidelity(const CircuitIR& tmpl, std::span<const double> theta,
                        std::span<const double> target) {
  if (target.size() * 2 != (std::size_t{1} << tmpl.qubit_count)) {
    throw DimensionError("template must hold the data register plus one ancilla");
  }
  const auto branch = ancilla_one_branch(template_state(tmpl, theta));
  double n2 = 0.0;
  Complex ov = 0.0;
  for (std::size_t i = 0; i < branch.size(); ++i) {
    n2 += std::norm(branch[i]);
    ov += target[i] * branch[i];
  }
  if (n2 < kZeroSuccessThreshold) return 0.0;
  return std::norm(ov) / n2;
}

AaeFit aae_variational_fit(std::span<const double> target, const AaeFitOptions& options) {
  check_normalized(target);
  options.spsa.validate();
  const std::size_t width = static_cast<std::size_t>(std::countr_zero(target.size())) + 1;
  const CircuitIR tmpl = ansatz_template(options.ansatz, width);
  const std::size_t p = template_param_count(tmpl);

  AaeFit fit;
  Rng rng(options.seed);
  if (options.initial.empty()) {
    fit.params.resize(p);
    for (double& t : fit.params) t = rng.uniform(0.0, 2.0 * std::numbers::pi);
  } else {
    if (options.initial.size() != p) throw DimensionError("initial parameter count mismatch");
    fit.params = options.initial;
  }
  const LossFunction loss = [&](std::span<const double> theta) {
    return 1.0 - aae_fit_fidelity(tmpl, theta, target);
  };
  fit.initial_fidelity = 1.0 - loss(fit.params);
  for (std::size_t k = 0; k < options.steps; ++k) {
    if (spsa_step(fit.params, loss, options.spsa, k, rng).skipped) throw Error("non-finite fit loss");
  }
  fit.steps = options.steps;
  fit.final_fidelity = 1.0 - loss(fit.params);
  return fit;
}

}  // namespace qfsl
