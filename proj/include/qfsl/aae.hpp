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

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "qfsl/ansatz.hpp"
#include "qfsl/spsa.hpp"
#include "qfsl/statevector.hpp"

namespace qfsl {

/// Non-negative parts of a signed vector: data = d_plus - d_minus.
struct SignSplit {
  std::vector<double> d_plus;
  std::vector<double> d_minus;
  std::size_t qubits = 0;
};

/// Throws DimensionError unless the length is a power of two, Error for a
/// zero vector or one whose norm is not 1 within 1e-9.
SignSplit sign_split(std::span<const double> data);

/// |d_plus>|0> + |d_minus>|1> with the ancilla as the last qubit.
StateVector aae_state(const SignSplit& split);

struct AaeRecovery {
  /// Normalized data register after post-selection.
  StateVector state;
  double success_probability = 0.0;
};

/// Hadamard on the ancilla, then post-selection of ancilla = 1, which keeps
/// (d_plus - d_minus) / sqrt(2).
AaeRecovery aae_recover(const SignSplit& split);

/// Data register left by `tmpl` (data qubits then ancilla) with parameters
/// `theta`, followed by H on the ancilla and post-selection of ancilla = 1.
/// Returns |<target|recovered>|^2, or 0 when the branch has no weight.
double aae_fit_fidelity(const CircuitIR& tmpl, std::span<const double> theta,
                        std::span<const double> target);

struct AaeFitOptions {
  AnsatzSpec ansatz{AnsatzKind::Circuit4, 2};
  SpsaConfig spsa{0.2, 0.1, 50.0, 0.602, 0.101};
  std::size_t steps = 2000;
  std::uint64_t seed = 0;
  /// Starting parameters; drawn from U[0, 2 pi) when empty.
  std::vector<double> initial;
};

struct AaeFit {
  std::vector<double> params;
  double initial_fidelity = 0.0;
  double final_fidelity = 0.0;
  std::size_t steps = 0;
};

/// SPSA on 1 - fidelity over an ansatz of width n + 1. Throws Error on a
/// non-finite loss or a target that is not normalized.
AaeFit aae_variational_fit(std::span<const double> target, const AaeFitOptions& options);

}  // namespace qfsl
