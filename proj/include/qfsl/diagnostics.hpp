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
#include <iosfwd>
#include <string>
#include <vector>

#include "qfsl/ansatz.hpp"
#include "qfsl/circuit.hpp"
#include "qfsl/random.hpp"
#include "qfsl/statevector.hpp"

namespace qfsl {

/// Number of distinct parameter references in a template.
std::size_t template_param_count(const CircuitIR& tmpl);

/// State of a template whose sorted parameter references take `theta` in
/// order. No post-selection is applied.
StateVector template_state(const CircuitIR& tmpl, std::span<const double> theta);

/// `samples` fidelities |<psi(theta)|psi(phi)>|^2 with theta and phi drawn
/// independently from U[0, 2 pi)^P. Throws Error for samples < 2.
std::vector<double> sample_fidelities(const CircuitIR& tmpl, std::size_t samples, Rng& rng);
std::vector<double> sample_fidelities(const AnsatzSpec& spec, std::size_t width,
                                      std::size_t samples, Rng& rng);

struct FidelityHistogram {
  std::size_t bins = 0;
  std::size_t samples = 0;
  std::vector<std::size_t> counts;

  double lower_edge(std::size_t bin) const { return static_cast<double>(bin) / static_cast<double>(bins); }
  double upper_edge(std::size_t bin) const { return static_cast<double>(bin + 1) / static_cast<double>(bins); }
};

/// Uniform bins on [0, 1]; F = 1 lands in the last bin. Values outside
/// [0, 1] by rounding are clamped.
FidelityHistogram make_histogram(std::span<const double> fidelities, std::size_t bins);

/// Haar fidelity mass per bin for Hilbert-space dimension d >= 2:
/// (1 - lo)^(d-1) - (1 - hi)^(d-1).
std::vector<double> haar_bin_probabilities(std::size_t bins, std::size_t dimension);

/// KL(empirical || Haar), skipping empty bins. Throws Error on an empty
/// histogram or d < 2.
double kl_vs_haar(const FidelityHistogram& hist, std::size_t dimension);

/// Complex Gaussian vector, normalized.
StateVector haar_random_state(std::size_t qubits, Rng& rng);

inline constexpr std::size_t kDefaultBins = 75;
inline constexpr std::size_t kDefaultSamples = 5000;

struct ExpressibilityReport {
  std::string ansatz;
  std::size_t qubits = 0;
  int layers = 0;
  std::size_t samples = 0;
  std::size_t bins = 0;
  std::uint64_t seed = 0;
  double kl_divergence = 0.0;
  FidelityHistogram histogram;
};

ExpressibilityReport expressibility(const CircuitIR& tmpl, std::string label, int layers,
                                    std::size_t samples, std::size_t bins, std::uint64_t seed);

std::string to_json(const ExpressibilityReport& report, int indent = 2);
/// Columns bin,lower,upper,count,empirical,haar.
void write_histogram_csv(std::ostream& out, const FidelityHistogram& hist, std::size_t dimension);

/// One qubit, a single Rz(theta). Its output is |0> up to phase.
CircuitIR rz_only_template();
/// H on every qubit and no parameters: a constant state.
CircuitIR fixed_state_template(std::size_t width);

struct EntanglementQ {
  double q = 0.0;
  /// False for a single-qubit state, where Q is reported as 0.
  bool defined = true;
};

/// Meyer-Wallach Q = (4/n) sum_j D(iota_j(0), iota_j(1)) with the
/// sub-normalized restrictions, using D(u, v) = |u|^2 |v|^2 - |<u|v>|^2.
EntanglementQ meyer_wallach(const StateVector& state);

}  // namespace qfsl
