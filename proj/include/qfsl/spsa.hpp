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
#include <functional>
#include <span>
#include <vector>

#include "qfsl/random.hpp"

namespace qfsl {

/// Gain schedule a_k = a / (A + k + 1)^alpha, c_k = c / (k + 1)^gamma.
struct SpsaConfig {
  double a = 0.05;
  double c = 0.06;
  double A = 0.0;
  double alpha = 0.602;
  double gamma = 0.101;

  /// Throws Error unless a > 0, c > 0 and A >= 0.
  void validate() const;
  double step_gain(std::size_t k) const;
  double perturbation_gain(std::size_t k) const;

  friend bool operator==(const SpsaConfig&, const SpsaConfig&) = default;
};

using LossFunction = std::function<double(std::span<const double>)>;

struct SpsaStep {
  double loss_plus = 0.0;
  double loss_minus = 0.0;
  /// True when a perturbed loss was non-finite and no update was made.
  bool skipped = false;
};

/// One simultaneous-perturbation update of `theta` in place, with a
/// Rademacher direction drawn from `rng`.
SpsaStep spsa_step(std::vector<double>& theta, const LossFunction& loss, const SpsaConfig& config,
                   std::size_t k, Rng& rng);

}  // namespace qfsl
