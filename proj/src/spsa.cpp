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

#include "qfsl/spsa.hpp"

#include <cmath>

#include "qfsl/error.hpp"

namespace qfsl {

void SpsaConfig::validate() const {
  if (!(a > 0.0)) throw Error("SPSA gain a must be positive");
  if (!(c > 0.0)) throw Error("SPSA perturbation c must be positive");
  if (!(A >= 0.0)) throw Error("SPSA stability constant A must be non-negative");
}

double SpsaConfig::step_gain(std::size_t k) const {
  return a / std::pow(A + static_cast<double>(k) + 1.0, alpha);
}

double SpsaConfig::perturbation_gain(std::size_t k) const {
  return c / std::pow(static_cast<double>(k) + 1.0, gamma);
}

SpsaStep spsa_step(std::vector<double>& theta, const LossFunction& loss, const SpsaConfig& config,
                   std::size_t k, Rng& rng) {
  const double ak = config.step_gain(k);
  const double ck = config.perturbation_gain(k);
  std::vector<int> delta(theta.size());
  for (int& d : delta) d = rng.rademacher();

  std::vector<double> probe(theta.size());
  for (std::size_t i = 0; i < theta.size(); ++i) probe[i] = theta[i] + ck * delta[i];
  SpsaStep step;
  step.loss_plus = loss(probe);
  for (std::size_t i = 0; i < theta.size(); ++i) probe[i] = theta[i] - ck * delta[i];
  step.loss_minus = loss(probe);
  if (!std::isfinite(step.loss_plus) || !std::isfinite(step.loss_minus)) {
    step.skipped = true;
    return step;
  }
  const double slope = (step.loss_plus - step.loss_minus) / (2.0 * ck);
  // delta_i is +-1, so dividing by it equals multiplying.
  for (std::size_t i = 0; i < theta.size(); ++i) theta[i] -= ak * slope * delta[i];
  return step;
}

}  // namespace qfsl
