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
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qfsl/ansatz.hpp"
#include "qfsl/embedding.hpp"
#include "qfsl/spsa.hpp"
#include "qfsl/statevector.hpp"

namespace qfsl {

/// Per-coordinate affine map sending [min, max] onto [0, pi].
struct AffineScaling {
  Reduced3 min{};
  Reduced3 max{};

  /// Clamped to [0, pi]. A coordinate with max == min maps to 0.
  double apply(std::size_t coordinate, double value) const;

  void save(std::ostream& out) const;
  static AffineScaling load(std::istream& in);

  friend bool operator==(const AffineScaling&, const AffineScaling&) = default;
};

/// FSL Base encoder: reduced 3-vector -> Euler triplet (theta_x, theta_y,
/// theta_z), broadcast onto every qubit of the register.
class BasePqeMap {
 public:
  BasePqeMap(ReducedMap coords, AffineScaling scaling);

  /// Fits the scaling on `training_tokens` only; other tokens in `coords`
  /// (unseen words) reuse the frozen scaling.
  static BasePqeMap fit(const ReducedMap& coords, std::span<const std::string> training_tokens);

  /// Throws OovError if the token has no reduced vector.
  std::array<double, 3> triplet(std::string_view token) const;

  const AffineScaling& scaling() const noexcept { return scaling_; }
  const ReducedMap& coords() const noexcept { return coords_; }

 private:
  ReducedMap coords_;
  AffineScaling scaling_;
};

/// Frozen gates Rx(tx) Ry(ty) Rz(tz) on qubits 0..width-1 with constant angles.
std::vector<Gate> base_pqe_gates(const BasePqeMap& map, std::string_view token, std::size_t width);
StateVector base_pqe_state(const BasePqeMap& map, std::string_view token, std::size_t width);

struct OverlapLaw {
  Complex register_overlap;  // <psi_a|psi_b> on `width` qubits
  Complex power_of_single;   // (<a|b> on one qubit)^width
};

/// Both sides of the tensor-power overlap identity for two tokens.
OverlapLaw inner_product_law_check(const BasePqeMap& map, std::string_view a, std::string_view b,
                                   std::size_t width);

/// One-hidden-layer network: tanh hidden units, output squashed by
/// x -> pi * (1 + tanh x) into (0, 2 pi).
class FeedForwardNet {
 public:
  /// All weights and biases zero.
  FeedForwardNet(std::size_t input, std::size_t hidden, std::size_t output);
  /// Weights uniform in +-1/sqrt(fan_in), biases zero.
  static FeedForwardNet random(std::size_t input, std::size_t hidden, std::size_t output,
                               std::uint64_t seed);

  std::size_t input_size() const noexcept { return input_; }
  std::size_t hidden_size() const noexcept { return hidden_; }
  std::size_t output_size() const noexcept { return output_; }

  /// Flat layout: W1 (hidden x input, row-major), b1, W2 (output x hidden), b2.
  std::span<double> parameters() noexcept { return params_; }
  std::span<const double> parameters() const noexcept { return params_; }
  void set_parameters(std::span<const double> values);

  std::vector<double> forward(std::span<const double> input) const;

  /// Text dump: `# shape <input> <hidden> <output>` then one value per line.
  void save(std::ostream& out) const;
  static FeedForwardNet load(std::istream& in);

  friend bool operator==(const FeedForwardNet&, const FeedForwardNet&) = default;

 private:
  std::size_t input_;
  std::size_t hidden_;
  std::size_t output_;
  std::vector<double> params_;
};

/// Default hidden width of the encoder network.
inline constexpr std::size_t kDefaultHiddenWidth = 64;

/// Output head size needed to serve registers up to `max_width` qubits.
inline std::size_t nn_output_size(std::size_t max_width) { return 3 * max_width - 1; }

/// Circuit4 angles for a register of `width` qubits: the network is fed the
/// unit-normalized embedding and the first 3*width - 1 outputs are kept.
/// Throws DimensionError on an input size mismatch or a head too small.
std::vector<double> nn_forward(const FeedForwardNet& net, const EmbeddingVector& embedding,
                               std::size_t width);

/// State prepared by the Circuit4 encoding layer with the given angles.
StateVector circuit4_pqe_state(std::span<const double> angles, std::size_t width);

struct NNTrainReport {
  std::size_t epochs = 0;
  double initial_mse = 0.0;
  double final_mse = 0.0;
  std::uint64_t seed = 0;
  std::size_t skipped_steps = 0;
};

/// Mean over word pairs i < j and over `widths` of
/// (fidelity(PQE_i, PQE_j) - (v_i . v_j)^2)^2, with unit-normalized v.
double nn_pair_mse(const FeedForwardNet& net, const Vocabulary& vocab,
                   std::span<const std::size_t> widths);

/// Fits the network to the squared-cosine structure of the vocabulary with
/// SPSA over the flattened weights. Throws Error for fewer than two words
/// or a non-finite starting loss.
NNTrainReport train_nn_pqe(FeedForwardNet& net, const Vocabulary& vocab,
                           std::span<const std::size_t> widths, const SpsaConfig& config,
                           std::size_t steps, std::uint64_t seed);

/// SPSA settings used for encoder training unless overridden.
SpsaConfig default_nn_spsa();

/// Deterministic word -> frozen angle map consumed by the compiler.
class PqeEncoder {
 public:
  virtual ~PqeEncoder() = default;
  virtual PqeLayout layout() const = 0;
  /// Angles for `token` on a register of `width` qubits; size is
  /// pqe_param_count(layout(), width). Throws OovError for unknown tokens.
  virtual std::vector<double> angles(std::string_view token, std::size_t width) const = 0;
};

class BasePqeEncoder final : public PqeEncoder {
 public:
  explicit BasePqeEncoder(BasePqeMap map) : map_(std::move(map)) {}
  PqeLayout layout() const override { return PqeLayout::EulerBroadcast; }
  std::vector<double> angles(std::string_view token, std::size_t width) const override;
  const BasePqeMap& map() const noexcept { return map_; }

 private:
  BasePqeMap map_;
};

class NnPqeEncoder final : public PqeEncoder {
 public:
  NnPqeEncoder(FeedForwardNet net, Vocabulary vocab)
      : net_(std::move(net)), vocab_(std::move(vocab)) {}
  PqeLayout layout() const override { return PqeLayout::Circuit4; }
  std::vector<double> angles(std::string_view token, std::size_t width) const override;
  const FeedForwardNet& net() const noexcept { return net_; }

 private:
  FeedForwardNet net_;
  Vocabulary vocab_;
};

}  // namespace qfsl
