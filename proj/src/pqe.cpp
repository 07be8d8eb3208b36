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

#include "qfsl/pqe.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>

#include "qfsl/error.hpp"

namespace qfsl {

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> unit(const std::vector<double>& v) {
  double n2 = 0.0;
  for (double x : v) n2 += x * x;
  if (n2 == 0.0) throw Error("cannot normalize a zero embedding");
  const double inv = 1.0 / std::sqrt(n2);
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i] * inv;
  return out;
}

}  // namespace

double AffineScaling::apply(std::size_t coordinate, double value) const {
  const double lo = min.at(coordinate);
  const double hi = max.at(coordinate);
  if (!(hi > lo)) return 0.0;
  return std::clamp(kPi * (value - lo) / (hi - lo), 0.0, kPi);
}

void AffineScaling::save(std::ostream& out) const {
  out << "coordinate,min,max\n";
  char buf[96];
  for (std::size_t i = 0; i < 3; ++i) {
    std::snprintf(buf, sizeof buf, "%c,%.17g,%.17g\n", "xyz"[i], min[i], max[i]);
    out << buf;
  }
}

AffineScaling AffineScaling::load(std::istream& in) {
  AffineScaling s;
  std::string line;
  std::size_t line_no = 0;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line.rfind("coordinate", 0) == 0) continue;
    char axis = 0;
    double lo = 0.0;
    double hi = 0.0;
    if (std::sscanf(line.c_str(), "%c,%lf,%lf", &axis, &lo, &hi) != 3) {
      throw ParseError("expected axis,min,max", line_no);
    }
    const auto pos = std::string_view("xyz").find(axis);
    if (pos == std::string_view::npos) throw ParseError("unknown axis", line_no);
    s.min[pos] = lo;
    s.max[pos] = hi;
    ++rows;
  }
  if (rows != 3) throw ParseError("scaling file needs rows x, y and z");
  return s;
}

BasePqeMap::BasePqeMap(ReducedMap coords, AffineScaling scaling)
    : coords_(std::move(coords)), scaling_(scaling) {}

BasePqeMap BasePqeMap::fit(const ReducedMap& coords, std::span<const std::string> training_tokens) {
  if (training_tokens.empty()) throw Error("no training tokens to fit the encoder scaling");
  AffineScaling s;
  bool first = true;
  for (const auto& token : training_tokens) {
    auto it = coords.find(token);
    if (it == coords.end()) throw OovError("no reduced vector for training token '" + token + "'");
    for (std::size_t i = 0; i < 3; ++i) {
      if (first || it->second[i] < s.min[i]) s.min[i] = it->second[i];
      if (first || it->second[i] > s.max[i]) s.max[i] = it->second[i];
    }
    first = false;
  }
  return BasePqeMap(coords, s);
}

std::array<double, 3> BasePqeMap::triplet(std::string_view token) const {
  auto it = coords_.find(token);
  if (it == coords_.end()) throw OovError("no reduced vector for '" + std::string(token) + "'");
  return {scaling_.apply(0, it->second[0]), scaling_.apply(1, it->second[1]),
          scaling_.apply(2, it->second[2])};
}

std::vector<Gate> base_pqe_gates(const BasePqeMap& map, std::string_view token, std::size_t width) {
  const auto t = map.triplet(token);
  return pqe_gates(PqeLayout::EulerBroadcast, width, 0,
                   [&t](int i) -> GateParam { return t[static_cast<std::size_t>(i)]; });
}

StateVector base_pqe_state(const BasePqeMap& map, std::string_view token, std::size_t width) {
  StateVector s(width);
  for (const Gate& g : base_pqe_gates(map, token, width)) apply_gate(s, g);
  return s;
}

OverlapLaw inner_product_law_check(const BasePqeMap& map, std::string_view a, std::string_view b,
                                   std::size_t width) {
  const Complex single = overlap(base_pqe_state(map, a, 1), base_pqe_state(map, b, 1));
  Complex power = 1.0;
  for (std::size_t i = 0; i < width; ++i) power *= single;
  return {overlap(base_pqe_state(map, a, width), base_pqe_state(map, b, width)), power};
}

FeedForwardNet::FeedForwardNet(std::size_t input, std::size_t hidden, std::size_t output)
    : input_(input), hidden_(hidden), output_(output),
      params_(hidden * input + hidden + output * hidden + output, 0.0) {
  if (input == 0 || hidden == 0 || output == 0) throw Error("network layers must be non-empty");
}

FeedForwardNet FeedForwardNet::random(std::size_t input, std::size_t hidden, std::size_t output,
                                      std::uint64_t seed) {
  FeedForwardNet net(input, hidden, output);
  Rng rng(seed);
  const double r1 = 1.0 / std::sqrt(static_cast<double>(input));
  const double r2 = 1.0 / std::sqrt(static_cast<double>(hidden));
  double* p = net.params_.data();
  for (std::size_t i = 0; i < hidden * input; ++i) *p++ = rng.uniform(-r1, r1);
  p += hidden;
  for (std::size_t i = 0; i < output * hidden; ++i) *p++ = rng.uniform(-r2, r2);
  return net;
}

void FeedForwardNet::set_parameters(std::span<const double> values) {
  if (values.size() != params_.size()) throw DimensionError("parameter count mismatch");
  std::copy(values.begin(), values.end(), params_.begin());
}

std::vector<double> FeedForwardNet::forward(std::span<const double> input) const {
  if (input.size() != input_) {
    throw DimensionError("network expects " + std::to_string(input_) + " inputs, got " +
                         std::to_string(input.size()));
  }
  const double* w1 = params_.data();
  const double* b1 = w1 + hidden_ * input_;
  const double* w2 = b1 + hidden_;
  const double* b2 = w2 + output_ * hidden_;
  std::vector<double> h(hidden_);
  for (std::size_t j = 0; j < hidden_; ++j) {
    double z = b1[j];
    const double* row = w1 + j * input_;
    for (std::size_t i = 0; i < input_; ++i) z += row[i] * input[i];
    h[j] = std::tanh(z);
  }
  std::vector<double> out(output_);
  for (std::size_t k = 0; k < output_; ++k) {
    double z = b2[k];
    const double* row = w2 + k * hidden_;
    for (std::size_t j = 0; j < hidden_; ++j) z += row[j] * h[j];
    out[k] = kPi * (1.0 + std::tanh(z));
  }
  return out;
}

void FeedForwardNet::save(std::ostream& out) const {
  out << "# shape " << input_ << ' ' << hidden_ << ' ' << output_ << '\n';
  char buf[64];
  for (double v : params_) {
    std::snprintf(buf, sizeof buf, "%.17g\n", v);
    out << buf;
  }
}

FeedForwardNet FeedForwardNet::load(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw ParseError("empty network file");
  std::istringstream hs(header);
  std::string hash;
  std::string word;
  std::size_t input = 0;
  std::size_t hidden = 0;
  std::size_t output = 0;
  if (!(hs >> hash >> word >> input >> hidden >> output) || hash != "#" || word != "shape") {
    throw ParseError("expected '# shape <input> <hidden> <output>'", 1);
  }
  FeedForwardNet net(input, hidden, output);
  std::size_t i = 0;
  std::string line;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (i >= net.params_.size()) throw ParseError("too many values", line_no);
    try {
      net.params_[i++] = std::stod(line);
    } catch (const std::exception&) {
      throw ParseError("non-numeric value", line_no);
    }
  }
  if (i != net.params_.size()) throw ParseError("too few values for the declared shape");
  return net;
}

std::vector<double> nn_forward(const FeedForwardNet& net, const EmbeddingVector& embedding,
                               std::size_t width) {
  if (embedding.values.size() != net.input_size()) {
    throw DimensionError("embedding dimension " + std::to_string(embedding.values.size()) +
                         " does not match network input " + std::to_string(net.input_size()));
  }
  const std::size_t needed = pqe_param_count(PqeLayout::Circuit4, width);
  if (needed > net.output_size()) {
    throw DimensionError("network head of size " + std::to_string(net.output_size()) +
                         " cannot serve width " + std::to_string(width));
  }
  auto out = net.forward(unit(embedding.values));
  out.resize(needed);
  return out;
}

StateVector circuit4_pqe_state(std::span<const double> angles, std::size_t width) {
  if (angles.size() != pqe_param_count(PqeLayout::Circuit4, width)) {
    throw DimensionError("wrong number of Circuit4 angles");
  }
  StateVector s(width);
  const auto gates = pqe_gates(PqeLayout::Circuit4, width, 0, [&angles](int i) -> GateParam {
    return angles[static_cast<std::size_t>(i)];
  });
  for (const Gate& g : gates) apply_gate(s, g);
  return s;
}

namespace {

/// Normalized inputs and squared-cosine targets, computed once per fit.
struct PairProblem {
  std::vector<std::vector<double>> inputs;
  std::vector<double> targets;  // row-major upper triangle, i < j
  std::vector<std::size_t> widths;

  PairProblem(const Vocabulary& vocab, std::span<const std::size_t> w) : widths(w.begin(), w.end()) {
    if (vocab.size() < 2) throw Error("encoder training needs at least two words");
    if (widths.empty()) throw Error("encoder training needs at least one register width");
    for (const auto& [_, v] : vocab.entries()) inputs.push_back(unit(v.values));
    for (std::size_t i = 0; i < inputs.size(); ++i) {
      for (std::size_t j = i + 1; j < inputs.size(); ++j) {
        double dot = 0.0;
        for (std::size_t k = 0; k < inputs[i].size(); ++k) dot += inputs[i][k] * inputs[j][k];
        targets.push_back(dot * dot);
      }
    }
  }

  double loss(const FeedForwardNet& net) const {
    const std::size_t n = inputs.size();
    std::vector<std::vector<double>> outputs;
    outputs.reserve(n);
    for (const auto& x : inputs) outputs.push_back(net.forward(x));
    double total = 0.0;
    std::vector<StateVector> states(n);
    for (std::size_t width : widths) {
      const std::size_t needed = pqe_param_count(PqeLayout::Circuit4, width);
      if (needed > net.output_size()) throw DimensionError("network head too small for width");
      for (std::size_t i = 0; i < n; ++i) {
        states[i] = circuit4_pqe_state(std::span<const double>(outputs[i]).first(needed), width);
      }
      std::size_t t = 0;
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
          const double diff = fidelity(states[i], states[j]) - targets[t++];
          total += diff * diff;
        }
      }
    }
    return total / static_cast<double>(targets.size() * widths.size());
  }
};

}  // namespace

double nn_pair_mse(const FeedForwardNet& net, const Vocabulary& vocab,
                   std::span<const std::size_t> widths) {
  return PairProblem(vocab, widths).loss(net);
}

SpsaConfig default_nn_spsa() {
  SpsaConfig c;
  c.a = 0.5;
  c.c = 0.05;
  c.A = 50.0;
  return c;
}

NNTrainReport train_nn_pqe(FeedForwardNet& net, const Vocabulary& vocab,
                           std::span<const std::size_t> widths, const SpsaConfig& config,
                           std::size_t steps, std::uint64_t seed) {
  config.validate();
  if (vocab.dimension() != net.input_size()) throw DimensionError("vocabulary/network dimension mismatch");
  const PairProblem problem(vocab, widths);
  NNTrainReport report;
  report.seed = seed;
  report.initial_mse = problem.loss(net);
  if (!std::isfinite(report.initial_mse)) throw Error("non-finite encoder loss");

  FeedForwardNet scratch = net;
  const LossFunction loss = [&](std::span<const double> theta) {
    scratch.set_parameters(theta);
    return problem.loss(scratch);
  };
  std::vector<double> theta(net.parameters().begin(), net.parameters().end());
  Rng rng(seed);
  for (std::size_t k = 0; k < steps; ++k) {
    if (spsa_step(theta, loss, config, k, rng).skipped) ++report.skipped_steps;
  }
  net.set_parameters(theta);
  report.epochs = steps;
  report.final_mse = problem.loss(net);
  if (!std::isfinite(report.final_mse)) throw Error("non-finite encoder loss after training");
  return report;
}

std::vector<double> BasePqeEncoder::angles(std::string_view token, std::size_t) const {
  const auto t = map_.triplet(token);
  return {t.begin(), t.end()};
}

std::vector<double> NnPqeEncoder::angles(std::string_view token, std::size_t width) const {
  return nn_forward(net_, vocab_.at(token), width);
}

}  // namespace qfsl
