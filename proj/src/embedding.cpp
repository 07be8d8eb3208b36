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

#include "qfsl/embedding.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <Eigen/Dense>

#include "qfsl/error.hpp"

namespace qfsl {
namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) fields.push_back(line.substr(i, j - i));
    i = j;
  }
  return fields;
}

double parse_number(std::string_view field, std::size_t line) {
  double value = 0.0;
  const auto* first = field.data();
  const auto* last = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw ParseError("non-numeric field '" + std::string(field) + "'", line);
  }
  return value;
}

double squared_norm(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return s;
}

}  // namespace

Vocabulary::Vocabulary(std::size_t dimension) : dimension_(dimension) {
  if (dimension == 0) throw DimensionError("embedding dimension must be positive");
}

void Vocabulary::add(EmbeddingVector vector) {
  if (vector.values.size() != dimension_) {
    throw DimensionError("token '" + vector.word + "' has dimension " +
                         std::to_string(vector.values.size()) + ", expected " +
                         std::to_string(dimension_));
  }
  for (double x : vector.values) {
    if (!std::isfinite(x)) throw Error("token '" + vector.word + "' has a non-finite entry");
  }
  if (entries_.contains(vector.word)) throw Error("duplicate token '" + vector.word + "'");
  reduced_.reset();
  std::string key = vector.word;
  entries_.emplace(std::move(key), std::move(vector));
}

bool Vocabulary::contains(std::string_view token) const {
  return entries_.find(token) != entries_.end();
}

const EmbeddingVector& Vocabulary::at(std::string_view token) const {
  auto it = entries_.find(token);
  if (it == entries_.end()) throw OovError("no embedding for '" + std::string(token) + "'");
  return it->second;
}

std::vector<std::string> Vocabulary::tokens() const {
  std::vector<std::string> out;
  out.reserve(entries_.size());
  for (const auto& [token, _] : entries_) out.push_back(token);
  return out;
}

LoadedEmbeddings load_embeddings(std::istream& in,
                                 const std::set<std::string, std::less<>>* filter) {
  std::optional<Vocabulary> vocab;
  std::size_t dimension = 0;
  std::size_t line_no = 0;
  std::string line;
  std::set<std::string, std::less<>> seen;
  while (std::getline(in, line)) {
    ++line_no;
    auto fields = split_fields(line);
    if (fields.empty()) continue;
    if (fields.size() < 2) throw ParseError("expected a token followed by values", line_no);
    const std::size_t d = fields.size() - 1;
    if (dimension == 0) {
      dimension = d;
    } else if (d != dimension) {
      throw ParseError("inconsistent dimension " + std::to_string(d) + " (expected " +
                           std::to_string(dimension) + ")",
                       line_no);
    }
    // Every line is validated, even the filtered-out ones.
    EmbeddingVector v{std::string(fields[0]), {}};
    v.values.reserve(d);
    for (std::size_t i = 1; i < fields.size(); ++i) v.values.push_back(parse_number(fields[i], line_no));
    if (filter != nullptr && !filter->contains(v.word)) continue;
    if (!vocab) vocab.emplace(dimension);
    seen.insert(v.word);
    vocab->add(std::move(v));
  }
  if (dimension == 0) throw ParseError("empty embedding stream");
  LoadedEmbeddings result{vocab ? std::move(*vocab) : Vocabulary(dimension), {}};
  if (filter != nullptr) {
    for (const auto& token : *filter) {
      if (!seen.contains(token)) result.missing.push_back(token);
    }
  }
  return result;
}

LoadedEmbeddings load_embeddings_file(const std::string& path,
                                      const std::set<std::string, std::less<>>* filter) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open embedding file '" + path + "'");
  return load_embeddings(in, filter);
}

double inner_product(const EmbeddingVector& a, const EmbeddingVector& b) {
  if (a.values.size() != b.values.size()) {
    throw DimensionError("inner product of vectors with dimensions " +
                         std::to_string(a.values.size()) + " and " +
                         std::to_string(b.values.size()));
  }
  double s = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) s += a.values[i] * b.values[i];
  return s;
}

double cosine_similarity(const EmbeddingVector& a, const EmbeddingVector& b) {
  const double dot = inner_product(a, b);
  const double na = std::sqrt(squared_norm(a.values));
  const double nb = std::sqrt(squared_norm(b.values));
  if (na == 0.0 || nb == 0.0) throw Error("cosine similarity of a zero-norm vector");
  return std::clamp(dot / (na * nb), -1.0, 1.0);
}

Reduction reduce_dimensions(Vocabulary& vocab, const ReductionOptions& options) {
  if (vocab.empty()) throw Error("cannot reduce an empty vocabulary");
  const std::size_t d = vocab.dimension();
  if (d < 3) throw DimensionError("reduction to 3 components needs dimension >= 3");
  const std::size_t n = vocab.size();

  Eigen::MatrixXd x(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  std::vector<const std::string*> order;
  order.reserve(n);
  Eigen::Index row = 0;
  for (const auto& [token, v] : vocab.entries()) {
    double scale = 1.0;
    if (options.normalize) {
      const double norm = std::sqrt(squared_norm(v.values));
      if (norm == 0.0) throw Error("cannot normalize zero vector for '" + token + "'");
      scale = 1.0 / norm;
    }
    for (std::size_t j = 0; j < d; ++j) x(row, static_cast<Eigen::Index>(j)) = v.values[j] * scale;
    order.push_back(&token);
    ++row;
  }
  x.rowwise() -= x.colwise().mean();

  const Eigen::MatrixXd cov = x.transpose() * x;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  if (solver.info() != Eigen::Success) throw Error("eigendecomposition failed");
  const Eigen::VectorXd& evals = solver.eigenvalues();  // ascending
  const Eigen::MatrixXd& evecs = solver.eigenvectors();
  const double top = std::max(evals(evals.size() - 1), 0.0);
  const double cutoff = 1e-10 * top;

  Reduction result;
  Eigen::MatrixXd axes = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(d), 3);
  for (Eigen::Index k = 0; k < 3 && k < evals.size(); ++k) {
    const Eigen::Index idx = evals.size() - 1 - k;
    if (top <= 0.0 || evals(idx) <= cutoff) break;
    Eigen::VectorXd axis = evecs.col(idx);
    Eigen::Index arg = 0;
    axis.cwiseAbs().maxCoeff(&arg);
    if (axis(arg) < 0.0) axis = -axis;
    axes.col(k) = axis;
    ++result.rank;
  }
  const Eigen::MatrixXd scores = x * axes;
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    result.coords.emplace(*order[i], Reduced3{scores(r, 0), scores(r, 1), scores(r, 2)});
  }
  // Collisions: identical reduced vectors from distinct originals.
  std::map<Reduced3, const std::string*> first_seen;
  for (std::size_t i = 0; i < n; ++i) {
    const Reduced3& c = result.coords.at(*order[i]);
    auto [it, inserted] = first_seen.emplace(c, order[i]);
    if (!inserted && vocab.at(*it->second).values != vocab.at(*order[i]).values) {
      result.collisions.emplace_back(*it->second, *order[i]);
    }
  }
  vocab.set_reduced(result);
  return result;
}

std::vector<std::string> nearest_neighbors(const Vocabulary& vocab, std::string_view word,
                                           std::size_t k) {
  const EmbeddingVector& query = vocab.at(word);
  if (k == 0) throw Error("k must be positive");
  if (k >= vocab.size()) {
    throw Error("k = " + std::to_string(k) + " must be smaller than the vocabulary size " +
                std::to_string(vocab.size()));
  }
  std::vector<std::pair<double, const std::string*>> scored;
  scored.reserve(vocab.size() - 1);
  for (const auto& [token, v] : vocab.entries()) {
    if (token == word) continue;
    scored.emplace_back(cosine_similarity(query, v), &token);
  }
  std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return *a.second < *b.second;
  });
  std::vector<std::string> out;
  out.reserve(k);
  for (std::size_t i = 0; i < k; ++i) out.push_back(*scored[i].second);
  return out;
}

void write_reduced_csv(std::ostream& out, const ReducedMap& coords) {
  out << "token,x,y,z\n";
  char buf[64];
  for (const auto& [token, c] : coords) {
    out << token;
    for (double v : c) {
      std::snprintf(buf, sizeof buf, ",%.17g", v);
      out << buf;
    }
    out << '\n';
  }
}

ReducedMap read_reduced_csv(std::istream& in) {
  ReducedMap out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || (line_no == 1 && line == "token,x,y,z")) continue;
    std::vector<std::string_view> cells;
    std::string_view rest(line);
    for (std::size_t pos; (pos = rest.find(',')) != std::string_view::npos;) {
      cells.push_back(rest.substr(0, pos));
      rest.remove_prefix(pos + 1);
    }
    cells.push_back(rest);
    if (cells.size() != 4) throw ParseError("expected token,x,y,z", line_no);
    Reduced3 c{};
    for (std::size_t i = 0; i < 3; ++i) c[i] = parse_number(cells[i + 1], line_no);
    out.emplace(std::string(cells[0]), c);
  }
  return out;
}

}  // namespace qfsl
