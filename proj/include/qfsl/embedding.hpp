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
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace qfsl {

/// A classical word vector.
struct EmbeddingVector {
  std::string word;
  std::vector<double> values;
};

using Reduced3 = std::array<double, 3>;
using ReducedMap = std::map<std::string, Reduced3, std::less<>>;

/// Result of projecting a vocabulary onto its top three principal components.
struct Reduction {
  ReducedMap coords;
  /// Number of principal directions with non-negligible variance (0..3).
  /// Components beyond `rank` are zero for every token.
  std::size_t rank = 0;
  bool rank_deficient() const noexcept { return rank < 3; }
  /// Token pairs with distinct embeddings that collapse onto the same
  /// reduced vector (they differ only outside the retained subspace).
  std::vector<std::pair<std::string, std::string>> collisions;
};

struct ReductionOptions {
  /// Unit-normalize every vector before mean-centering.
  bool normalize = false;
};

/// Word vectors of a fixed dimension keyed by token.
class Vocabulary {
 public:
  explicit Vocabulary(std::size_t dimension);

  /// Throws DimensionError on a dimension mismatch, Error on a duplicate token
  /// or a non-finite entry.
  void add(EmbeddingVector vector);

  std::size_t dimension() const noexcept { return dimension_; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  bool contains(std::string_view token) const;
  /// Throws OovError for unknown tokens.
  const EmbeddingVector& at(std::string_view token) const;
  const std::map<std::string, EmbeddingVector, std::less<>>& entries() const noexcept {
    return entries_;
  }
  std::vector<std::string> tokens() const;

  const std::optional<Reduction>& reduced() const noexcept { return reduced_; }
  void set_reduced(Reduction reduction) { reduced_ = std::move(reduction); }

 private:
  std::size_t dimension_;
  std::map<std::string, EmbeddingVector, std::less<>> entries_;
  std::optional<Reduction> reduced_;
};

struct LoadedEmbeddings {
  Vocabulary vocabulary;
  /// Tokens requested through the filter but absent from the stream, sorted.
  std::vector<std::string> missing;
};

/// Reads `token v1 ... vD` lines. When `filter` is given only those tokens are
/// kept and absent ones are reported in `missing`. Throws ParseError for an
/// empty stream, a non-numeric field or an inconsistent dimension.
LoadedEmbeddings load_embeddings(std::istream& in,
                                 const std::set<std::string, std::less<>>* filter = nullptr);
LoadedEmbeddings load_embeddings_file(const std::string& path,
                                      const std::set<std::string, std::less<>>* filter = nullptr);

/// Plain dot product. Throws DimensionError when sizes differ.
double inner_product(const EmbeddingVector& a, const EmbeddingVector& b);
/// Dot product divided by both norms. Throws Error on a zero-norm vector.
double cosine_similarity(const EmbeddingVector& a, const EmbeddingVector& b);

/// Projects the mean-centred vocabulary onto its top three principal
/// components. Each component is oriented so its largest-magnitude loading
/// is positive, which makes the result a deterministic function of the
/// vocabulary contents. Stores the result in `vocab` and returns a copy.
Reduction reduce_dimensions(Vocabulary& vocab, const ReductionOptions& options = {});

/// The `k` tokens most cosine-similar to `word`, excluding `word` itself.
/// Ties are broken lexicographically.
std::vector<std::string> nearest_neighbors(const Vocabulary& vocab, std::string_view word,
                                           std::size_t k);

/// CSV export with header `token,x,y,z`.
void write_reduced_csv(std::ostream& out, const ReducedMap& coords);
ReducedMap read_reduced_csv(std::istream& in);

}  // namespace qfsl
