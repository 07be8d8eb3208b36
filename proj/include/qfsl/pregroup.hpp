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
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace qfsl {

enum class BaseType { Noun, Sentence };

/// A basic type with its adjoint order: -1 is the left adjoint (n^l),
/// 0 the plain type, +1 the right adjoint (n^r).
struct AtomicType {
  BaseType base = BaseType::Noun;
  int adjoint_order = 0;

  friend bool operator==(const AtomicType&, const AtomicType&) = default;
};

/// a^z followed by a^(z+1) contracts to the unit.
bool cancels(const AtomicType& left, const AtomicType& right) noexcept;

/// Ordered product of atomic types; the empty sequence is the monoidal unit.
struct PregroupType {
  std::vector<AtomicType> atoms;

  friend bool operator==(const PregroupType&, const PregroupType&) = default;
};

/// Renders e.g. "n.n^l" or "n^r.s.n^l".
std::string to_string(const AtomicType& atom);
std::string to_string(const PregroupType& type);

enum class PartOfSpeech { Noun, TransitiveVerb, Adjective };

/// noun -> n, transitive verb -> n^r s n^l, adjective -> n n^l.
PregroupType pregroup_type_of(PartOfSpeech pos);
std::string_view to_string(PartOfSpeech pos);
/// Accepts the lexicon spellings "noun", "tverb", "adj".
PartOfSpeech parse_part_of_speech(std::string_view text);

struct LexiconEntry {
  std::string token;
  PartOfSpeech part_of_speech;
  PregroupType type;
};

class Lexicon {
 public:
  void add(std::string token, PartOfSpeech pos);
  bool contains(std::string_view token) const;
  /// Throws OovError for unknown tokens.
  const LexiconEntry& at(std::string_view token) const;
  std::size_t size() const noexcept { return entries_.size(); }
  const std::map<std::string, LexiconEntry, std::less<>>& entries() const noexcept {
    return entries_;
  }

 private:
  std::map<std::string, LexiconEntry, std::less<>> entries_;
};

/// Lines `token<TAB>pos`; blank lines and lines starting with '#' are skipped.
Lexicon load_lexicon(std::istream& in);
Lexicon load_lexicon_file(const std::string& path);

struct DiagramWord {
  std::string token;
  PartOfSpeech part_of_speech;
  PregroupType type;
  /// Index of the word's first atom in the flattened atom sequence.
  std::size_t first_atom = 0;

  friend bool operator==(const DiagramWord&, const DiagramWord&) = default;
};

/// Words with their types plus the cup wiring that reduces them to `s`.
struct SentenceDiagram {
  std::vector<DiagramWord> words;
  /// Flattened atoms of all words, in order.
  std::vector<AtomicType> atoms;
  /// Atom index pairs (i, j), i < j, in the order the reduction made them.
  std::vector<std::pair<std::size_t, std::size_t>> cups;
  /// Atoms that survive reduction; exactly one `s` for accepted sentences.
  std::vector<std::size_t> open_wires;

  std::size_t sentence_atom() const { return open_wires.front(); }
  /// Word index owning a given atom.
  std::size_t word_of_atom(std::size_t atom) const;

  friend bool operator==(const SentenceDiagram&, const SentenceDiagram&) = default;
};

/// Lower-cased maximal alphabetic runs. Throws Error if nothing remains.
std::vector<std::string> tokenize(std::string_view sentence);

/// Reduces by repeatedly cancelling the leftmost adjacent pair a^z a^(z+1).
/// Throws OovError for tokens missing from the lexicon and GrammarError when
/// the residue is not exactly `s` or the word sequence is not of the form
/// Adj* Noun TVerb Adj* Noun.
SentenceDiagram parse(const std::vector<std::string>& tokens, const Lexicon& lexicon);

/// Space-joined tokens, suitable for re-tokenizing.
std::string to_sentence(const SentenceDiagram& diagram);

}  // namespace qfsl
