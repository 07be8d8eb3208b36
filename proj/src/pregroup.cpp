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

#include "qfsl/pregroup.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <istream>

#include "qfsl/error.hpp"

namespace qfsl {

bool cancels(const AtomicType& left, const AtomicType& right) noexcept {
  return left.base == right.base && left.adjoint_order + 1 == right.adjoint_order;
}

std::string to_string(const AtomicType& atom) {
  std::string out = atom.base == BaseType::Noun ? "n" : "s";
  if (atom.adjoint_order != 0) {
    out += '^';
    out.append(static_cast<std::size_t>(std::abs(atom.adjoint_order)),
               atom.adjoint_order > 0 ? 'r' : 'l');
  }
  return out;
}

std::string to_string(const PregroupType& type) {
  std::string out;
  for (std::size_t i = 0; i < type.atoms.size(); ++i) {
    if (i > 0) out += '.';
    out += to_string(type.atoms[i]);
  }
  return out;
}

PregroupType pregroup_type_of(PartOfSpeech pos) {
  constexpr AtomicType n{BaseType::Noun, 0};
  constexpr AtomicType nl{BaseType::Noun, -1};
  constexpr AtomicType nr{BaseType::Noun, 1};
  constexpr AtomicType s{BaseType::Sentence, 0};
  switch (pos) {
    case PartOfSpeech::Noun:
      return {{n}};
    case PartOfSpeech::TransitiveVerb:
      return {{nr, s, nl}};
    case PartOfSpeech::Adjective:
      return {{n, nl}};
  }
  return {};
}

std::string_view to_string(PartOfSpeech pos) {
  switch (pos) {
    case PartOfSpeech::Noun:
      return "noun";
    case PartOfSpeech::TransitiveVerb:
      return "tverb";
    case PartOfSpeech::Adjective:
      return "adj";
  }
  return "?";
}

PartOfSpeech parse_part_of_speech(std::string_view text) {
  if (text == "noun") return PartOfSpeech::Noun;
  if (text == "tverb") return PartOfSpeech::TransitiveVerb;
  if (text == "adj") return PartOfSpeech::Adjective;
  throw Error("unknown part of speech '" + std::string(text) + "'");
}

void Lexicon::add(std::string token, PartOfSpeech pos) {
  if (token.empty()) throw Error("empty lexicon token");
  if (entries_.contains(token)) throw Error("duplicate lexicon token '" + token + "'");
  LexiconEntry entry{token, pos, pregroup_type_of(pos)};
  entries_.emplace(std::move(token), std::move(entry));
}

bool Lexicon::contains(std::string_view token) const {
  return entries_.find(token) != entries_.end();
}

const LexiconEntry& Lexicon::at(std::string_view token) const {
  auto it = entries_.find(token);
  if (it == entries_.end()) throw OovError("token '" + std::string(token) + "' is not in the lexicon");
  return it->second;
}

Lexicon load_lexicon(std::istream& in) {
  Lexicon lexicon;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) throw ParseError("expected token<TAB>pos", line_no);
    try {
      lexicon.add(line.substr(0, tab), parse_part_of_speech(line.substr(tab + 1)));
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(e.what(), line_no);
    }
  }
  return lexicon;
}

Lexicon load_lexicon_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open lexicon file '" + path + "'");
  return load_lexicon(in);
}

std::size_t SentenceDiagram::word_of_atom(std::size_t atom) const {
  for (std::size_t w = words.size(); w-- > 0;) {
    if (words[w].first_atom <= atom) return w;
  }
  throw Error("atom index out of range");
}

std::vector<std::string> tokenize(std::string_view sentence) {
  std::vector<std::string> tokens;
  std::string current;
  for (char ch : sentence) {
    const auto c = static_cast<unsigned char>(ch);
    if (std::isalpha(c) != 0) {
      current += static_cast<char>(std::tolower(c));
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  if (tokens.empty()) throw Error("sentence is empty after tokenization");
  return tokens;
}

namespace {

void check_word_pattern(const std::vector<DiagramWord>& words) {
  // Adj* Noun TVerb Adj* Noun
  std::size_t i = 0;
  auto expect = [&](PartOfSpeech pos, const char* what) {
    if (i >= words.size() || words[i].part_of_speech != pos) {
      throw GrammarError(std::string("expected ") + what + " at word " + std::to_string(i + 1));
    }
    ++i;
  };
  auto skip_adjectives = [&] {
    while (i < words.size() && words[i].part_of_speech == PartOfSpeech::Adjective) ++i;
  };
  skip_adjectives();
  expect(PartOfSpeech::Noun, "a subject noun");
  expect(PartOfSpeech::TransitiveVerb, "a transitive verb");
  skip_adjectives();
  expect(PartOfSpeech::Noun, "an object noun");
  if (i != words.size()) throw GrammarError("unexpected words after the object noun");
}

}  // namespace

SentenceDiagram parse(const std::vector<std::string>& tokens, const Lexicon& lexicon) {
  if (tokens.empty()) throw GrammarError("no tokens to parse");
  SentenceDiagram diagram;
  for (const auto& token : tokens) {
    const LexiconEntry& entry = lexicon.at(token);
    diagram.words.push_back({token, entry.part_of_speech, entry.type, diagram.atoms.size()});
    diagram.atoms.insert(diagram.atoms.end(), entry.type.atoms.begin(), entry.type.atoms.end());
  }

  std::vector<std::size_t> live(diagram.atoms.size());
  for (std::size_t i = 0; i < live.size(); ++i) live[i] = i;
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t k = 0; k + 1 < live.size(); ++k) {
      if (cancels(diagram.atoms[live[k]], diagram.atoms[live[k + 1]])) {
        diagram.cups.emplace_back(live[k], live[k + 1]);
        live.erase(live.begin() + static_cast<std::ptrdiff_t>(k),
                   live.begin() + static_cast<std::ptrdiff_t>(k) + 2);
        changed = true;
        break;
      }
    }
  }
  diagram.open_wires = live;

  const bool reduced_to_s = live.size() == 1 && diagram.atoms[live[0]] ==
                                                    AtomicType{BaseType::Sentence, 0};
  if (!reduced_to_s) {
    std::string residue;
    for (std::size_t k = 0; k < live.size(); ++k) {
      if (k > 0) residue += '.';
      residue += to_string(diagram.atoms[live[k]]);
    }
    throw GrammarError("sentence does not reduce to s; residue: " +
                       (residue.empty() ? std::string("(unit)") : residue));
  }
  check_word_pattern(diagram.words);
  return diagram;
}

std::string to_sentence(const SentenceDiagram& diagram) {
  std::string out;
  for (std::size_t i = 0; i < diagram.words.size(); ++i) {
    if (i > 0) out += ' ';
    out += diagram.words[i].token;
  }
  return out;
}

}  // namespace qfsl
