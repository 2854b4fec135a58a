// Copyright 2026 The Actionable Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ACTIONABLE_FILTER_PIPELINE_H_
#define ACTIONABLE_FILTER_PIPELINE_H_

#include <filesystem>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "actionable/text_segment.h"

namespace actionable {

// Word lists driving the filter cascade. All entries are lowercase with no
// internal whitespace, and a term belongs to at most one pronoun set.
struct Lexicon {
  std::set<std::string> action_verbs;  // inflections already expanded
  std::set<std::string> subject_pronouns;
  std::set<std::string> object_pronouns;
  std::set<std::string> negations;

  // Throws Error(kLexicon) when an invariant is violated.
  void Validate() const;

  // The built-in lists shipped with the tool.
  static Lexicon Default();

  // Reads action_verbs.txt, subject_pronouns.txt, object_pronouns.txt and
  // negations.txt from `dir`. Action verbs are expanded with
  // ExpandInflections().
  static Lexicon LoadDir(const std::filesystem::path &dir);
};

// One entry per line; '#' starts a comment line; blank lines are skipped.
// Entries are lowercased.
std::vector<std::string> ParseWordList(std::string_view text,
                                       std::string_view source = "<memory>");

// Regular inflections of a base verb: base, third person, past, gerund.
// Irregular forms are not generated.
std::set<std::string> ExpandInflections(std::string_view base_verb);

struct FilterConfig {
  Lexicon lexicon;
  size_t min_tokens = 3;
  size_t max_tokens = 25;
  double min_action_ratio = 0.04;
  bool allow_imperative_as_pronoun_pass = true;

  void Validate() const;
};

enum class FilterStage { kActionVerb, kLength, kPronoun, kNegation };

// "F1_action_verb", "F2_length", "F3_pronoun", "F4_negation".
std::string_view FilterStageName(FilterStage stage);
std::optional<FilterStage> ParseFilterStage(std::string_view name);

struct PronounSignal {
  bool has_subject = false;
  bool has_object = false;
  bool imperative_start = false;

  bool operator==(const PronounSignal &) const = default;
};

struct FilterVerdict {
  bool passed = false;
  std::optional<FilterStage> rejected_by;
  std::vector<std::string> matched_verbs;
  PronounSignal pronoun_signal;
};

struct ActionVerbMatch {
  bool found = false;
  std::vector<std::string> matched;
};

ActionVerbMatch ContainsActionVerb(std::span<const Token> tokens,
                                   const Lexicon &lexicon);

bool LengthOk(std::span<const Token> tokens, size_t matched_count,
              const FilterConfig &cfg);

PronounSignal ComputePronounSignal(std::span<const Token> tokens,
                                   const Lexicon &lexicon);

// Filter 3 decision for a computed signal.
bool PronounPasses(const PronounSignal &signal, const FilterConfig &cfg);

bool ContainsNegation(std::span<const Token> tokens, const Lexicon &lexicon);

// Runs F1 -> F2 -> F3 -> F4, stopping at the first rejection.
FilterVerdict ApplyFilters(const Sentence &sentence, const FilterConfig &cfg);
FilterVerdict ApplyFilters(std::span<const Token> tokens,
                           const FilterConfig &cfg);

}  // namespace actionable

#endif  // ACTIONABLE_FILTER_PIPELINE_H_
