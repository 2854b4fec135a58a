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

#include "actionable/filter_pipeline.h"

#include <array>

#include "actionable/error.h"
#include "actionable/util.h"

namespace actionable {
namespace {

// Base forms; the first seven are the documented sample verbs.
constexpr std::string_view kDefaultActionVerbs[] = {
    "arrive", "build", "close", "define", "formulate", "propose", "kickstart",
    "approve", "arrange", "assign", "attend", "book", "bring", "call",
    "cancel", "check", "collect", "complete", "confirm", "contact",
    "coordinate", "create", "deliver", "discuss", "distribute", "draft",
    "email", "execute", "fax", "file", "fill", "finalize", "finish", "fix",
    "follow", "forward", "get", "give", "handle", "implement", "invite",
    "let", "make", "meet", "notify", "organize", "pay", "prepare", "print",
    "process", "provide", "reply", "reschedule", "respond", "return",
    "review", "revise", "run", "schedule", "send", "set", "share", "ship",
    "sign", "submit", "take", "update", "verify", "write",
    // Irregular past forms.
    "brought", "built", "gave", "given", "got", "made", "met", "paid", "ran",
    "sent", "taken", "took", "wrote", "written",
};

constexpr std::string_view kDefaultSubjectPronouns[] = {"i", "we", "you",
                                                        "he", "she", "they"};
constexpr std::string_view kDefaultObjectPronouns[] = {"me", "her", "him",
                                                       "us", "them"};
constexpr std::string_view kDefaultNegations[] = {
    "shouldn't", "couldn't", "wouldn't", "not", "never", "don't", "doesn't",
    "didn't", "won't", "can't", "cannot", "isn't", "aren't",
};

bool Contains(const std::set<std::string> &set, const std::string &key) {
  return set.find(key) != set.end();
}

bool EndsWith(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() &&
         s.substr(s.size() - suffix.size()) == suffix;
}

bool IsVowel(char c) {
  return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u';
}

void ValidateEntries(const std::set<std::string> &set, std::string_view name) {
  for (const std::string &w : set) {
    if (w.empty()) {
      throw Error(ErrorCode::kLexicon, std::string(name) + ": empty entry");
    }
    for (char c : w) {
      if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
        throw Error(ErrorCode::kLexicon, std::string(name) + ": entry '" + w +
                                             "' contains whitespace");
      }
      if (c >= 'A' && c <= 'Z') {
        throw Error(ErrorCode::kLexicon,
                    std::string(name) + ": entry '" + w + "' is not lowercase");
      }
    }
  }
}

}  // namespace

void Lexicon::Validate() const {
  ValidateEntries(action_verbs, "action_verbs");
  ValidateEntries(subject_pronouns, "subject_pronouns");
  ValidateEntries(object_pronouns, "object_pronouns");
  ValidateEntries(negations, "negations");
  for (const std::string &w : subject_pronouns) {
    if (Contains(object_pronouns, w)) {
      throw Error(ErrorCode::kLexicon,
                  "'" + w + "' is both a subject and an object pronoun");
    }
  }
}

Lexicon Lexicon::Default() {
  Lexicon lex;
  for (std::string_view v : kDefaultActionVerbs) {
    lex.action_verbs.merge(ExpandInflections(v));
  }
  for (std::string_view w : kDefaultSubjectPronouns) {
    lex.subject_pronouns.emplace(w);
  }
  for (std::string_view w : kDefaultObjectPronouns) {
    lex.object_pronouns.emplace(w);
  }
  for (std::string_view w : kDefaultNegations) lex.negations.emplace(w);
  return lex;
}

std::vector<std::string> ParseWordList(std::string_view text,
                                       std::string_view source) {
  std::vector<std::string> words;
  size_t lineno = 0;
  for (std::string_view line : SplitLines(text)) {
    ++lineno;
    std::string_view t = TrimView(line);
    if (t.empty() || t[0] == '#') continue;
    if (t.find_first_of(" \t") != std::string_view::npos) {
      throw Error(ErrorCode::kLexicon, std::string(source) + ":" +
                                           std::to_string(lineno) +
                                           ": entry contains whitespace");
    }
    words.push_back(AsciiLower(t));
  }
  return words;
}

Lexicon Lexicon::LoadDir(const std::filesystem::path &dir) {
  auto read = [&dir](const char *name) {
    const auto path = dir / name;
    return ParseWordList(ReadFile(path), path.string());
  };
  Lexicon lex;
  for (const std::string &v : read("action_verbs.txt")) {
    lex.action_verbs.merge(ExpandInflections(v));
  }
  for (std::string &w : read("subject_pronouns.txt")) {
    lex.subject_pronouns.insert(std::move(w));
  }
  for (std::string &w : read("object_pronouns.txt")) {
    lex.object_pronouns.insert(std::move(w));
  }
  for (std::string &w : read("negations.txt")) lex.negations.insert(std::move(w));
  lex.Validate();
  return lex;
}

std::set<std::string> ExpandInflections(std::string_view base_verb) {
  const std::string base = AsciiLower(base_verb);
  std::set<std::string> forms;
  if (base.empty()) return forms;
  forms.insert(base);

  const bool consonant_y =
      base.size() >= 2 && base.back() == 'y' && !IsVowel(base[base.size() - 2]);
  const std::string stem_y = base.substr(0, base.size() - 1);

  if (consonant_y) {
    forms.insert(stem_y + "ies");
  } else if (EndsWith(base, "s") || EndsWith(base, "x") ||
             EndsWith(base, "z") || EndsWith(base, "ch") ||
             EndsWith(base, "sh")) {
    forms.insert(base + "es");
  } else {
    forms.insert(base + "s");
  }

  if (base.back() == 'e') {
    forms.insert(base + "d");
  } else if (consonant_y) {
    forms.insert(stem_y + "ied");
  } else {
    forms.insert(base + "ed");
  }

  if (EndsWith(base, "ie")) {
    forms.insert(base.substr(0, base.size() - 2) + "ying");
  } else if (base.back() == 'e' && base.size() > 2 && !EndsWith(base, "ee") &&
             !EndsWith(base, "oe") && !EndsWith(base, "ye")) {
    forms.insert(base.substr(0, base.size() - 1) + "ing");
  } else {
    forms.insert(base + "ing");
  }
  return forms;
}

void FilterConfig::Validate() const {
  if (min_tokens < 1 || min_tokens > max_tokens) {
    throw Error(ErrorCode::kInvalidArgument,
                "require 1 <= min_tokens <= max_tokens");
  }
  if (!(min_action_ratio >= 0.0 && min_action_ratio <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "min_action_ratio must be in [0, 1]");
  }
  lexicon.Validate();
}

std::string_view FilterStageName(FilterStage stage) {
  switch (stage) {
    case FilterStage::kActionVerb: return "F1_action_verb";
    case FilterStage::kLength: return "F2_length";
    case FilterStage::kPronoun: return "F3_pronoun";
    case FilterStage::kNegation: return "F4_negation";
  }
  return "";
}

std::optional<FilterStage> ParseFilterStage(std::string_view name) {
  for (FilterStage s : {FilterStage::kActionVerb, FilterStage::kLength,
                        FilterStage::kPronoun, FilterStage::kNegation}) {
    if (FilterStageName(s) == name) return s;
  }
  return std::nullopt;
}

ActionVerbMatch ContainsActionVerb(std::span<const Token> tokens,
                                   const Lexicon &lexicon) {
  ActionVerbMatch m;
  for (const Token &t : tokens) {
    if (Contains(lexicon.action_verbs, t.lower)) m.matched.push_back(t.lower);
  }
  m.found = !m.matched.empty();
  return m;
}

bool LengthOk(std::span<const Token> tokens, size_t matched_count,
              const FilterConfig &cfg) {
  const size_t n = tokens.size();
  if (n < cfg.min_tokens || n > cfg.max_tokens) return false;
  return static_cast<double>(matched_count) / static_cast<double>(n) >=
         cfg.min_action_ratio;
}

PronounSignal ComputePronounSignal(std::span<const Token> tokens,
                                   const Lexicon &lexicon) {
  PronounSignal s;
  for (const Token &t : tokens) {
    if (Contains(lexicon.subject_pronouns, t.lower)) s.has_subject = true;
    if (Contains(lexicon.object_pronouns, t.lower)) s.has_object = true;
  }
  s.imperative_start =
      !tokens.empty() && Contains(lexicon.action_verbs, tokens.front().lower);
  return s;
}

bool PronounPasses(const PronounSignal &signal, const FilterConfig &cfg) {
  return signal.has_subject || signal.has_object ||
         (cfg.allow_imperative_as_pronoun_pass && signal.imperative_start);
}

bool ContainsNegation(std::span<const Token> tokens, const Lexicon &lexicon) {
  for (const Token &t : tokens) {
    if (Contains(lexicon.negations, t.lower)) return true;
  }
  return false;
}

FilterVerdict ApplyFilters(std::span<const Token> tokens,
                           const FilterConfig &cfg) {
  FilterVerdict v;
  const Lexicon &lex = cfg.lexicon;
  v.pronoun_signal = ComputePronounSignal(tokens, lex);

  ActionVerbMatch verbs = ContainsActionVerb(tokens, lex);
  v.matched_verbs = std::move(verbs.matched);
  if (!verbs.found) {
    v.rejected_by = FilterStage::kActionVerb;
  } else if (!LengthOk(tokens, v.matched_verbs.size(), cfg)) {
    v.rejected_by = FilterStage::kLength;
  } else if (!PronounPasses(v.pronoun_signal, cfg)) {
    v.rejected_by = FilterStage::kPronoun;
  } else if (ContainsNegation(tokens, lex)) {
    v.rejected_by = FilterStage::kNegation;
  }
  v.passed = !v.rejected_by.has_value();
  return v;
}

FilterVerdict ApplyFilters(const Sentence &sentence, const FilterConfig &cfg) {
  return ApplyFilters(sentence.tokens, cfg);
}

}  // namespace actionable
