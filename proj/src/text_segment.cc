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

#include "actionable/text_segment.h"

#include <array>

#include "actionable/util.h"

namespace actionable {
namespace {

constexpr std::array<std::string_view, 10> kAbbreviations = {
    "mr.", "mrs.", "ms.", "dr.", "inc.", "corp.", "vs.", "e.g.", "i.e.", "etc.",
};

bool IsSpace(char c) {
  return c == ' ' || c == '\t' || c == '\r' || c == '\f' || c == '\v';
}

bool IsTerminal(char c) { return c == '.' || c == '!' || c == '?'; }

bool IsPunct(char c) {
  const auto u = static_cast<unsigned char>(c);
  if (u >= 0x80 || c == '\'') return false;
  return (u >= 0x21 && u <= 0x2F) || (u >= 0x3A && u <= 0x40) ||
         (u >= 0x5B && u <= 0x60) || (u >= 0x7B && u <= 0x7E);
}

// True when the word ending at `end` (exclusive, the '.' included) is a
// known abbreviation.
bool EndsWithAbbreviation(std::string_view text, size_t end) {
  size_t begin = end;
  while (begin > 0 && !IsSpace(text[begin - 1]) && text[begin - 1] != '\n') {
    --begin;
  }
  std::string word = AsciiLower(text.substr(begin, end - begin));
  // Tolerate opening brackets or quotes before the abbreviation.
  while (!word.empty() && (word[0] == '(' || word[0] == '"' || word[0] == '\'')) {
    word.erase(0, 1);
  }
  for (std::string_view abbr : kAbbreviations) {
    if (word == abbr) return true;
  }
  return false;
}

std::string CollapseWhitespace(std::string_view s) {
  std::string out;
  bool pending_space = false;
  for (char c : TrimView(s)) {
    if (IsSpace(c) || c == '\n') {
      pending_space = true;
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(c);
  }
  return out;
}

}  // namespace

std::string SentenceOrigin::ToString() const {
  return message_id + "#" + std::to_string(index);
}

std::string_view GroupTagName(GroupTag tag) {
  switch (tag) {
    case GroupTag::kVerb: return "verb";
    case GroupTag::kNoun: return "noun";
    case GroupTag::kAdjective: return "adjective";
    case GroupTag::kAdverb: return "adverb";
    case GroupTag::kPronoun: return "pronoun";
    case GroupTag::kOther: return "other";
  }
  return "other";
}

std::vector<std::string> SplitSentenceTexts(std::string_view body) {
  std::vector<std::string> out;
  auto emit = [&out](std::string_view piece) {
    std::string s = CollapseWhitespace(piece);
    if (!s.empty()) out.push_back(std::move(s));
  };

  size_t start = 0;
  size_t i = 0;
  while (i < body.size()) {
    const char c = body[i];
    if (c == '\n') {
      emit(body.substr(start, i - start));
      start = ++i;
      continue;
    }
    if (!IsTerminal(c)) {
      ++i;
      continue;
    }
    // Consume a run of terminators plus closing quotes/brackets.
    size_t end = i + 1;
    while (end < body.size() && IsTerminal(body[end])) ++end;
    while (end < body.size() &&
           (body[end] == '"' || body[end] == '\'' || body[end] == ')')) {
      ++end;
    }
    const bool boundary =
        end == body.size() || IsSpace(body[end]) || body[end] == '\n';
    const bool abbreviation =
        c == '.' && end == i + 1 && EndsWithAbbreviation(body, end);
    if (boundary && !abbreviation) {
      emit(body.substr(start, end - start));
      start = end;
    }
    i = end;
  }
  if (start < body.size()) emit(body.substr(start));
  return out;
}

std::vector<Token> Tokenize(std::string_view sentence_text) {
  std::vector<Token> tokens;
  auto push = [&tokens](std::string_view s) {
    tokens.push_back(Token{std::string(s), AsciiLower(s)});
  };

  size_t i = 0;
  const size_t n = sentence_text.size();
  while (i < n) {
    while (i < n && (IsSpace(sentence_text[i]) || sentence_text[i] == '\n')) ++i;
    size_t j = i;
    while (j < n && !IsSpace(sentence_text[j]) && sentence_text[j] != '\n') ++j;
    if (j == i) break;
    std::string_view chunk = sentence_text.substr(i, j - i);
    i = j;

    size_t lead = 0;
    while (lead < chunk.size() && IsPunct(chunk[lead])) ++lead;
    if (lead == chunk.size()) {
      for (char c : chunk) push(std::string_view(&c, 1));
      continue;
    }
    size_t trail = chunk.size();
    while (trail > lead && IsPunct(chunk[trail - 1])) --trail;
    for (size_t k = 0; k < lead; ++k) push(chunk.substr(k, 1));
    push(chunk.substr(lead, trail - lead));
    for (size_t k = trail; k < chunk.size(); ++k) push(chunk.substr(k, 1));
  }
  return tokens;
}

std::vector<Sentence> SplitSentences(std::string_view body,
                                     std::string_view message_id) {
  std::vector<Sentence> out;
  for (std::string &text : SplitSentenceTexts(body)) {
    std::vector<Token> tokens = Tokenize(text);
    if (tokens.empty()) continue;
    Sentence s;
    s.origin = SentenceOrigin{std::string(message_id), out.size()};
    s.text = std::move(text);
    s.tokens = std::move(tokens);
    out.push_back(std::move(s));
  }
  return out;
}

GroupTag PosGroup(std::string_view tag) {
  if (tag == "VB" || tag == "VBD" || tag == "VBG" || tag == "VBP" ||
      tag == "VBZ") {
    return GroupTag::kVerb;
  }
  if (tag == "NN" || tag == "NNS" || tag == "NNP" || tag == "NNPS") {
    return GroupTag::kNoun;
  }
  if (tag == "JJ" || tag == "JJR" || tag == "JJS") return GroupTag::kAdjective;
  if (tag == "RB" || tag == "RBR" || tag == "RBS") return GroupTag::kAdverb;
  if (tag == "PRP" || tag == "PRP$") return GroupTag::kPronoun;
  return GroupTag::kOther;
}

}  // namespace actionable
