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

#ifndef ACTIONABLE_TEXT_SEGMENT_H_
#define ACTIONABLE_TEXT_SEGMENT_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace actionable {

struct Token {
  std::string surface;
  std::string lower;
};

struct SentenceOrigin {
  std::string message_id;
  size_t index = 0;

  // "<message id>#<index>"
  std::string ToString() const;
};

struct Sentence {
  std::string text;
  std::vector<Token> tokens;
  SentenceOrigin origin;
};

// Group tags for Penn-style POS tags.
enum class GroupTag { kVerb, kNoun, kAdjective, kAdverb, kPronoun, kOther };

std::string_view GroupTagName(GroupTag tag);

// Splits on '.', '!', '?' (when followed by whitespace or end of text) and
// on newlines. A period closing one of the known abbreviations does not end
// a sentence. Whitespace runs inside a sentence collapse to one space.
std::vector<std::string> SplitSentenceTexts(std::string_view body);

// Whitespace split, then leading/trailing punctuation is detached one
// character per token. Apostrophes are never detached.
std::vector<Token> Tokenize(std::string_view sentence_text);

// SplitSentenceTexts + Tokenize; sentences with no tokens are dropped and
// surviving sentences are numbered consecutively from 0.
std::vector<Sentence> SplitSentences(std::string_view body,
                                     std::string_view message_id = {});

GroupTag PosGroup(std::string_view pos_tag);

}  // namespace actionable

#endif  // ACTIONABLE_TEXT_SEGMENT_H_
