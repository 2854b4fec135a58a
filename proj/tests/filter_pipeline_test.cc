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

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "actionable/error.h"
#include "actionable/filter_pipeline.h"
#include "actionable/text_segment.h"
#include "actionable/util.h"
#include "doctest.h"
#include "test_util.h"

namespace actionable {
namespace {

FilterConfig Defaults() {
  FilterConfig cfg;
  cfg.lexicon = Lexicon::Default();
  return cfg;
}

std::optional<FilterStage> RejectedBy(std::string_view text,
                                      const FilterConfig &cfg) {
  return ApplyFilters(Tokenize(text), cfg).rejected_by;
}

TEST_CASE("expand_inflections examples") {
  using S = std::set<std::string>;
  CHECK(ExpandInflections("propose") == S{"propose", "proposes", "proposed", "proposing"});
  CHECK(ExpandInflections("kickstart") ==
        S{"kickstart", "kickstarts", "kickstarted", "kickstarting"});
  CHECK(ExpandInflections("close") == S{"close", "closes", "closed", "closing"});
  CHECK(ExpandInflections("fix") == S{"fix", "fixes", "fixed", "fixing"});
  CHECK(ExpandInflections("finish") == S{"finish", "finishes", "finished", "finishing"});
  CHECK(ExpandInflections("agree") == S{"agree", "agrees", "agreed", "agreeing"});
  CHECK(ExpandInflections("verify") == S{"verify", "verifies", "verified", "verifying"});
  CHECK(ExpandInflections("play") == S{"play", "plays", "played", "playing"});
}

TEST_CASE("default lexicon carries every named word") {
  const Lexicon lex = Lexicon::Default();
  for (const char *v : {"arrive", "build", "close", "define", "formulate", "propose",
                        "kickstart"}) {
    CHECK(lex.action_verbs.count(v) == 1);
  }
  CHECK(lex.subject_pronouns == std::set<std::string>{"i", "we", "you", "he", "she", "they"});
  CHECK(lex.object_pronouns == std::set<std::string>{"me", "her", "him", "us", "them"});
  for (const char *n : {"shouldn't", "couldn't", "wouldn't", "not", "never", "don't",
                        "doesn't", "didn't", "won't", "can't", "cannot", "isn't",
                        "aren't"}) {
    CHECK(lex.negations.count(n) == 1);
  }
  CHECK(lex.negations.size() == 13);
  CHECK_NOTHROW(lex.Validate());
}

TEST_CASE("shipped lexicon files equal the built-in default") {
  const Lexicon loaded = Lexicon::LoadDir(testing::SourceDir() / "data/lexicon");
  const Lexicon def = Lexicon::Default();
  CHECK(loaded.action_verbs == def.action_verbs);
  CHECK(loaded.subject_pronouns == def.subject_pronouns);
  CHECK(loaded.object_pronouns == def.object_pronouns);
  CHECK(loaded.negations == def.negations);
}

TEST_CASE("lexicon validation") {
  Lexicon lex = Lexicon::Default();
  lex.object_pronouns.insert("you");
  CHECK_THROWS_AS(lex.Validate(), Error);

  lex = Lexicon::Default();
  lex.action_verbs.insert("Send");
  CHECK_THROWS_AS(lex.Validate(), Error);

  lex = Lexicon::Default();
  lex.negations.insert("no way");
  CHECK_THROWS_AS(lex.Validate(), Error);

  lex = Lexicon::Default();
  lex.negations.insert("");
  CHECK_THROWS_AS(lex.Validate(), Error);

  const auto dir = testing::ScratchDir("lexicon_missing");
  try {
    Lexicon::LoadDir(dir);
    FAIL("expected failure");
  } catch (const Error &e) {
    CHECK((e.code() == ErrorCode::kIo || e.code() == ErrorCode::kLexicon));
  }
}

TEST_CASE("word list parsing") {
  CHECK(ParseWordList("# c\nSend\n\n  call  \n#x\n") ==
        std::vector<std::string>{"send", "call"});
  CHECK_THROWS_AS(ParseWordList("two words\n"), Error);
}

TEST_CASE("filter config validation") {
  FilterConfig cfg = Defaults();
  CHECK_NOTHROW(cfg.Validate());
  cfg.min_tokens = 0;
  CHECK_THROWS_AS(cfg.Validate(), Error);
  cfg = Defaults();
  cfg.min_tokens = 10;
  cfg.max_tokens = 9;
  CHECK_THROWS_AS(cfg.Validate(), Error);
  cfg = Defaults();
  cfg.min_action_ratio = 1.5;
  CHECK_THROWS_AS(cfg.Validate(), Error);
}

TEST_CASE("contains_action_verb examples") {
  const Lexicon lex = Lexicon::Default();
  auto r = ContainsActionVerb(Tokenize("Build the dashboard"), lex);
  CHECK(r.found);
  CHECK(r.matched == std::vector<std::string>{"build"});
  r = ContainsActionVerb(Tokenize("I like to play the guitar"), lex);
  CHECK_FALSE(r.found);
  CHECK(r.matched.empty());
  CHECK_FALSE(ContainsActionVerb({}, lex).found);
  r = ContainsActionVerb(Tokenize("Send and SEND then closed"), lex);
  CHECK(r.matched == std::vector<std::string>{"send", "send", "closed"});
}

TEST_CASE("length_ok examples") {
  const FilterConfig cfg = Defaults();
  CHECK(LengthOk(Tokenize("a b c d e f"), 1, cfg));
  CHECK_FALSE(LengthOk(Tokenize("a b"), 1, cfg));
  std::vector<Token> thirty(30, Token{"w", "w"});
  CHECK_FALSE(LengthOk(thirty, 1, cfg));
  std::vector<Token> twenty_five(25, Token{"w", "w"});
  CHECK(LengthOk(twenty_five, 1, cfg));  // 1/25 = 0.04 meets the ratio exactly
  FilterConfig strict = cfg;
  strict.min_action_ratio = 0.2;
  CHECK_FALSE(LengthOk(Tokenize("a b c d e f"), 1, strict));
  CHECK(LengthOk(Tokenize("a b c d e"), 1, strict));
}

TEST_CASE("pronoun_signal examples") {
  const FilterConfig cfg = Defaults();
  PronounSignal s = ComputePronounSignal(Tokenize("Send me the report"), cfg.lexicon);
  CHECK(s.has_object);
  CHECK(PronounPasses(s, cfg));
  s = ComputePronounSignal(Tokenize("You should file the claim"), cfg.lexicon);
  CHECK(s.has_subject);
  CHECK_FALSE(s.imperative_start);
  s = ComputePronounSignal(Tokenize("Close the deal"), cfg.lexicon);
  CHECK(s == PronounSignal{false, false, true});
  CHECK(PronounPasses(s, cfg));
  FilterConfig no_imperative = cfg;
  no_imperative.allow_imperative_as_pronoun_pass = false;
  CHECK_FALSE(PronounPasses(s, no_imperative));
  CHECK(ComputePronounSignal({}, cfg.lexicon) == PronounSignal{});
}

TEST_CASE("contains_negation examples") {
  const Lexicon lex = Lexicon::Default();
  CHECK(ContainsNegation(Tokenize("You shouldn't close the account"), lex));
  CHECK_FALSE(ContainsNegation(Tokenize("Close the account"), lex));
  CHECK(ContainsNegation(Tokenize("Do not close it"), lex));
  CHECK(ContainsNegation(Tokenize("NEVER close it"), lex));
}

TEST_CASE("apply_filters examples") {
  const FilterConfig cfg = Defaults();
  const FilterVerdict v = ApplyFilters(Tokenize("Build the quarterly report for me"), cfg);
  CHECK(v.passed);
  CHECK_FALSE(v.rejected_by.has_value());
  CHECK(v.matched_verbs == std::vector<std::string>{"build"});
  CHECK(v.pronoun_signal.has_object);
  CHECK(RejectedBy("I like to play the guitar", cfg) == FilterStage::kActionVerb);
  CHECK(RejectedBy("You shouldn't formulate the plan", cfg) == FilterStage::kNegation);
  CHECK(RejectedBy("Send it", cfg) == FilterStage::kLength);
  CHECK(RejectedBy("The team will build the plan", cfg) == FilterStage::kPronoun);

  Sentence s;
  s.tokens = Tokenize("Get your homework finished by tomorrow");
  const FilterVerdict g = ApplyFilters(s, cfg);
  CHECK(g.passed);
  CHECK(g.matched_verbs == std::vector<std::string>{"get", "finished"});
}

TEST_CASE("filter stage names round trip") {
  for (FilterStage st : {FilterStage::kActionVerb, FilterStage::kLength,
                         FilterStage::kPronoun, FilterStage::kNegation}) {
    CHECK(ParseFilterStage(FilterStageName(st)) == st);
  }
  CHECK(FilterStageName(FilterStage::kActionVerb) == "F1_action_verb");
  CHECK(FilterStageName(FilterStage::kNegation) == "F4_negation");
  CHECK_FALSE(ParseFilterStage("F5").has_value());
}

// Grid over verb presence x length x pronoun kind x negation. Expected
// verdicts come from a hand-written table, not from the filter code.
enum class Pron { kSubject, kObject, kNone };

std::vector<Token> GridSentence(bool verb, size_t length, Pron pron, bool neg,
                                bool verb_first) {
  std::vector<std::string> words;
  if (verb && verb_first) words.push_back("send");
  if (pron == Pron::kSubject) words.push_back("we");
  if (pron == Pron::kObject) words.push_back("us");
  if (pron == Pron::kNone) words.push_back("please");
  if (verb && !verb_first) words.push_back("send");
  if (neg) words.push_back("never");
  while (words.size() < length) words.push_back("report");
  words.resize(length);
  std::vector<Token> tokens;
  for (auto &w : words) tokens.push_back({w, w});
  return tokens;
}

// 'P' pass, '1'..'4' rejecting filter. Rows: verb (no, yes); columns within
// a row: length 2, 6, 30 x pronoun subject, object, none x negation no, yes.
// Verb placed after the pronoun slot, so the imperative escape never applies.
constexpr const char *kTruthTable[2] = {
    // len2: S- S+ O- O+ N- N+ | len6 | len30
    "111111" "111111" "111111",
    "222222" "P4P433" "222222",
};

TEST_CASE("decomposition: 36-case grid against the truth table") {
  const FilterConfig cfg = Defaults();
  int cases = 0;
  for (int verb = 0; verb < 2; ++verb) {
    const size_t lengths[] = {2, 6, 30};
    for (int li = 0; li < 3; ++li) {
      for (int pi = 0; pi < 3; ++pi) {
        for (int neg = 0; neg < 2; ++neg) {
          const char want = kTruthTable[verb][li * 6 + pi * 2 + neg];
          const auto tokens =
              GridSentence(verb, lengths[li], static_cast<Pron>(pi), neg, false);
          const FilterVerdict v = ApplyFilters(tokens, cfg);
          CAPTURE(verb);
          CAPTURE(li);
          CAPTURE(pi);
          CAPTURE(neg);
          if (want == 'P') {
            CHECK(v.passed);
            CHECK_FALSE(v.rejected_by.has_value());
          } else {
            CHECK_FALSE(v.passed);
            REQUIRE(v.rejected_by.has_value());
            CHECK(static_cast<int>(*v.rejected_by) == want - '1');
          }
          // Decomposition against the sub-predicates.
          const auto f1 = ContainsActionVerb(tokens, cfg.lexicon);
          const bool composed =
              f1.found && LengthOk(tokens, f1.matched.size(), cfg) &&
              PronounPasses(ComputePronounSignal(tokens, cfg.lexicon), cfg) &&
              !ContainsNegation(tokens, cfg.lexicon);
          CHECK(v.passed == composed);
          if (v.rejected_by != FilterStage::kActionVerb) CHECK_FALSE(v.matched_verbs.empty());
          ++cases;
        }
      }
    }
  }
  CHECK(cases == 36);
}

TEST_CASE("imperative escape: verb-first grid under both settings") {
  for (bool allow : {true, false}) {
    FilterConfig cfg = Defaults();
    cfg.allow_imperative_as_pronoun_pass = allow;
    for (int pi = 0; pi < 3; ++pi) {
      for (int neg = 0; neg < 2; ++neg) {
        const auto tokens = GridSentence(true, 6, static_cast<Pron>(pi), neg, true);
        const FilterVerdict v = ApplyFilters(tokens, cfg);
        const bool pronoun_ok = static_cast<Pron>(pi) != Pron::kNone || allow;
        const auto want = !pronoun_ok ? std::optional(FilterStage::kPronoun)
                          : neg       ? std::optional(FilterStage::kNegation)
                                      : std::nullopt;
        CHECK(v.rejected_by == want);
        CHECK(v.pronoun_signal.imperative_start);
      }
    }
  }
}

std::vector<Token> RandomTokens(Rng &rng) {
  const char *pool[] = {"send", "we", "us", "never", "report", "the", "close",
                        "please", "not", "you", "them", "plan", "review", "a"};
  std::vector<Token> out;
  const size_t n = rng.Below(30);
  for (size_t i = 0; i < n; ++i) {
    std::string w = pool[rng.Below(std::size(pool))];
    out.push_back({w, w});
  }
  return out;
}

TEST_CASE("property: lexicon monotonicity") {
  Rng rng(21);
  const FilterConfig base = Defaults();
  FilterConfig more_verbs = base;
  more_verbs.lexicon.action_verbs.insert({"plan", "report", "a"});
  FilterConfig more_neg = base;
  more_neg.lexicon.negations.insert({"plan", "the"});
  for (int trial = 0; trial < 3000; ++trial) {
    const auto tokens = RandomTokens(rng);
    const FilterVerdict v = ApplyFilters(tokens, base);
    if (v.passed) {
      CHECK(ApplyFilters(tokens, more_verbs).rejected_by != FilterStage::kActionVerb);
    }
    if (v.rejected_by == FilterStage::kNegation) {
      CHECK_FALSE(ApplyFilters(tokens, more_neg).passed);
    }
    // Determinism.
    const FilterVerdict again = ApplyFilters(tokens, base);
    CHECK(again.passed == v.passed);
    CHECK(again.rejected_by == v.rejected_by);
  }
}

TEST_CASE("property: F1/F3/F4 ignore token order") {
  Rng rng(22);
  const Lexicon lex = Lexicon::Default();
  for (int trial = 0; trial < 3000; ++trial) {
    auto tokens = RandomTokens(rng);
    auto shuffled = tokens;
    rng.Shuffle(shuffled);
    CHECK(ContainsActionVerb(tokens, lex).found == ContainsActionVerb(shuffled, lex).found);
    CHECK(ContainsNegation(tokens, lex) == ContainsNegation(shuffled, lex));
    const PronounSignal a = ComputePronounSignal(tokens, lex);
    const PronounSignal b = ComputePronounSignal(shuffled, lex);
    CHECK(a.has_subject == b.has_subject);
    CHECK(a.has_object == b.has_object);
  }
}

}  // namespace
}  // namespace actionable
