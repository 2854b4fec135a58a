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

#include "mini_corpus.h"

#include <array>
#include <string_view>

#include "actionable/util.h"

namespace actionable::mini_corpus {
namespace {

constexpr std::array<std::string_view, 12> kPeople = {
    "allen-p", "bass-e", "dasovich-j", "farmer-d", "kaminski-v", "lay-k",
    "mann-k", "nemec-g", "shackleton-s", "skilling-j", "taylor-m", "white-s",
};
constexpr std::array<std::string_view, 12> kFirstNames = {
    "Phillip", "Eric", "Jeff", "Daren", "Vince", "Ken",
    "Kay", "Gerald", "Sara", "Jeff", "Mark", "Stacey",
};
constexpr std::array<std::string_view, 4> kFolders = {"inbox", "sent", "notes",
                                                      "projects"};
constexpr std::array<std::string_view, 10> kSubjects = {
    "Q3 numbers", "Contract update", "Meeting tomorrow", "RE: budget",
    "Site visit", "FW: gas schedule", "Follow up", "Lunch", "Deal status",
    "Weekly summary",
};
constexpr std::array<std::string_view, 14> kVerbs = {
    "send", "review", "finalize", "prepare", "update", "close", "submit",
    "check", "sign", "forward", "build", "propose", "define", "confirm",
};
constexpr std::array<std::string_view, 14> kPastVerbs = {
    "sent", "reviewed", "finalized", "prepared", "updated", "closed",
    "submitted", "checked", "signed", "forwarded", "built", "proposed",
    "defined", "confirmed",
};
constexpr std::array<std::string_view, 12> kObjects = {
    "quarterly report", "budget", "contract draft", "presentation",
    "invoice", "agenda", "spreadsheet", "pipeline numbers", "gas curve",
    "term sheet", "trading limits", "credit memo",
};
constexpr std::array<std::string_view, 8> kTimes = {
    "by Friday", "before noon", "tomorrow morning", "by end of day",
    "next week", "this afternoon", "before the call", "by Monday",
};
constexpr std::array<std::string_view, 6> kAdjectives = {
    "great", "quiet", "busy", "hot", "slow", "interesting",
};
constexpr std::array<std::string_view, 5> kDays = {
    "Monday", "Tuesday", "week", "month", "quarter",
};

template <size_t N>
std::string Pick(Rng &rng, const std::array<std::string_view, N> &items) {
  return std::string(items[rng.Below(N)]);
}

std::string Capitalize(std::string s) {
  if (!s.empty() && s[0] >= 'a' && s[0] <= 'z') s[0] = static_cast<char>(s[0] - 32);
  return s;
}

std::string TaskSentence(Rng &rng) {
  const std::string v = Pick(rng, kVerbs);
  const std::string o = Pick(rng, kObjects);
  const std::string t = Pick(rng, kTimes);
  switch (rng.Below(8)) {
    case 0: return "Please " + v + " the " + o + " for me " + t + ".";
    case 1: return "Can you " + v + " the " + o + " " + t + "?";
    case 2: return Capitalize(v) + " the " + o + " " + t + ".";
    case 3: return "I need you to " + v + " the " + o + " " + t + ".";
    case 4: return "We should " + v + " the " + o + " " + t + ".";
    case 5: return "Could you " + v + " the " + o + " and send it to us " + t + "?";
    case 6: return Capitalize(v) + " the " + o + " and let me know.";
    default: return "Make sure you " + v + " the " + o + " " + t + ".";
  }
}

std::string OtherSentence(Rng &rng) {
  const std::string o = Pick(rng, kObjects);
  const std::string a = Pick(rng, kAdjectives);
  switch (rng.Below(10)) {
    case 0: return "I like to play the guitar on weekends.";
    case 1: return "The weather in Houston was " + a + " this week.";
    case 2: return "The " + o + " looked " + a + " overall.";
    case 3:
      return "Our team " + Pick(rng, kPastVerbs) + " the " + o + " last " +
             Pick(rng, kDays) + ".";
    case 4: return "You shouldn't " + Pick(rng, kVerbs) + " the " + o + " yet.";
    case 5:
      return "We will not " + Pick(rng, kVerbs) + " the " + o + " " +
             Pick(rng, kTimes) + ".";
    case 6:
      return "The meeting that was held in the large conference room on the "
             "third floor of the main building last Tuesday afternoon was "
             "attended by many people and we " +
             Pick(rng, kPastVerbs) + " the " + o + ".";
    case 7: return "It was " + a + " to see everyone at the party.";
    case 8: return "Hope you had a " + a + " weekend.";
    default: return "The market for the " + o + " has been " + a + " lately.";
  }
}

}  // namespace

std::vector<SyntheticEmail> Generate(size_t count, uint64_t seed) {
  Rng rng(seed);
  std::vector<SyntheticEmail> out;
  out.reserve(count);
  for (size_t n = 0; n < count; ++n) {
    const size_t from = rng.Below(kPeople.size());
    const size_t to = rng.Below(kPeople.size());
    SyntheticEmail email;
    email.file = std::string(kPeople[from]) + "/" + Pick(rng, kFolders) + "/" +
                 std::to_string(n + 1) + ".";

    std::string raw;
    raw += "Message-ID: <" + std::to_string(1000000 + n) +
           ".1075855" + std::to_string(n % 1000) + ".JavaMail.evans@thyme>\n";
    raw += "Date: Mon, " + std::to_string(1 + n % 28) +
           " May 2001 09:" + std::to_string(10 + n % 50) + ":00 -0700 (PDT)\n";
    raw += "From: " + std::string(kPeople[from]) + "@enron.com\n";
    raw += "To: " + std::string(kPeople[to]) + "@enron.com\n";
    raw += "Subject: " + Pick(rng, kSubjects) + "\n";
    raw += "X-Folder: \\" + std::string(kPeople[from]) + "\\Inbox\n";
    raw += "\t(continued header)\n";
    raw += "\n";
    raw += "Hi " + std::string(kFirstNames[to]) + ",\n\n";

    const size_t sentences = 3 + rng.Below(4);
    std::string paragraph;
    for (size_t s = 0; s < sentences; ++s) {
      const std::string sentence =
          rng.Bernoulli(0.45) ? TaskSentence(rng) : OtherSentence(rng);
      if (!paragraph.empty()) paragraph += " ";
      paragraph += sentence;
      if (rng.Bernoulli(0.3)) {
        raw += paragraph + "\n\n";
        paragraph.clear();
      }
    }
    if (!paragraph.empty()) raw += paragraph + "\n\n";
    raw += "Thanks,\n" + std::string(kFirstNames[from]) + "\n";

    switch (rng.Below(4)) {
      case 0:
        raw += "\n> Earlier note that should be dropped.\n> " + TaskSentence(rng) +
               "\n";
        break;
      case 1:
        raw += "\n -----Original Message-----\nFrom: someone@enron.com\n" +
               TaskSentence(rng) + "\n";
        break;
      case 2:
        raw += "\n---------------------- Forwarded by " +
               std::string(kFirstNames[to]) + "/HOU/ECT on 05/01/2001 ---\n" +
               OtherSentence(rng) + "\n";
        break;
      default:
        break;
    }
    email.raw = std::move(raw);
    out.push_back(std::move(email));
  }
  return out;
}

std::string ToCsv(const std::vector<SyntheticEmail> &emails) {
  auto quote = [](const std::string &s) {
    std::string q = "\"";
    for (char c : s) {
      if (c == '"') q += '"';
      q += c;
    }
    return q + "\"";
  };
  std::string out = "file,message\n";
  for (const SyntheticEmail &e : emails) {
    out += quote(e.file) + "," + quote(e.raw) + "\n";
  }
  return out;
}

void WriteMaildir(const std::vector<SyntheticEmail> &emails,
                  const std::filesystem::path &root) {
  for (const SyntheticEmail &e : emails) WriteFile(root / e.file, e.raw);
}

}  // namespace actionable::mini_corpus
