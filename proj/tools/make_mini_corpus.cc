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

#include <iostream>

#include "CLI11.hpp"
#include "actionable/error.h"
#include "actionable/util.h"
#include "mini_corpus.h"

int main(int argc, char **argv) {
  CLI::App app{"Generate the synthetic desk-scale email corpus"};
  std::string out, format = "csv";
  size_t count = 500;
  uint64_t seed = 7;
  app.add_option("--out", out, "CSV file or maildir root")->required();
  app.add_option("--format", format, "csv|maildir")
      ->check(CLI::IsMember({"csv", "maildir"}));
  app.add_option("--count", count, "Number of messages");
  app.add_option("--seed", seed, "Generator seed");
  CLI11_PARSE(app, argc, argv);

  try {
    const auto emails = actionable::mini_corpus::Generate(count, seed);
    if (format == "csv") {
      actionable::WriteFile(out, actionable::mini_corpus::ToCsv(emails));
    } else {
      actionable::mini_corpus::WriteMaildir(emails, out);
    }
  } catch (const actionable::Error &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
