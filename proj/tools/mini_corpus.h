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

#ifndef ACTIONABLE_TOOLS_MINI_CORPUS_H_
#define ACTIONABLE_TOOLS_MINI_CORPUS_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace actionable::mini_corpus {

struct SyntheticEmail {
  std::string file;  // relative path, e.g. "allen-p/inbox/17."
  std::string raw;   // full RFC-822-like text
};

// Template-generated office email: headers, a greeting, a mix of
// task-style and non-task sentences, a sign-off, and sometimes a quoted or
// forwarded tail. Deterministic in (count, seed).
std::vector<SyntheticEmail> Generate(size_t count, uint64_t seed);

// CSV with header `file,message`.
std::string ToCsv(const std::vector<SyntheticEmail> &emails);

// One file per message under `root`.
void WriteMaildir(const std::vector<SyntheticEmail> &emails,
                  const std::filesystem::path &root);

}  // namespace actionable::mini_corpus

#endif  // ACTIONABLE_TOOLS_MINI_CORPUS_H_
