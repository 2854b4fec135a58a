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

#ifndef ACTIONABLE_CORPUS_INGEST_H_
#define ACTIONABLE_CORPUS_INGEST_H_

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace actionable {

// One parsed corpus unit. The body never contains header lines or quoted
// reply blocks.
struct EmailMessage {
  std::string id;
  std::string body;
  std::string source_path;
};

enum class CorpusFormat { kMaildirTree, kCsv };

struct CorpusSpec {
  std::filesystem::path root;
  CorpusFormat format = CorpusFormat::kMaildirTree;
  std::optional<size_t> limit;
};

struct LoadStats {
  size_t files_seen = 0;
  size_t empty_messages = 0;
};

std::optional<CorpusFormat> ParseCorpusFormat(std::string_view name);

// Drops quoted lines (leading '>'), truncates at the first forward/reply
// marker line, strips trailing whitespace per line and collapses blank-line
// runs. Leading and trailing blank lines are removed.
std::string StripReplyNoise(std::string_view body);

// Parses a raw RFC-822-like message. The leading lines form a header block
// only when every one of them is a `Name: value` header or a folded
// continuation and the run ends at a blank line; otherwise the whole text is
// body. When `id` is empty the Message-ID header is used, or "inline".
// Throws Error(kEmptyMessage) when nothing remains after cleaning.
EmailMessage ParseEmail(std::string_view raw, std::string id = {},
                        std::string source_path = {});

// Loads a corpus in deterministic order: lexicographic path order for
// maildir trees, row order for CSV (`file,message` columns). Messages whose
// body is empty after cleaning are skipped and counted in `stats`.
std::vector<EmailMessage> LoadCorpus(const CorpusSpec &spec,
                                     LoadStats *stats = nullptr);

// Minimal RFC 4180 reader: quoted fields may span lines, "" escapes a quote.
std::vector<std::vector<std::string>> ParseCsv(std::string_view text);

}  // namespace actionable

#endif  // ACTIONABLE_CORPUS_INGEST_H_
