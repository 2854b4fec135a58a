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

#include "actionable/corpus_ingest.h"

#include <algorithm>
#include <future>

#include "actionable/error.h"
#include "actionable/util.h"

namespace actionable {
namespace {

bool IsHeaderLine(std::string_view line) {
  const size_t colon = line.find(':');
  if (colon == 0 || colon == std::string_view::npos) return false;
  for (size_t i = 0; i < colon; ++i) {
    const char c = line[i];
    const bool ok = (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') ||
                    (c >= '0' && c <= '9') || c == '-' || c == '_';
    if (!ok) return false;
  }
  return true;
}

bool IsContinuation(std::string_view line) {
  return !line.empty() && (line[0] == ' ' || line[0] == '\t');
}

bool IsReplyMarker(std::string_view line) {
  std::string_view t = TrimView(line);
  if (t.substr(0, 5) != "-----") return false;
  return t.find("Original Message") != std::string_view::npos ||
         t.find("Forwarded by") != std::string_view::npos;
}

std::string_view RightTrim(std::string_view s) {
  const size_t e = s.find_last_not_of(" \t\r\f\v");
  return e == std::string_view::npos ? std::string_view{} : s.substr(0, e + 1);
}

}  // namespace

std::optional<CorpusFormat> ParseCorpusFormat(std::string_view name) {
  if (name == "maildir" || name == "maildir_tree") {
    return CorpusFormat::kMaildirTree;
  }
  if (name == "csv") return CorpusFormat::kCsv;
  return std::nullopt;
}

std::string StripReplyNoise(std::string_view body) {
  std::vector<std::string_view> kept;
  for (std::string_view line : SplitLines(body)) {
    if (IsReplyMarker(line)) break;
    if (!line.empty() && line[0] == '>') continue;
    line = RightTrim(line);
    if (line.empty()) {
      if (kept.empty() || kept.back().empty()) continue;
    }
    kept.push_back(line);
  }
  while (!kept.empty() && kept.back().empty()) kept.pop_back();
  std::string out;
  for (size_t i = 0; i < kept.size(); ++i) {
    if (i) out.push_back('\n');
    out.append(kept[i]);
  }
  return out;
}

EmailMessage ParseEmail(std::string_view raw, std::string id,
                        std::string source_path) {
  const std::string text = SanitizeUtf8(raw);
  const std::vector<std::string_view> lines = SplitLines(text);

  // A header block is a run of `Name: value` lines (plus folded
  // continuations) closed by a blank line. Anything else is all body.
  size_t body_start = 0;
  std::string message_id;
  if (!lines.empty() && IsHeaderLine(lines[0])) {
    size_t i = 0;
    bool well_formed = true;
    for (; i < lines.size(); ++i) {
      std::string_view line = lines[i];
      if (TrimView(line).empty()) break;
      if (IsContinuation(line)) continue;
      if (!IsHeaderLine(line)) {
        well_formed = false;
        break;
      }
      const size_t colon = line.find(':');
      if (AsciiLower(line.substr(0, colon)) == "message-id") {
        message_id = std::string(TrimView(line.substr(colon + 1)));
      }
    }
    if (well_formed && i < lines.size()) {
      body_start = i + 1;
    } else {
      message_id.clear();
    }
  }

  std::string body_text;
  for (size_t i = body_start; i < lines.size(); ++i) {
    if (i > body_start) body_text.push_back('\n');
    body_text.append(lines[i]);
  }

  EmailMessage msg;
  msg.body = StripReplyNoise(body_text);
  if (TrimView(msg.body).empty()) {
    throw Error(ErrorCode::kEmptyMessage,
                "no body after cleaning" +
                    (source_path.empty() ? std::string() : ": " + source_path));
  }
  if (!id.empty()) {
    msg.id = std::move(id);
  } else if (!message_id.empty()) {
    msg.id = std::move(message_id);
  } else {
    msg.id = "inline";
  }
  msg.source_path = std::move(source_path);
  return msg;
}

std::vector<std::vector<std::string>> ParseCsv(std::string_view text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool in_quotes = false;
  bool any = false;
  for (size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    any = true;
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        field.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        in_quotes = true;
        break;
      case ',':
        row.push_back(std::move(field));
        field.clear();
        break;
      case '\r':
        break;
      case '\n':
        row.push_back(std::move(field));
        field.clear();
        rows.push_back(std::move(row));
        row.clear();
        any = false;
        break;
      default:
        field.push_back(c);
    }
  }
  if (in_quotes) throw Error(ErrorCode::kParse, "unterminated quoted field");
  if (any) {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

namespace {

std::vector<EmailMessage> LoadMaildir(const CorpusSpec &spec,
                                      LoadStats &stats) {
  std::vector<std::filesystem::path> files;
  std::error_code ec;
  std::filesystem::recursive_directory_iterator it(spec.root, ec), end;
  if (ec) throw Error(ErrorCode::kIo, spec.root.string() + ": " + ec.message());
  for (; it != end; it.increment(ec)) {
    if (ec) {
      throw Error(ErrorCode::kIo, it->path().string() + ": " + ec.message());
    }
    if (it->is_regular_file()) files.push_back(it->path());
  }
  std::sort(files.begin(), files.end(),
            [](const auto &a, const auto &b) { return a.string() < b.string(); });

  // Files are parsed in bounded chunks; the limit counts emitted messages.
  std::vector<EmailMessage> out;
  const size_t chunk = 64;
  for (size_t begin = 0; begin < files.size(); begin += chunk) {
    const size_t stop = std::min(files.size(), begin + chunk);
    std::vector<std::future<std::optional<EmailMessage>>> parsed;
    for (size_t i = begin; i < stop; ++i) {
      parsed.push_back(std::async(std::launch::async, [&files, i] {
        const std::string path = files[i].string();
        const std::string raw = ReadFile(files[i]);
        try {
          return std::optional<EmailMessage>(ParseEmail(raw, path, path));
        } catch (const Error &e) {
          if (e.code() != ErrorCode::kEmptyMessage) throw;
          return std::optional<EmailMessage>();
        }
      }));
    }
    for (auto &f : parsed) {
      ++stats.files_seen;
      std::optional<EmailMessage> msg = f.get();
      if (!msg) {
        ++stats.empty_messages;
        continue;
      }
      if (spec.limit && out.size() >= *spec.limit) continue;
      out.push_back(std::move(*msg));
    }
    if (spec.limit && out.size() >= *spec.limit) break;
  }
  return out;
}

std::vector<EmailMessage> LoadCsv(const CorpusSpec &spec, LoadStats &stats) {
  const std::string text = ReadFile(spec.root);
  const auto rows = ParseCsv(text);
  if (rows.empty()) {
    throw Error(ErrorCode::kCsvSchema,
                spec.root.string() + ": missing header row");
  }
  const auto &header = rows[0];
  auto column = [&](std::string_view name) -> size_t {
    for (size_t i = 0; i < header.size(); ++i) {
      if (TrimView(header[i]) == name) return i;
    }
    throw Error(ErrorCode::kCsvSchema, spec.root.string() +
                                           ": missing column '" +
                                           std::string(name) + "'");
  };
  const size_t file_col = column("file");
  const size_t message_col = column("message");

  std::vector<EmailMessage> out;
  for (size_t r = 1; r < rows.size(); ++r) {
    if (spec.limit && out.size() >= *spec.limit) break;
    const auto &row = rows[r];
    if (row.size() == 1 && row[0].empty()) continue;
    if (row.size() <= std::max(file_col, message_col)) {
      throw Error(ErrorCode::kCsvSchema, spec.root.string() + ": row " +
                                             std::to_string(r + 1) +
                                             " has too few columns");
    }
    ++stats.files_seen;
    try {
      out.push_back(ParseEmail(row[message_col], row[file_col],
                               spec.root.string()));
    } catch (const Error &e) {
      if (e.code() != ErrorCode::kEmptyMessage) throw;
      ++stats.empty_messages;
    }
  }
  return out;
}

}  // namespace

std::vector<EmailMessage> LoadCorpus(const CorpusSpec &spec,
                                     LoadStats *stats) {
  if (spec.limit && *spec.limit == 0) {
    throw Error(ErrorCode::kInvalidArgument, "limit must be > 0");
  }
  if (!std::filesystem::exists(spec.root)) {
    throw Error(ErrorCode::kIo, spec.root.string() + ": no such file or directory");
  }
  LoadStats local;
  LoadStats &s = stats ? *stats : local;
  if (spec.format == CorpusFormat::kCsv) return LoadCsv(spec, s);
  return LoadMaildir(spec, s);
}

}  // namespace actionable
