// Copyright 2026 The vertattack Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "vertattack/datasets.h"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "vertattack/error.h"
#include "vertattack/prompts.h"
#include "vertattack/text_util.h"

namespace vertattack {
namespace {

using Json = nlohmann::json;

constexpr std::string_view kJigsawHeader[] = {
    "id",     "comment_text", "toxic",  "severe_toxic",
    "obscene", "threat",      "insult", "identity_hate"};

std::string ReadFile(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) {
    throw Error(ErrorCode::kFileNotFound, path.string());
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::vector<std::string> Lines(std::string_view data) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start < data.size()) {
    std::size_t end = data.find('\n', start);
    if (end == std::string_view::npos) end = data.size();
    std::string_view line = data.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.emplace_back(line);
    start = end + 1;
  }
  while (!lines.empty() && TrimWhitespace(lines.back()).empty()) {
    lines.pop_back();
  }
  return lines;
}

std::optional<std::string> NormalizeLabel(const TaskSpec& task,
                                          std::string_view raw) {
  const std::string label = AsciiLower(TrimWhitespace(raw));
  if (task.HasLabel(label)) return label;
  auto it = task.raw_labels.find(label);
  if (it != task.raw_labels.end()) return it->second;
  return std::nullopt;
}

std::string RowId(const TaskSpec& task, std::size_t row) {
  return fmt::format("{}-{:06d}", task.name, row);
}

[[noreturn]] void ThrowSchema(const std::filesystem::path& path,
                              std::string_view detail) {
  throw Error(ErrorCode::kSchemaMismatch,
              fmt::format("{}: {}", path.string(), detail));
}

bool IsEmptyData(std::string_view data) {
  return TrimWhitespace(data).empty();
}

class Collector {
 public:
  Collector(const TaskSpec& task, LoadResult& out) : task_(task), out_(out) {}

  void Add(std::string id, std::string_view text,
           std::optional<std::string> text2, std::string_view raw_label) {
    ++out_.data_rows;
    const std::string_view trimmed = TrimWhitespace(text);
    std::optional<std::string> gold = NormalizeLabel(task_, raw_label);
    if (!gold || trimmed.empty()) {
      spdlog::warn("{}: rejected row {} ({})", task_.name, id,
                   gold ? "empty text" : fmt::format("bad label '{}'", raw_label));
      out_.rejected_ids.push_back(std::move(id));
      return;
    }
    out_.samples.push_back(Sample{std::move(id), std::string(trimmed),
                                  std::move(text2), *gold, task_.name});
  }

  void Reject(std::string id, std::string_view why) {
    ++out_.data_rows;
    spdlog::warn("{}: rejected row {} ({})", task_.name, id, why);
    out_.rejected_ids.push_back(std::move(id));
  }

 private:
  const TaskSpec& task_;
  LoadResult& out_;
};

void LoadTsv(const TaskSpec& task, const std::filesystem::path& path,
             std::string_view data, LoadResult& out) {
  std::vector<std::string> lines = Lines(data);
  Collector collect(task, out);
  auto columns = [](const std::string& line) { return Split(line, '\t'); };

  if (task.name == "sst2") {
    std::size_t first = 0;
    if (!lines.empty()) {
      std::vector<std::string> header = columns(lines[0]);
      if (header.size() != 2) {
        ThrowSchema(path, fmt::format("expected 2 columns, got {}", header.size()));
      }
      if (header[0] == "sentence" && header[1] == "label") first = 1;
    }
    for (std::size_t i = first; i < lines.size(); ++i) {
      std::vector<std::string> cols = columns(lines[i]);
      if (cols.size() != 2) {
        ThrowSchema(path, fmt::format("line {}: expected 2 columns, got {}",
                                      i + 1, cols.size()));
      }
      collect.Add(RowId(task, i + 1 - first), cols[0], std::nullopt, cols[1]);
    }
  } else if (task.name == "cola") {
    for (std::size_t i = 0; i < lines.size(); ++i) {
      std::vector<std::string> cols = columns(lines[i]);
      if (cols.size() != 4) {
        ThrowSchema(path, fmt::format("line {}: expected 4 columns, got {}",
                                      i + 1, cols.size()));
      }
      collect.Add(RowId(task, i + 1), cols[3], std::nullopt, cols[1]);
    }
  } else if (task.name == "qnli") {
    if (lines.empty()) return;
    std::vector<std::string> header = columns(lines[0]);
    if (header != std::vector<std::string>{"index", "question", "sentence", "label"}) {
      ThrowSchema(path, "expected header index, question, sentence, label");
    }
    for (std::size_t i = 1; i < lines.size(); ++i) {
      std::vector<std::string> cols = columns(lines[i]);
      if (cols.size() != 4) {
        ThrowSchema(path, fmt::format("line {}: expected 4 columns, got {}",
                                      i + 1, cols.size()));
      }
      const std::string id = fmt::format("qnli-{}", TrimWhitespace(cols[0]));
      collect.Add(id, cols[2], std::string(TrimWhitespace(cols[1])), cols[3]);
    }
  } else {
    ThrowSchema(path, fmt::format("no TSV layout for dataset '{}'", task.name));
  }
}

void LoadCsv(const TaskSpec& task, const std::filesystem::path& path,
             std::string_view data, LoadResult& out) {
  std::vector<std::vector<std::string>> rows = ParseCsv(data);
  if (rows.empty()) return;
  Collector collect(task, out);
  const std::vector<std::string>& header = rows[0];

  if (task.name == "rotten_tomatoes") {
    if (header != std::vector<std::string>{"text", "label"}) {
      ThrowSchema(path, "expected header text,label");
    }
    for (std::size_t i = 1; i < rows.size(); ++i) {
      if (rows[i].size() != 2) {
        ThrowSchema(path, fmt::format("record {}: expected 2 fields, got {}", i,
                                      rows[i].size()));
      }
      collect.Add(RowId(task, i), rows[i][0], std::nullopt, rows[i][1]);
    }
  } else if (task.name == "jigsaw") {
    if (!std::equal(header.begin(), header.end(), std::begin(kJigsawHeader),
                    std::end(kJigsawHeader))) {
      ThrowSchema(path, "expected the Kaggle toxic-comment header");
    }
    for (std::size_t i = 1; i < rows.size(); ++i) {
      const std::vector<std::string>& row = rows[i];
      if (row.size() != header.size()) {
        ThrowSchema(path, fmt::format("record {}: expected {} fields, got {}", i,
                                      header.size(), row.size()));
      }
      std::string id = "jigsaw-" + std::string(TrimWhitespace(row[0]));
      bool any = false;
      bool valid = true;
      for (std::size_t c = 2; c < row.size(); ++c) {
        const std::string_view flag = TrimWhitespace(row[c]);
        if (flag == "1") {
          any = true;
        } else if (flag != "0") {
          valid = false;
        }
      }
      if (!valid) {
        collect.Reject(std::move(id), "toxicity flags must be 0 or 1");
        continue;
      }
      collect.Add(std::move(id), row[1], std::nullopt, any ? "1" : "0");
    }
  } else {
    ThrowSchema(path, fmt::format("no CSV layout for dataset '{}'", task.name));
  }
}

void LoadJsonl(const TaskSpec& task, const std::filesystem::path& path,
               std::string_view data, LoadResult& out) {
  std::vector<std::string> lines = Lines(data);
  Collector collect(task, out);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (TrimWhitespace(lines[i]).empty()) continue;
    Json row = Json::parse(lines[i], nullptr, false);
    if (row.is_discarded() || !row.is_object() || !row.contains("text") ||
        !row.contains("label") || !row["text"].is_string()) {
      ThrowSchema(path, fmt::format("line {}: expected an object with text and "
                                    "label",
                                    i + 1));
    }
    std::string id = RowId(task, i + 1);
    if (row.contains("id")) {
      id = row["id"].is_string() ? row["id"].get<std::string>() : row["id"].dump();
    }
    std::optional<std::string> text2;
    if (row.contains("text2") && row["text2"].is_string()) {
      text2 = row["text2"].get<std::string>();
    }
    const Json& label = row["label"];
    const std::string raw = label.is_string() ? label.get<std::string>() : label.dump();
    collect.Add(std::move(id), row["text"].get<std::string>(), std::move(text2), raw);
  }
}

FileFormat DetectFormat(const std::filesystem::path& path) {
  const std::string ext = AsciiLower(path.extension().string());
  if (ext == ".tsv") return FileFormat::kTsv;
  if (ext == ".csv") return FileFormat::kCsv;
  if (ext == ".jsonl" || ext == ".json") return FileFormat::kJsonl;
  throw Error(ErrorCode::kSchemaMismatch,
              fmt::format("cannot infer format of {}", path.string()));
}

std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace

Json ToJson(const Sample& sample) {
  Json out{{"id", sample.id}, {"text", sample.text}};
  if (sample.text2) out["text2"] = *sample.text2;
  out["label"] = sample.gold;
  out["dataset"] = sample.dataset;
  return out;
}

std::vector<std::vector<std::string>> ParseCsv(std::string_view data) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  bool row_started = false;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const char c = data[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < data.size() && data[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        quoted = true;
        row_started = true;
        break;
      case ',':
        row.push_back(std::move(field));
        field.clear();
        row_started = true;
        break;
      case '\r':
        break;
      case '\n':
        if (row_started || !field.empty()) {
          row.push_back(std::move(field));
          rows.push_back(std::move(row));
        }
        field.clear();
        row.clear();
        row_started = false;
        break;
      default:
        field.push_back(c);
        row_started = true;
    }
  }
  if (quoted) {
    throw Error(ErrorCode::kSchemaMismatch, "unterminated quoted CSV field");
  }
  if (row_started || !field.empty()) {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

LoadResult LoadDataset(std::string_view dataset_id,
                       const std::filesystem::path& path, FileFormat format) {
  const TaskSpec& task = GetTask(dataset_id);
  const std::string data = ReadFile(path);
  if (IsEmptyData(data)) throw Error(ErrorCode::kEmptyFile, path.string());
  if (format == FileFormat::kAuto) format = DetectFormat(path);

  LoadResult out;
  switch (format) {
    case FileFormat::kTsv:
      LoadTsv(task, path, data, out);
      break;
    case FileFormat::kCsv:
      LoadCsv(task, path, data, out);
      break;
    case FileFormat::kJsonl:
    case FileFormat::kAuto:
      LoadJsonl(task, path, data, out);
      break;
  }
  if (out.data_rows == 0) {
    throw Error(ErrorCode::kEmptyFile, path.string() + " has no data rows");
  }
  if (out.samples.empty()) {
    throw Error(ErrorCode::kBadLabel,
                fmt::format("{}: all {} rows rejected", path.string(),
                            out.data_rows));
  }
  return out;
}

SplitRng::SplitRng(std::uint64_t seed) : state_(SplitMix64(seed)) {
  if (state_ == 0) state_ = 1;
}

std::uint64_t SplitRng::Next() {
  state_ ^= state_ >> 12;
  state_ ^= state_ << 25;
  state_ ^= state_ >> 27;
  return state_ * 0x2545F4914F6CDD1DULL;
}

std::uint64_t SplitRng::Uniform(std::uint64_t bound) {
  if (bound == 0) throw Error(ErrorCode::kInvalidArgument, "empty range");
  const std::uint64_t threshold = (0 - bound) % bound;
  while (true) {
    const std::uint64_t r = Next();
    if (r >= threshold) return r % bound;
  }
}

std::vector<Sample> DrawSplit(std::span<const Sample> samples,
                              const SplitSpec& spec) {
  if (spec.n == 0) return {};
  SplitRng rng(spec.seed);
  std::vector<Sample> out;
  if (!spec.stratify) {
    if (samples.size() < spec.n) {
      throw Error(ErrorCode::kInsufficientLabel,
                  fmt::format("need {} samples, have {}", spec.n, samples.size()));
    }
    out.assign(samples.begin(), samples.end());
    rng.Shuffle(out);
    out.resize(spec.n);
    return out;
  }
  if (samples.empty()) {
    throw Error(ErrorCode::kInsufficientLabel, "no samples to draw from");
  }
  const std::vector<std::string>& labels = GetTask(samples[0].dataset).label_set;
  std::map<std::string, std::vector<Sample>> buckets;
  for (const Sample& s : samples) buckets[s.gold].push_back(s);

  const std::size_t base = spec.n / labels.size();
  const std::size_t extra = spec.n % labels.size();
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const std::size_t quota = base + (i < extra ? 1 : 0);
    std::vector<Sample>& bucket = buckets[labels[i]];
    if (bucket.size() < quota) {
      throw Error(ErrorCode::kInsufficientLabel,
                  fmt::format("label '{}' has {} samples, need {}", labels[i],
                              bucket.size(), quota));
    }
    rng.Shuffle(bucket);
    out.insert(out.end(), bucket.begin(), bucket.begin() + quota);
  }
  rng.Shuffle(out);
  return out;
}

void WriteJsonl(std::span<const Sample> samples,
                const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  for (const Sample& s : samples) {
    out << ToJson(s).dump(-1, ' ', false, Json::error_handler_t::replace) << '\n';
  }
}

}  // namespace vertattack
