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

// Corpus ingestion and seeded evaluation splits.

#ifndef VERTATTACK_DATASETS_H_
#define VERTATTACK_DATASETS_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace vertattack {

struct Sample {
  std::string id;
  std::string text;                  // the classified (and transformed) text
  std::optional<std::string> text2;  // QNLI question; never transformed
  std::string gold;                  // display label
  std::string dataset;

  friend bool operator==(const Sample&, const Sample&) = default;
};

nlohmann::json ToJson(const Sample& sample);

enum class FileFormat { kAuto, kTsv, kCsv, kJsonl };

struct LoadResult {
  std::vector<Sample> samples;
  std::size_t data_rows = 0;              // rows after any header
  std::vector<std::string> rejected_ids;  // rows dropped for bad labels/text
};

// Parses a corpus file for one of the registered tasks.
//   sst2   GLUE TSV with header "sentence<TAB>label"
//   cola   GLUE TSV, no header: source, label, author mark, sentence
//   qnli   GLUE TSV with header "index question sentence label"
//   rotten_tomatoes  CSV with header "text,label"
//   jigsaw Kaggle CSV: id, comment_text, toxic, severe_toxic, obscene,
//          threat, insult, identity_hate (any flag set => toxic)
// Any task also accepts JSON lines {id, text, [text2], label}. kAuto picks
// the format from the extension. Throws FileNotFound, EmptyFile,
// SchemaMismatch, and BadLabel when every row was rejected.
LoadResult LoadDataset(std::string_view dataset_id,
                       const std::filesystem::path& path,
                       FileFormat format = FileFormat::kAuto);

// RFC 4180 records: quoted fields may hold commas, doubled quotes, and line
// breaks. Throws SchemaMismatch on an unterminated quote.
std::vector<std::vector<std::string>> ParseCsv(std::string_view data);

struct SplitSpec {
  std::size_t n = 100;
  std::uint64_t seed = 0;
  bool stratify = true;
};

// xorshift64* seeded through splitmix64. Fully specified so splits can be
// reproduced in other languages:
//   state = splitmix64(seed) (or 1 if that yields 0)
//   next: x ^= x >> 12; x ^= x << 25; x ^= x >> 27; return x * 0x2545F4914F6CDD1D
//   uniform(b): reject r < (2^64 - b) mod b, then r mod b
class SplitRng {
 public:
  explicit SplitRng(std::uint64_t seed);
  std::uint64_t Next();
  std::uint64_t Uniform(std::uint64_t bound);
  // Fisher-Yates from the back: for i = n-1 .. 1, swap(i, uniform(i + 1)).
  template <typename T>
  void Shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::swap(items[i - 1], items[Uniform(i)]);
    }
  }

 private:
  std::uint64_t state_;
};

// Stratified: labels in task order get floor(n / L) samples each, the first
// n mod L labels one more; each label bucket is shuffled with the seeded
// generator before taking its quota, then the union is shuffled. Without
// stratification the whole list is shuffled and truncated. Throws
// InsufficientLabel when a bucket (or the list) is too small.
std::vector<Sample> DrawSplit(std::span<const Sample> samples,
                              const SplitSpec& spec);

void WriteJsonl(std::span<const Sample> samples,
                const std::filesystem::path& path);

}  // namespace vertattack

#endif  // VERTATTACK_DATASETS_H_
