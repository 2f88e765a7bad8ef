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

// Byte-level BPE tokenization and vertical-layout token inflation.

#ifndef VERTATTACK_TOKSHIFT_H_
#define VERTATTACK_TOKSHIFT_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "json.hpp"

namespace vertattack {

enum class Pretokenizer { kGpt2, kLlama3 };

std::string_view PretokenizerName(Pretokenizer kind);
Pretokenizer ParsePretokenizer(std::string_view name);

// Splits text into the pieces BPE runs on, using the standard split
// pattern of each family. Bytes that are not valid UTF-8 become
// single-byte pieces. The pieces concatenate back to `text`.
std::vector<std::string_view> Pretokenize(Pretokenizer kind,
                                          std::string_view text);

// The GPT-2 byte <-> printable code point table used by byte-level vocabularies.
const std::array<std::string, 256>& ByteToUnicode();

struct LoadOptions {
  std::optional<Pretokenizer> pretokenizer;  // overrides the artifact's choice
};

class Tokenizer {
 public:
  // Accepts
  //   - a directory holding vocab.json and merges.txt, with an optional
  //     artifact.json {"pretokenizer", "special_tokens", "ignore_merges"};
  //   - a tokenizer.json file (byte-level BPE only);
  //   - a tiktoken rank file (lines of "<base64 token> <rank>").
  // Throws FileNotFound, ArtifactInvalid, or UnsupportedTokenizer.
  static Tokenizer Load(const std::filesystem::path& path,
                        const LoadOptions& options = {});

  // `vocab` maps byte-level token strings to ids; `merges` are byte-level
  // symbol pairs in rank order.
  static Tokenizer FromVocabMerges(
      const std::map<std::string, int>& vocab,
      const std::vector<std::pair<std::string, std::string>>& merges,
      Pretokenizer pretokenizer, std::vector<std::string> special_tokens = {},
      bool ignore_merges = false);

  // `ranks` maps raw byte tokens to ranks, which double as ids.
  static Tokenizer FromRanks(const std::map<std::string, int>& ranks,
                             Pretokenizer pretokenizer,
                             std::map<std::string, int> special_tokens = {});

  // Special-token text is encoded as ordinary text.
  std::vector<int> Encode(std::string_view text) const;
  // Throws InvalidArgument for ids outside the vocabulary.
  std::string Decode(std::span<const int> ids) const;
  const std::string& TokenBytes(int id) const;
  // Byte-level display form, e.g. "Ġvertical".
  std::string TokenDisplay(int id) const;

  std::size_t vocab_size() const { return token_count_; }
  std::size_t merge_count() const { return pair_ranks_.size(); }
  Pretokenizer pretokenizer() const { return pretokenizer_; }
  bool ignore_merges() const { return ignore_merges_; }
  const std::map<std::string, int>& special_tokens() const { return specials_; }
  const std::string& source() const { return source_; }

 private:
  struct Merge {
    std::uint32_t rank;
    int merged;
  };

  Tokenizer() = default;
  void AddToken(std::string bytes, int id);
  void AddSpecial(const std::string& text, int id);
  void AddPair(int left, int right, std::uint32_t rank, int merged);
  void Finish();
  void EncodePiece(std::string_view piece, std::vector<int>& out) const;

  static std::uint64_t PairKey(int a, int b) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
           static_cast<std::uint32_t>(b);
  }

  Pretokenizer pretokenizer_ = Pretokenizer::kGpt2;
  bool ignore_merges_ = false;
  std::vector<std::string> id_to_bytes_;
  std::vector<bool> id_present_;
  std::unordered_map<std::string, int> bytes_to_id_;
  std::array<int, 256> byte_ids_{};
  std::unordered_map<std::uint64_t, Merge> pair_ranks_;
  std::map<std::string, int> specials_;
  std::size_t token_count_ = 0;
  std::string source_;
};

struct TokenList {
  std::vector<int> ids;
  std::vector<std::string> pieces;  // decoded bytes of each token
};

struct TokenInflationReport {
  std::string word;
  std::string context;   // the sentence the word was verticalized in
  std::string rendered;  // the full vertical rendering
  std::string horizontal_text;  // " word"
  std::string vertical_text;    // the rendered span covered by vertical tokens
  TokenList horizontal;
  TokenList vertical;
  std::size_t character_tokens = 0;  // vertical tokens holding a word character
  double inflation_ratio = 0.0;

  nlohmann::json ToJson() const;
};

// Horizontal form: " word". Vertical form: `context` (default: the word
// alone) rendered with the word's occurrence verticalized; the count covers
// every token of that rendering overlapping the span from the word's first
// character to its last, newlines and padding included. `word_index` picks the occurrence; by default the first
// case-insensitive match. Throws InvalidArgument for an empty or
// non-alphabetic word and WordNotInSentence when the context lacks it.
TokenInflationReport Inflate(const Tokenizer& tokenizer, std::string_view word,
                             std::optional<std::string_view> context = {},
                             std::optional<std::size_t> word_index = {});

}  // namespace vertattack

#endif  // VERTATTACK_TOKSHIFT_H_
