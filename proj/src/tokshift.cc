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

#include "vertattack/tokshift.h"

#include <algorithm>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include <boost/regex/icu.hpp>
#include <fmt/format.h>
#include <openssl/evp.h>
#include <unicode/utf8.h>

#include "vertattack/error.h"
#include "vertattack/text_util.h"
#include "vertattack/transform.h"

namespace vertattack {
namespace {

using Json = nlohmann::json;

// Boost's ICU bridge rejects \p{..} inside bracket expressions, so the
// classes are spelled with POSIX names. WS is the Unicode White_Space set.
#define VT_WS "\\t-\\r \\x{85}\\x{A0}\\x{1680}\\x{2000}-\\x{200A}\\x{2028}\\x{2029}\\x{202F}\\x{205F}\\x{3000}"
#define VT_L "[:L*:]"
#define VT_N "[:N*:]"

constexpr const char* kGpt2Pattern =
    "'s|'t|'re|'ve|'m|'ll|'d"
    "| ?[" VT_L "]+"
    "| ?[" VT_N "]+"
    "| ?[^" VT_WS VT_L VT_N "]+"
    "|[" VT_WS "]+(?![^" VT_WS "])"
    "|[" VT_WS "]+";

constexpr const char* kLlama3Pattern =
    "(?i:'s|'t|'re|'ve|'m|'ll|'d)"
    "|[^\\r\\n" VT_L VT_N "]?[" VT_L "]+"
    "|[" VT_N "]{1,3}"
    "| ?[^" VT_WS VT_L VT_N "]+[\\r\\n]*"
    "|[" VT_WS "]*[\\r\\n]+"
    "|[" VT_WS "]+(?![^" VT_WS "])"
    "|[" VT_WS "]+";

#undef VT_WS
#undef VT_L
#undef VT_N

const boost::u32regex& PatternFor(Pretokenizer kind) {
  static const boost::u32regex gpt2 = boost::make_u32regex(kGpt2Pattern);
  static const boost::u32regex llama3 = boost::make_u32regex(kLlama3Pattern);
  return kind == Pretokenizer::kGpt2 ? gpt2 : llama3;
}

void SplitValid(Pretokenizer kind, std::string_view text,
                std::vector<std::string_view>& out) {
  if (text.empty()) return;
  using It = std::string_view::const_iterator;
  boost::u32regex_iterator<It> it(text.begin(), text.end(), PatternFor(kind));
  boost::u32regex_iterator<It> end;
  std::size_t consumed = 0;
  for (; it != end; ++it) {
    const auto& m = (*it)[0];
    const std::size_t start = static_cast<std::size_t>(m.first - text.begin());
    const std::size_t len = static_cast<std::size_t>(m.second - m.first);
    if (start > consumed) out.push_back(text.substr(consumed, start - consumed));
    if (len > 0) out.push_back(text.substr(start, len));
    consumed = start + len;
  }
  if (consumed < text.size()) out.push_back(text.substr(consumed));
}

std::map<std::string, std::uint8_t> UnicodeToByte() {
  std::map<std::string, std::uint8_t> out;
  const auto& table = ByteToUnicode();
  for (int b = 0; b < 256; ++b) out[table[b]] = static_cast<std::uint8_t>(b);
  return out;
}

// Byte-level token string -> raw bytes; nullopt when a character is not in
// the byte table.
std::optional<std::string> DecodeByteLevel(
    std::string_view token, const std::map<std::string, std::uint8_t>& table) {
  std::string out;
  std::int32_t i = 0;
  const auto* s = reinterpret_cast<const std::uint8_t*>(token.data());
  const auto n = static_cast<std::int32_t>(token.size());
  while (i < n) {
    const std::int32_t start = i;
    UChar32 c;
    U8_NEXT(s, i, n, c);
    if (c < 0) return std::nullopt;
    auto it = table.find(std::string(token.substr(start, i - start)));
    if (it == table.end()) return std::nullopt;
    out.push_back(static_cast<char>(it->second));
  }
  return out;
}

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kFileNotFound, path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

Json ParseJsonFile(const std::filesystem::path& path) {
  Json json = Json::parse(ReadFile(path), nullptr, false);
  if (json.is_discarded()) {
    throw Error(ErrorCode::kArtifactInvalid, path.string() + " is not valid JSON");
  }
  return json;
}

std::optional<std::string> Base64Decode(std::string_view text) {
  if (text.empty() || text.size() % 4 != 0) return std::nullopt;
  std::string out(text.size() / 4 * 3, '\0');
  const int n = EVP_DecodeBlock(reinterpret_cast<unsigned char*>(out.data()),
                                reinterpret_cast<const unsigned char*>(text.data()),
                                static_cast<int>(text.size()));
  if (n < 0) return std::nullopt;
  std::size_t padding = 0;
  if (text.back() == '=') ++padding;
  if (text.size() >= 2 && text[text.size() - 2] == '=') ++padding;
  out.resize(static_cast<std::size_t>(n) - padding);
  return out;
}

std::vector<std::pair<std::string, std::string>> ParseMergesText(
    std::string_view data, const std::filesystem::path& path) {
  std::vector<std::pair<std::string, std::string>> merges;
  std::size_t line_no = 0;
  for (const std::string& raw : Split(data, '\n')) {
    ++line_no;
    std::string_view line = raw;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || (line_no == 1 && line.starts_with("#version"))) continue;
    const std::size_t space = line.find(' ');
    if (space == std::string_view::npos || space == 0 ||
        line.find(' ', space + 1) != std::string_view::npos ||
        space + 1 == line.size()) {
      throw Error(ErrorCode::kArtifactInvalid,
                  fmt::format("{}:{}: expected two symbols", path.string(), line_no));
    }
    merges.emplace_back(line.substr(0, space), line.substr(space + 1));
  }
  return merges;
}

std::map<std::string, int> VocabFromJson(const Json& json,
                                         const std::filesystem::path& path) {
  if (!json.is_object()) {
    throw Error(ErrorCode::kArtifactInvalid, path.string() + ": vocab is not an object");
  }
  std::map<std::string, int> vocab;
  for (const auto& [token, id] : json.items()) {
    if (!id.is_number_integer() || id.get<long long>() < 0 ||
        id.get<long long>() > std::numeric_limits<int>::max()) {
      throw Error(ErrorCode::kArtifactInvalid,
                  fmt::format("{}: bad id for token {}", path.string(), token));
    }
    vocab[token] = id.get<int>();
  }
  return vocab;
}

bool HasByteLevelComponent(const Json& node) {
  if (node.is_object()) {
    if (node.value("type", "") == "ByteLevel") return true;
    for (const auto& [key, value] : node.items()) {
      if (HasByteLevelComponent(value)) return true;
    }
  } else if (node.is_array()) {
    for (const auto& value : node) {
      if (HasByteLevelComponent(value)) return true;
    }
  }
  return false;
}

Tokenizer LoadDirectory(const std::filesystem::path& dir, const LoadOptions& options) {
  const auto vocab_path = dir / "vocab.json";
  const auto merges_path = dir / "merges.txt";
  if (!std::filesystem::exists(vocab_path) || !std::filesystem::exists(merges_path)) {
    throw Error(ErrorCode::kFileNotFound,
                dir.string() + " lacks vocab.json or merges.txt");
  }
  Pretokenizer pretokenizer = Pretokenizer::kGpt2;
  std::vector<std::string> specials;
  bool ignore_merges = false;
  const auto meta_path = dir / "artifact.json";
  if (std::filesystem::exists(meta_path)) {
    const Json meta = ParseJsonFile(meta_path);
    try {
      if (meta.contains("pretokenizer")) {
        pretokenizer = ParsePretokenizer(meta["pretokenizer"].get<std::string>());
      }
      specials = meta.value("special_tokens", std::vector<std::string>{});
      ignore_merges = meta.value("ignore_merges", false);
    } catch (const Json::exception& e) {
      throw Error(ErrorCode::kArtifactInvalid,
                  fmt::format("{}: {}", meta_path.string(), e.what()));
    }
  }
  if (options.pretokenizer) pretokenizer = *options.pretokenizer;
  return Tokenizer::FromVocabMerges(
      VocabFromJson(ParseJsonFile(vocab_path), vocab_path),
      ParseMergesText(ReadFile(merges_path), merges_path), pretokenizer,
      std::move(specials), ignore_merges);
}

Tokenizer LoadTokenizerJson(const std::filesystem::path& path,
                            const LoadOptions& options) {
  const Json json = ParseJsonFile(path);
  if (!json.contains("model") || !json["model"].is_object()) {
    throw Error(ErrorCode::kArtifactInvalid, path.string() + " has no model");
  }
  const Json& model = json["model"];
  const std::string type = model.value("type", "");
  if (type != "BPE") {
    throw Error(ErrorCode::kUnsupportedTokenizer,
                fmt::format("{}: model type '{}' is not BPE", path.string(), type));
  }
  if (!HasByteLevelComponent(json.value("pre_tokenizer", Json())) &&
      !HasByteLevelComponent(json.value("decoder", Json()))) {
    throw Error(ErrorCode::kUnsupportedTokenizer,
                path.string() + ": BPE without byte-level encoding");
  }
  std::vector<std::pair<std::string, std::string>> merges;
  for (const Json& m : model.value("merges", Json::array())) {
    if (m.is_string()) {
      const std::string s = m.get<std::string>();
      const std::size_t space = s.find(' ');
      if (space == std::string::npos) {
        throw Error(ErrorCode::kArtifactInvalid, "malformed merge '" + s + "'");
      }
      merges.emplace_back(s.substr(0, space), s.substr(space + 1));
    } else if (m.is_array() && m.size() == 2) {
      merges.emplace_back(m[0].get<std::string>(), m[1].get<std::string>());
    } else {
      throw Error(ErrorCode::kArtifactInvalid, "malformed merge entry");
    }
  }
  std::vector<std::string> specials;
  for (const Json& added : json.value("added_tokens", Json::array())) {
    if (added.value("special", false)) specials.push_back(added.value("content", ""));
  }
  Pretokenizer pretokenizer = Pretokenizer::kGpt2;
  if (json.value("pre_tokenizer", Json()).dump().find("\\\\p{N}{1,3}") !=
      std::string::npos) {
    pretokenizer = Pretokenizer::kLlama3;
  }
  if (options.pretokenizer) pretokenizer = *options.pretokenizer;
  std::map<std::string, int> vocab =
      VocabFromJson(model.value("vocab", Json::object()), path);
  for (const Json& added : json.value("added_tokens", Json::array())) {
    if (added.contains("content") && added.contains("id")) {
      vocab.emplace(added["content"].get<std::string>(), added["id"].get<int>());
    }
  }
  return Tokenizer::FromVocabMerges(vocab, merges, pretokenizer,
                                    std::move(specials),
                                    model.value("ignore_merges", false));
}

Tokenizer LoadRankFile(const std::filesystem::path& path, const LoadOptions& options) {
  const std::string data = ReadFile(path);
  std::map<std::string, int> ranks;
  std::size_t line_no = 0;
  for (const std::string& line : Split(data, '\n')) {
    ++line_no;
    if (TrimWhitespace(line).empty()) continue;
    const std::vector<std::string> fields = SplitWhitespace(line);
    std::optional<std::string> token;
    int rank = -1;
    if (fields.size() == 2) {
      token = Base64Decode(fields[0]);
      try {
        std::size_t used = 0;
        rank = std::stoi(fields[1], &used);
        if (used != fields[1].size()) rank = -1;
      } catch (const std::exception&) {
        rank = -1;
      }
    }
    if (!token || rank < 0) {
      if (ranks.empty()) {
        throw Error(ErrorCode::kUnsupportedTokenizer,
                    path.string() + " is not a recognised tokenizer artifact");
      }
      throw Error(ErrorCode::kArtifactInvalid,
                  fmt::format("{}:{}: expected '<base64> <rank>'", path.string(),
                              line_no));
    }
    ranks[*token] = rank;
  }
  if (ranks.empty()) throw Error(ErrorCode::kArtifactInvalid, path.string() + " is empty");
  const Pretokenizer pretokenizer = options.pretokenizer.value_or(
      ranks.size() >= 100000 ? Pretokenizer::kLlama3 : Pretokenizer::kGpt2);
  return Tokenizer::FromRanks(ranks, pretokenizer);
}

}  // namespace

std::string_view PretokenizerName(Pretokenizer kind) {
  return kind == Pretokenizer::kGpt2 ? "gpt2" : "llama3";
}

Pretokenizer ParsePretokenizer(std::string_view name) {
  if (name == "gpt2") return Pretokenizer::kGpt2;
  if (name == "llama3") return Pretokenizer::kLlama3;
  throw Error(ErrorCode::kInvalidArgument,
              fmt::format("unknown pretokenizer '{}'", name));
}

std::vector<std::string_view> Pretokenize(Pretokenizer kind, std::string_view text) {
  std::vector<std::string_view> out;
  const auto* s = reinterpret_cast<const std::uint8_t*>(text.data());
  const auto n = static_cast<std::int32_t>(text.size());
  std::int32_t run_start = 0;
  std::int32_t i = 0;
  while (i < n) {
    const std::int32_t start = i;
    UChar32 c;
    U8_NEXT(s, i, n, c);
    if (c >= 0) continue;
    SplitValid(kind, text.substr(run_start, start - run_start), out);
    for (std::int32_t b = start; b < i; ++b) out.push_back(text.substr(b, 1));
    run_start = i;
  }
  SplitValid(kind, text.substr(run_start), out);
  return out;
}

const std::array<std::string, 256>& ByteToUnicode() {
  static const std::array<std::string, 256> table = [] {
    std::array<std::string, 256> t;
    auto printable = [](int b) {
      return (b >= '!' && b <= '~') || (b >= 0xA1 && b <= 0xAC) ||
             (b >= 0xAE && b <= 0xFF);
    };
    int extra = 0;
    for (int b = 0; b < 256; ++b) {
      const UChar32 cp = printable(b) ? b : 256 + extra++;
      char buf[4];
      std::int32_t len = 0;
      U8_APPEND_UNSAFE(buf, len, cp);
      t[b] = std::string(buf, len);
    }
    return t;
  }();
  return table;
}

// ---------------------------------------------------------------------------

void Tokenizer::AddToken(std::string bytes, int id) {
  if (id < 0) throw Error(ErrorCode::kArtifactInvalid, "negative token id");
  const auto uid = static_cast<std::size_t>(id);
  if (uid >= id_to_bytes_.size()) {
    id_to_bytes_.resize(uid + 1);
    id_present_.resize(uid + 1, false);
  }
  if (id_present_[uid]) {
    throw Error(ErrorCode::kArtifactInvalid, fmt::format("duplicate id {}", id));
  }
  id_present_[uid] = true;
  id_to_bytes_[uid] = bytes;
  ++token_count_;
  if (!bytes_to_id_.emplace(std::move(bytes), id).second) {
    throw Error(ErrorCode::kArtifactInvalid,
                fmt::format("token with id {} is duplicated", id));
  }
}

void Tokenizer::AddSpecial(const std::string& text, int id) {
  const auto uid = static_cast<std::size_t>(id);
  if (uid >= id_to_bytes_.size()) {
    id_to_bytes_.resize(uid + 1);
    id_present_.resize(uid + 1, false);
  }
  if (id_present_[uid]) {
    throw Error(ErrorCode::kArtifactInvalid, fmt::format("duplicate id {}", id));
  }
  id_present_[uid] = true;
  id_to_bytes_[uid] = text;
  ++token_count_;
  specials_[text] = id;
}

void Tokenizer::AddPair(int left, int right, std::uint32_t rank, int merged) {
  pair_ranks_.try_emplace(PairKey(left, right), Merge{rank, merged});
}

void Tokenizer::Finish() {
  for (int b = 0; b < 256; ++b) {
    auto it = bytes_to_id_.find(std::string(1, static_cast<char>(b)));
    if (it == bytes_to_id_.end()) {
      throw Error(ErrorCode::kArtifactInvalid,
                  fmt::format("vocabulary lacks the single byte 0x{:02x}", b));
    }
    byte_ids_[b] = it->second;
  }
}

Tokenizer Tokenizer::FromVocabMerges(
    const std::map<std::string, int>& vocab,
    const std::vector<std::pair<std::string, std::string>>& merges,
    Pretokenizer pretokenizer, std::vector<std::string> special_tokens,
    bool ignore_merges) {
  Tokenizer t;
  t.pretokenizer_ = pretokenizer;
  t.ignore_merges_ = ignore_merges;
  t.source_ = "vocab+merges";
  const std::set<std::string> specials(special_tokens.begin(), special_tokens.end());
  const auto table = UnicodeToByte();
  std::unordered_map<std::string, int> by_display;
  for (const auto& [token, id] : vocab) {
    if (specials.contains(token)) {
      t.AddSpecial(token, id);
      continue;
    }
    std::optional<std::string> bytes = DecodeByteLevel(token, table);
    if (!bytes) {
      throw Error(ErrorCode::kArtifactInvalid,
                  fmt::format("token '{}' is not byte-level encoded", token));
    }
    t.AddToken(std::move(*bytes), id);
    by_display.emplace(token, id);
  }
  std::uint32_t rank = 0;
  for (const auto& [left, right] : merges) {
    auto l = by_display.find(left);
    auto r = by_display.find(right);
    auto m = by_display.find(left + right);
    if (l == by_display.end() || r == by_display.end() || m == by_display.end()) {
      throw Error(ErrorCode::kArtifactInvalid,
                  fmt::format("merge {} '{} {}' refers to a token outside the "
                              "vocabulary",
                              rank, left, right));
    }
    t.AddPair(l->second, r->second, rank++, m->second);
  }
  t.Finish();
  return t;
}

Tokenizer Tokenizer::FromRanks(const std::map<std::string, int>& ranks,
                               Pretokenizer pretokenizer,
                               std::map<std::string, int> special_tokens) {
  Tokenizer t;
  t.pretokenizer_ = pretokenizer;
  t.ignore_merges_ = true;
  t.source_ = "ranks";
  for (const auto& [bytes, rank] : ranks) t.AddToken(bytes, rank);
  for (const auto& [text, id] : special_tokens) t.AddSpecial(text, id);
  // Every split of a token into two known tokens merges at the token's rank.
  for (const auto& [bytes, rank] : ranks) {
    for (std::size_t cut = 1; cut < bytes.size(); ++cut) {
      auto l = t.bytes_to_id_.find(bytes.substr(0, cut));
      if (l == t.bytes_to_id_.end()) continue;
      auto r = t.bytes_to_id_.find(bytes.substr(cut));
      if (r == t.bytes_to_id_.end()) continue;
      t.AddPair(l->second, r->second, static_cast<std::uint32_t>(rank), rank);
    }
  }
  t.Finish();
  return t;
}

Tokenizer Tokenizer::Load(const std::filesystem::path& path,
                          const LoadOptions& options) {
  if (!std::filesystem::exists(path)) {
    throw Error(ErrorCode::kFileNotFound, path.string());
  }
  Tokenizer t;
  if (std::filesystem::is_directory(path)) {
    if (std::filesystem::exists(path / "vocab.json")) {
      t = LoadDirectory(path, options);
    } else if (std::filesystem::exists(path / "tokenizer.json")) {
      t = LoadTokenizerJson(path / "tokenizer.json", options);
    } else {
      throw Error(ErrorCode::kFileNotFound,
                  path.string() + " holds no vocab.json or tokenizer.json");
    }
  } else if (path.extension() == ".json") {
    t = LoadTokenizerJson(path, options);
  } else {
    t = LoadRankFile(path, options);
  }
  t.source_ = path.string();
  return t;
}

void Tokenizer::EncodePiece(std::string_view piece, std::vector<int>& out) const {
  if (ignore_merges_) {
    auto it = bytes_to_id_.find(std::string(piece));
    if (it != bytes_to_id_.end()) {
      out.push_back(it->second);
      return;
    }
  }
  std::vector<int> parts;
  parts.reserve(piece.size());
  for (char c : piece) parts.push_back(byte_ids_[static_cast<std::uint8_t>(c)]);
  while (parts.size() > 1) {
    std::uint32_t best = std::numeric_limits<std::uint32_t>::max();
    std::size_t best_at = 0;
    int merged = -1;
    for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
      auto it = pair_ranks_.find(PairKey(parts[i], parts[i + 1]));
      if (it != pair_ranks_.end() && it->second.rank < best) {
        best = it->second.rank;
        best_at = i;
        merged = it->second.merged;
      }
    }
    if (merged < 0) break;
    parts[best_at] = merged;
    parts.erase(parts.begin() + static_cast<std::ptrdiff_t>(best_at) + 1);
  }
  out.insert(out.end(), parts.begin(), parts.end());
}

std::vector<int> Tokenizer::Encode(std::string_view text) const {
  std::vector<int> out;
  for (std::string_view piece : Pretokenize(pretokenizer_, text)) {
    EncodePiece(piece, out);
  }
  return out;
}

const std::string& Tokenizer::TokenBytes(int id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= id_to_bytes_.size() ||
      !id_present_[static_cast<std::size_t>(id)]) {
    throw Error(ErrorCode::kInvalidArgument, fmt::format("unknown token id {}", id));
  }
  return id_to_bytes_[static_cast<std::size_t>(id)];
}

std::string Tokenizer::Decode(std::span<const int> ids) const {
  std::string out;
  for (int id : ids) out += TokenBytes(id);
  return out;
}

std::string Tokenizer::TokenDisplay(int id) const {
  const std::string& bytes = TokenBytes(id);
  if (specials_.contains(bytes) && specials_.at(bytes) == id) return bytes;
  std::string out;
  for (char c : bytes) out += ByteToUnicode()[static_cast<std::uint8_t>(c)];
  return out;
}

// ---------------------------------------------------------------------------

Json TokenInflationReport::ToJson() const {
  auto list = [](const std::string& text, const TokenList& tokens) {
    return Json{{"text", text},
                {"count", tokens.ids.size()},
                {"ids", tokens.ids},
                {"pieces", tokens.pieces}};
  };
  return Json{{"word", word},
              {"context", context},
              {"rendered", rendered},
              {"horizontal", list(horizontal_text, horizontal)},
              {"vertical", list(vertical_text, vertical)},
              {"character_tokens", character_tokens},
              {"inflation_ratio", inflation_ratio}};
}

TokenInflationReport Inflate(const Tokenizer& tokenizer, std::string_view word,
                             std::optional<std::string_view> context,
                             std::optional<std::size_t> word_index) {
  if (word.empty()) throw Error(ErrorCode::kInvalidArgument, "word is empty");
  for (char c : word) {
    const auto u = static_cast<unsigned char>(c);
    if (u < 0x80 && !std::isalpha(u)) {
      throw Error(ErrorCode::kInvalidArgument,
                  fmt::format("word '{}' is not alphabetic", word));
    }
  }
  TokenInflationReport report;
  report.word = std::string(word);
  report.context = std::string(context.value_or(word));

  const Sentence sentence = Decompose(report.context);
  std::size_t index = word_index.value_or(FindWord(sentence, word));
  if (index == std::string::npos || index >= sentence.words.size()) {
    throw Error(ErrorCode::kWordNotInSentence,
                fmt::format("'{}' does not occur in '{}'", word, report.context));
  }
  const Rendering rendering = Verticalize(sentence, {{index}, ' '});
  report.rendered = rendering.rendered;

  // Byte offsets of the vertical word's characters in the rendering.
  std::vector<std::size_t> row_start;
  std::size_t offset = 0;
  for (const std::string& row : rendering.grid.rows) {
    row_start.push_back(offset);
    offset += row.size() + 1;
  }
  const std::size_t column = rendering.grid.placements.at(index).column;
  std::set<std::size_t> occupied;
  for (std::size_t r = 0; r < sentence.words[index].size(); ++r) {
    occupied.insert(row_start[r] + column);
  }

  auto fill = [&](TokenList& list, int id) {
    list.ids.push_back(id);
    list.pieces.push_back(tokenizer.TokenBytes(id));
  };
  report.horizontal_text = " " + report.word;
  for (int id : tokenizer.Encode(report.horizontal_text)) fill(report.horizontal, id);

  // The region runs from the word's first character to its last; tokens
  // overlapping it are counted.
  const std::size_t region_begin = *occupied.begin();
  const std::size_t region_end = *occupied.rbegin() + 1;
  std::size_t pos = 0;
  for (int id : tokenizer.Encode(report.rendered)) {
    const std::size_t len = tokenizer.TokenBytes(id).size();
    if (pos < region_end && pos + len > region_begin) {
      fill(report.vertical, id);
      report.vertical_text += tokenizer.TokenBytes(id);
      auto hit = occupied.lower_bound(pos);
      if (hit != occupied.end() && *hit < pos + len) ++report.character_tokens;
    }
    pos += len;
  }
  report.inflation_ratio = static_cast<double>(report.vertical.ids.size()) /
                           static_cast<double>(report.horizontal.ids.size());
  return report;
}

}  // namespace vertattack
