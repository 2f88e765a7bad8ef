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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>

#include <gtest/gtest.h>

#include "json.hpp"
#include "vertattack/error.h"

namespace vertattack {
namespace {

namespace fs = std::filesystem;
using Json = nlohmann::json;

const fs::path kFixtures = VERTATTACK_FIXTURE_DIR;
const fs::path kGpt2 = fs::path(VERTATTACK_SOURCE_DIR) / "data" / "tokenizers" / "gpt2";

ErrorCode CodeOf(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::kIoError;
}

std::vector<std::string> Pieces(Pretokenizer kind, std::string_view text) {
  std::vector<std::string> out;
  for (std::string_view p : Pretokenize(kind, text)) out.emplace_back(p);
  return out;
}

using V = std::vector<std::string>;

TEST(PretokenizeTest, Gpt2PatternMatchesReference) {
  EXPECT_EQ(Pieces(Pretokenizer::kGpt2, "I'm  here\n\n  ok"),
            (V{"I", "'m", " ", " here", "\n\n ", " ok"}));
  EXPECT_EQ(Pieces(Pretokenizer::kGpt2, "a b day\n  a\n  d"),
            (V{"a", " b", " day", "\n ", " a", "\n ", " d"}));
  EXPECT_EQ(Pieces(Pretokenizer::kGpt2, "x²½ 1234"), (V{"x", "²½", " 1234"}));
  EXPECT_EQ(Pieces(Pretokenizer::kGpt2, "Zürich 東京😀"), (V{"Zürich", " 東京", "😀"}));
  EXPECT_TRUE(Pieces(Pretokenizer::kGpt2, "").empty());
}

TEST(PretokenizeTest, Llama3PatternMatchesReference) {
  EXPECT_EQ(Pieces(Pretokenizer::kLlama3, "I'M  here\n\n  ok"),
            (V{"I", "'M", " ", " here", "\n\n", " ", " ok"}));
  EXPECT_EQ(Pieces(Pretokenizer::kLlama3, "a b day\n  a\n  d"),
            (V{"a", " b", " day", "\n", " ", " a", "\n", " ", " d"}));
  EXPECT_EQ(Pieces(Pretokenizer::kLlama3, "x 1234567"), (V{"x", " ", "123", "456", "7"}));
  EXPECT_EQ(Pieces(Pretokenizer::kLlama3, "$5.99!\n\n"), (V{"$", "5", ".", "99", "!\n\n"}));
}

TEST(PretokenizeTest, InvalidUtf8BytesStandAlone) {
  const std::string text = std::string("ab") + '\xff' + "cd";
  const V pieces = Pieces(Pretokenizer::kGpt2, text);
  std::string joined;
  for (const auto& p : pieces) joined += p;
  EXPECT_EQ(joined, text);
  EXPECT_NE(std::find(pieces.begin(), pieces.end(), std::string(1, '\xff')), pieces.end());
}

TEST(ByteToUnicodeTest, PrintableBytesMapToThemselves) {
  const auto& table = ByteToUnicode();
  EXPECT_EQ(table['a'], "a");
  EXPECT_EQ(table[' '], "Ġ");
  EXPECT_EQ(table['\n'], "Ċ");
  std::set<std::string> distinct(table.begin(), table.end());
  EXPECT_EQ(distinct.size(), 256u);
}

class Gpt2Test : public ::testing::Test {
 protected:
  static void SetUpTestSuite() { tokenizer_ = new Tokenizer(Tokenizer::Load(kGpt2)); }
  static void TearDownTestSuite() {
    delete tokenizer_;
    tokenizer_ = nullptr;
  }
  static const Tokenizer& tok() { return *tokenizer_; }
  static Tokenizer* tokenizer_;
};
Tokenizer* Gpt2Test::tokenizer_ = nullptr;

TEST_F(Gpt2Test, ArtifactShape) {
  EXPECT_EQ(tok().vocab_size(), 50257u);
  EXPECT_EQ(tok().pretokenizer(), Pretokenizer::kGpt2);
  EXPECT_TRUE(tok().special_tokens().contains("<|endoftext|>"));
}

TEST_F(Gpt2Test, KnownEncodings) {
  EXPECT_TRUE(tok().Encode("").empty());
  EXPECT_EQ(tok().Encode(" vertical"), (std::vector<int>{11723}));
  EXPECT_EQ(tok().Encode("a b day\n  a\n  d"),
            (std::vector<int>{64, 275, 1110, 198, 220, 257, 198, 220, 288}));
  EXPECT_EQ(tok().TokenBytes(11723), " vertical");
  EXPECT_EQ(tok().TokenDisplay(11723), "Ġvertical");
}

TEST_F(Gpt2Test, MatchesReferenceTokenizerOnCorpus) {
  std::ifstream in(kFixtures / "tokenizer_corpus_gpt2.jsonl");
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    const Json row = Json::parse(line);
    const std::string text = row["text"].get<std::string>();
    ASSERT_EQ(tok().Encode(text), row["ids"].get<std::vector<int>>()) << "line " << n + 1;
    ++n;
  }
  EXPECT_EQ(n, 1000u);
}

TEST_F(Gpt2Test, ByteRoundTripOnRandomStrings) {
  std::mt19937_64 rng(20260101);
  std::uniform_int_distribution<int> byte(0, 255);
  std::uniform_int_distribution<int> length(0, 64);
  for (int i = 0; i < 10000; ++i) {
    std::string s(static_cast<std::size_t>(length(rng)), '\0');
    for (char& c : s) c = static_cast<char>(byte(rng));
    const std::vector<int> ids = tok().Encode(s);
    ASSERT_EQ(tok().Decode(ids), s) << i;
  }
}

TEST_F(Gpt2Test, SingleColumnNeverBeatsWordLength) {
  std::ifstream in(kFixtures / "words_1k.txt");
  std::string word;
  std::size_t n = 0;
  while (std::getline(in, word)) {
    ASSERT_LE(word.size(), 6u);
    const TokenInflationReport r = Inflate(tok(), word);
    EXPECT_GE(r.vertical.ids.size(), word.size()) << word;
    ++n;
  }
  EXPECT_EQ(n, 1000u);
}

TEST_F(Gpt2Test, InflateVertical) {
  const TokenInflationReport r = Inflate(tok(), "vertical");
  EXPECT_EQ(r.horizontal_text, " vertical");
  EXPECT_EQ(r.horizontal.ids.size(), 1u);
  EXPECT_EQ(r.rendered, "v\ne\nr\nt\ni\nc\na\nl");
  EXPECT_EQ(r.vertical.ids.size(), 15u);
  EXPECT_EQ(r.character_tokens, 8u);
  EXPECT_EQ(r.inflation_ratio, 15.0);
  std::string joined;
  for (const auto& p : r.vertical.pieces) joined += p;
  EXPECT_EQ(joined, r.vertical_text);
}

TEST_F(Gpt2Test, InflateSingleLetter) {
  const TokenInflationReport r = Inflate(tok(), "a");
  EXPECT_EQ(r.horizontal.ids.size(), 1u);
  EXPECT_EQ(r.vertical.ids.size(), 1u);
  EXPECT_EQ(r.inflation_ratio, 1.0);
}

TEST_F(Gpt2Test, InflateInsideContext) {
  const TokenInflationReport r = Inflate(tok(), "bad", "a bad day", 1);
  EXPECT_EQ(r.rendered, "a b day\n  a\n  d");
  EXPECT_EQ(r.context, "a bad day");
  EXPECT_GE(r.vertical.ids.size(), 3u);
  EXPECT_EQ(r.character_tokens, 3u);
  EXPECT_EQ(CodeOf([&] { Inflate(tok(), "good", "a bad day"); }), ErrorCode::kWordNotInSentence);
  EXPECT_EQ(CodeOf([&] { Inflate(tok(), "b4d"); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(CodeOf([&] { Inflate(tok(), ""); }), ErrorCode::kInvalidArgument);
}

TEST(Llama3Test, SpotCheckWithUserArtifact) {
  const char* env = std::getenv("VERTATTACK_LLAMA3_TOKENIZER");
  const std::string path = env != nullptr && *env != '\0' ? env : VERTATTACK_LLAMA3_DEFAULT;
  if (path.empty()) GTEST_SKIP() << "VERTATTACK_LLAMA3_TOKENIZER not set";
  const Tokenizer tok = Tokenizer::Load(path);
  EXPECT_EQ(tok.pretokenizer(), Pretokenizer::kLlama3);
  const TokenInflationReport r = Inflate(tok, "vertical");
  EXPECT_EQ(r.horizontal.ids.size(), 1u);
  EXPECT_GE(r.vertical.ids.size(), 8u);
  const fs::path golden = kFixtures / "tokenizer_corpus_llama3.jsonl";
  if (!fs::exists(golden)) return;
  std::ifstream in(golden);
  std::string line;
  while (std::getline(in, line)) {
    const Json row = Json::parse(line);
    ASSERT_EQ(tok.Encode(row["text"].get<std::string>()), row["ids"].get<std::vector<int>>());
  }
}

class ArtifactTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("vertattack_tok_" +
            std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  fs::path Write(const std::string& name, const std::string& content) {
    std::ofstream(dir_ / name, std::ios::binary) << content;
    return dir_ / name;
  }

  static std::map<std::string, int> ByteVocab() {
    std::map<std::string, int> vocab;
    for (int b = 0; b < 256; ++b) vocab[ByteToUnicode()[b]] = b;
    return vocab;
  }
  fs::path dir_;
};

TEST_F(ArtifactTest, TinyVocabMergesEncode) {
  auto vocab = ByteVocab();
  vocab["ab"] = 256;
  vocab["abc"] = 257;
  const Tokenizer t =
      Tokenizer::FromVocabMerges(vocab, {{"a", "b"}, {"ab", "c"}}, Pretokenizer::kGpt2);
  EXPECT_EQ(t.Encode("abc"), (std::vector<int>{257}));
  EXPECT_EQ(t.Encode("abd"), (std::vector<int>{256, 'd'}));
  EXPECT_EQ(t.merge_count(), 2u);
}

TEST_F(ArtifactTest, MergeOutsideVocabIsInvalid) {
  auto vocab = ByteVocab();
  EXPECT_EQ(CodeOf([&] {
              Tokenizer::FromVocabMerges(vocab, {{"a", "b"}}, Pretokenizer::kGpt2);
            }),
            ErrorCode::kArtifactInvalid);
}

TEST_F(ArtifactTest, MissingByteIsInvalid) {
  auto vocab = ByteVocab();
  vocab.erase(ByteToUnicode()[0]);
  EXPECT_EQ(CodeOf([&] { Tokenizer::FromVocabMerges(vocab, {}, Pretokenizer::kGpt2); }),
            ErrorCode::kArtifactInvalid);
}

TEST_F(ArtifactTest, RankFileMatchesVocabMerges) {
  std::string ranks;
  static const char kB64[] =
      "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
  const auto b64 = [&](const std::string& s) {
    std::string out;
    for (std::size_t i = 0; i < s.size(); i += 3) {
      std::uint32_t v = static_cast<unsigned char>(s[i]) << 16;
      if (i + 1 < s.size()) v |= static_cast<unsigned char>(s[i + 1]) << 8;
      if (i + 2 < s.size()) v |= static_cast<unsigned char>(s[i + 2]);
      out += kB64[(v >> 18) & 63];
      out += kB64[(v >> 12) & 63];
      out += i + 1 < s.size() ? kB64[(v >> 6) & 63] : '=';
      out += i + 2 < s.size() ? kB64[v & 63] : '=';
    }
    return out;
  };
  for (int b = 0; b < 256; ++b) ranks += b64(std::string(1, static_cast<char>(b))) + " " + std::to_string(b) + "\n";
  ranks += b64("ab") + " 256\n" + b64("abc") + " 257\n";
  const Tokenizer t = Tokenizer::Load(Write("tiny.tiktoken", ranks));
  EXPECT_EQ(t.Encode("abc abd"), (std::vector<int>{257, ' ', 256, 'd'}));
  EXPECT_EQ(t.Decode(t.Encode("abc abd")), "abc abd");
}

TEST_F(ArtifactTest, LoadErrors) {
  EXPECT_EQ(CodeOf([&] { Tokenizer::Load(dir_ / "absent"); }), ErrorCode::kFileNotFound);
  const fs::path wordpiece =
      Write("tokenizer.json", R"({"model": {"type": "WordPiece", "vocab": {}}})");
  EXPECT_EQ(CodeOf([&] { Tokenizer::Load(wordpiece); }), ErrorCode::kUnsupportedTokenizer);
  const fs::path garbage = Write("ranks.tiktoken", "this is not a rank file\n");
  EXPECT_EQ(CodeOf([&] { Tokenizer::Load(garbage); }), ErrorCode::kUnsupportedTokenizer);
}

TEST_F(ArtifactTest, HuggingFaceTokenizerJsonMatchesVocabMerges) {
  std::ifstream vin(kGpt2 / "vocab.json");
  const Json vocab = Json::parse(vin);
  std::ifstream min(kGpt2 / "merges.txt");
  Json merges = Json::array();
  std::string line;
  while (std::getline(min, line)) {
    if (line.empty() || line.rfind("#version", 0) == 0) continue;
    merges.push_back(line);
  }
  const Json doc{
      {"model", {{"type", "BPE"}, {"vocab", vocab}, {"merges", merges}}},
      {"pre_tokenizer", {{"type", "ByteLevel"}, {"add_prefix_space", false}, {"use_regex", true}}},
      {"decoder", {{"type", "ByteLevel"}}},
      {"added_tokens", Json::array()}};
  std::ofstream(dir_ / "tokenizer.json") << doc.dump();
  const Tokenizer from_json = Tokenizer::Load(dir_ / "tokenizer.json");
  EXPECT_EQ(from_json.Encode("a b day\n  a\n  d"),
            (std::vector<int>{64, 275, 1110, 198, 220, 257, 198, 220, 288}));
  EXPECT_EQ(from_json.Encode(" vertical"), (std::vector<int>{11723}));
}

}  // namespace
}  // namespace vertattack
