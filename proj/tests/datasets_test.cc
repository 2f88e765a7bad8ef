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

#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>

#include "json.hpp"
#include "vertattack/error.h"

namespace vertattack {
namespace {

namespace fs = std::filesystem;

ErrorCode CodeOf(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::kIoError;
}

class DatasetFileTest : public ::testing::Test {
 protected:
  fs::path Write(const std::string& name, const std::string& content) {
    const fs::path path = dir_ / name;
    std::ofstream(path, std::ios::binary) << content;
    return path;
  }
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("vertattack_datasets_" +
            std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  fs::path dir_;
};

TEST_F(DatasetFileTest, Sst2RowsMapToDisplayLabels) {
  const LoadResult r =
      LoadDataset("sst2", Write("a.tsv", "sentence\tlabel\na stirring film\t1\ndull\t0\n"));
  ASSERT_EQ(r.samples.size(), 2u);
  EXPECT_EQ(r.samples[0].text, "a stirring film");
  EXPECT_EQ(r.samples[0].gold, "positive");
  EXPECT_EQ(r.samples[0].id, "sst2-000001");
  EXPECT_EQ(r.samples[1].gold, "negative");
  EXPECT_EQ(r.data_rows, 2u);
}

TEST_F(DatasetFileTest, Sst2WithoutHeader) {
  const LoadResult r = LoadDataset("sst2", Write("a.tsv", "a stirring film\t1\n"));
  ASSERT_EQ(r.samples.size(), 1u);
  EXPECT_EQ(r.samples[0].gold, "positive");
}

TEST_F(DatasetFileTest, Sst2WithThreeColumnsIsSchemaMismatch) {
  const fs::path path = Write("a.tsv", "a stirring film\t1\textra\n");
  EXPECT_EQ(CodeOf([&] { LoadDataset("sst2", path); }), ErrorCode::kSchemaMismatch);
}

TEST_F(DatasetFileTest, BadLabelsAreRejectedAndCounted) {
  const LoadResult r =
      LoadDataset("sst2", Write("a.tsv", "good\t1\nbad\t7\n \t0\nfine\t0\n"));
  EXPECT_EQ(r.samples.size(), 2u);
  EXPECT_EQ(r.data_rows, 4u);
  EXPECT_EQ(r.rejected_ids, (std::vector<std::string>{"sst2-000002", "sst2-000003"}));
}

TEST_F(DatasetFileTest, ColaUsesFourthColumn) {
  const LoadResult r = LoadDataset(
      "cola", Write("in_domain.tsv", "gj04\t1\t\tThe sailors rode the breeze.\n"
                                     "gj04\t0\t*\tThe more we study verbs.\n"));
  ASSERT_EQ(r.samples.size(), 2u);
  EXPECT_EQ(r.samples[0].text, "The sailors rode the breeze.");
  EXPECT_EQ(r.samples[0].gold, "acceptable");
  EXPECT_EQ(r.samples[1].gold, "unacceptable");
}

TEST_F(DatasetFileTest, QnliKeepsQuestionSeparate) {
  const LoadResult r = LoadDataset(
      "qnli", Write("dev.tsv", "index\tquestion\tsentence\tlabel\n"
                               "7\tWhat is it?\tIt is a cat.\tentailment\n"));
  ASSERT_EQ(r.samples.size(), 1u);
  EXPECT_EQ(r.samples[0].id, "qnli-7");
  EXPECT_EQ(r.samples[0].text, "It is a cat.");
  EXPECT_EQ(r.samples[0].text2, "What is it?");
  EXPECT_EQ(r.samples[0].gold, "entailment");
  const fs::path headless = Write("b.tsv", "7\tq\ts\tentailment\n");
  EXPECT_EQ(CodeOf([&] { LoadDataset("qnli", headless); }), ErrorCode::kSchemaMismatch);
}

TEST_F(DatasetFileTest, RottenTomatoesCsvWithQuotes) {
  const LoadResult r = LoadDataset(
      "rotten_tomatoes", Write("rt.csv", "text,label\n\"a \"\"fresh\"\", witty film\",1\nflat,0\n"));
  ASSERT_EQ(r.samples.size(), 2u);
  EXPECT_EQ(r.samples[0].text, "a \"fresh\", witty film");
  EXPECT_EQ(r.samples[0].gold, "positive");
}

TEST_F(DatasetFileTest, JigsawAnyFlagMeansToxic) {
  const std::string header =
      "id,comment_text,toxic,severe_toxic,obscene,threat,insult,identity_hate\n";
  const LoadResult r = LoadDataset(
      "jigsaw", Write("train.csv", header + "a1,\"you fool\",1,0,0,0,1,0\n"
                                            "b2,nice edit,0,0,0,0,0,0\n"
                                            "c3,rude,0,0,0,0,1,0\n"
                                            "d4,odd,0,2,0,0,0,0\n"));
  ASSERT_EQ(r.samples.size(), 3u);
  EXPECT_EQ(r.samples[0].id, "jigsaw-a1");
  EXPECT_EQ(r.samples[0].gold, "toxic");
  EXPECT_EQ(r.samples[1].gold, "non-toxic");
  EXPECT_EQ(r.samples[2].gold, "toxic");
  EXPECT_EQ(r.rejected_ids, (std::vector<std::string>{"jigsaw-d4"}));
}

TEST_F(DatasetFileTest, JsonlRows) {
  const LoadResult r = LoadDataset(
      "sst2", Write("a.jsonl", "{\"id\": \"x\", \"text\": \"fine\", \"label\": 1}\n"
                               "{\"text\": \"bad\", \"label\": \"negative\"}\n"));
  ASSERT_EQ(r.samples.size(), 2u);
  EXPECT_EQ(r.samples[0].id, "x");
  EXPECT_EQ(r.samples[0].gold, "positive");
  EXPECT_EQ(r.samples[1].gold, "negative");
}

TEST_F(DatasetFileTest, MissingAndEmptyFiles) {
  EXPECT_EQ(CodeOf([&] { LoadDataset("sst2", dir_ / "absent.tsv"); }),
            ErrorCode::kFileNotFound);
  const fs::path empty = Write("empty.tsv", "");
  EXPECT_EQ(CodeOf([&] { LoadDataset("sst2", empty); }), ErrorCode::kEmptyFile);
  const fs::path header_only = Write("header.tsv", "sentence\tlabel\n");
  EXPECT_EQ(CodeOf([&] { LoadDataset("sst2", header_only); }), ErrorCode::kEmptyFile);
}

TEST_F(DatasetFileTest, WriteJsonlRoundTrips) {
  const std::vector<Sample> samples{{"sst2-000001", "good", std::nullopt, "positive", "sst2"}};
  const fs::path path = dir_ / "out" / "split.jsonl";
  WriteJsonl(samples, path);
  const LoadResult r = LoadDataset("sst2", path);
  EXPECT_EQ(r.samples, samples);
}

TEST(CsvTest, Rfc4180) {
  const auto rows = ParseCsv("a,\"b,c\",\"d\"\"e\"\r\n\"multi\nline\",x\n");
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"a", "b,c", "d\"e"}));
  EXPECT_EQ(rows[1], (std::vector<std::string>{"multi\nline", "x"}));
  EXPECT_THROW(ParseCsv("\"unterminated\n"), Error);
}

std::vector<Sample> Synthetic(std::size_t positives, std::size_t negatives) {
  std::vector<Sample> out;
  for (std::size_t i = 0; i < positives + negatives; ++i) {
    char id[8];
    std::snprintf(id, sizeof(id), "s%04zu", i);
    out.push_back({id, "text", std::nullopt, i < positives ? "positive" : "negative", "sst2"});
  }
  return out;
}

TEST(SplitRngTest, MatchesReferenceSequence) {
  // Values from an independent Python implementation of the generator.
  SplitRng rng(42);
  EXPECT_EQ(rng.Next(), 0x31b0ece7c4f697a2ULL);
  EXPECT_EQ(rng.Next(), 0x9008a3b1cb686f03ULL);
  EXPECT_EQ(rng.Next(), 0x7c7173abd97be16fULL);
  SplitRng bounded(42);
  std::vector<std::uint64_t> draws;
  for (int i = 0; i < 10; ++i) draws.push_back(bounded.Uniform(10));
  EXPECT_EQ(draws, (std::vector<std::uint64_t>{2, 3, 9, 3, 2, 3, 1, 9, 7, 3}));
}

TEST(DrawSplitTest, StratifiedDrawIsBalanced) {
  const auto samples = Synthetic(600, 400);
  const auto split = DrawSplit(samples, {100, 1, true});
  ASSERT_EQ(split.size(), 100u);
  std::size_t positives = 0;
  for (const Sample& s : split) positives += s.gold == "positive";
  EXPECT_EQ(positives, 50u);
}

TEST(DrawSplitTest, MatchesReferenceDraw) {
  const auto split = DrawSplit(Synthetic(600, 400), {10, 7, true});
  std::vector<std::string> ids;
  for (const Sample& s : split) ids.push_back(s.id);
  EXPECT_EQ(ids, (std::vector<std::string>{"s0903", "s0397", "s0816", "s0339", "s0267",
                                           "s0435", "s0287", "s0787", "s0746", "s0669"}));
}

TEST(DrawSplitTest, DeterministicAndSeedSensitive) {
  const auto samples = Synthetic(600, 400);
  EXPECT_EQ(DrawSplit(samples, {100, 7, true}), DrawSplit(samples, {100, 7, true}));
  EXPECT_NE(DrawSplit(samples, {100, 7, true}), DrawSplit(samples, {100, 8, true}));
}

TEST(DrawSplitTest, EdgeCases) {
  const auto samples = Synthetic(60, 4);
  EXPECT_TRUE(DrawSplit(samples, {0, 7, true}).empty());
  EXPECT_EQ(CodeOf([&] { DrawSplit(samples, {10, 7, true}); }), ErrorCode::kInsufficientLabel);
  EXPECT_EQ(DrawSplit(samples, {10, 7, false}).size(), 10u);
  EXPECT_EQ(CodeOf([&] { DrawSplit(samples, {65, 7, false}); }), ErrorCode::kInsufficientLabel);
  const auto odd = DrawSplit(Synthetic(10, 10), {5, 3, true});
  std::size_t positives = 0;
  for (const Sample& s : odd) positives += s.gold == "positive";
  EXPECT_EQ(positives, 3u);
}

}  // namespace
}  // namespace vertattack
