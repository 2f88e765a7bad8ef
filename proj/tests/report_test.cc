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


#include "vertattack/report.h"

#include <filesystem>
#include <fstream>

#include <fmt/format.h>
#include <gtest/gtest.h>

#include "json.hpp"
#include "vertattack/error.h"

namespace vertattack {
namespace {

namespace fs = std::filesystem;
using Json = nlohmann::json;

const fs::path kFixtures = VERTATTACK_FIXTURE_DIR;

CellSummary Cell(std::string dataset, Condition condition, std::size_t k,
                 std::size_t correct, std::size_t n = 100) {
  CellSummary c;
  c.run_key = fmt::format("{}-{}-{}", dataset, ConditionName(condition), k);
  c.model = "gpt-3.5";
  c.dataset = std::move(dataset);
  c.condition = condition;
  c.k = k;
  c.strategy = "zero_shot@v1";
  c.n = n;
  c.accuracy = static_cast<double>(correct) / static_cast<double>(n);
  c.matrix = ConfusionMatrix({"positive", "negative"});
  c.matrix.Add("positive", "positive", correct);
  c.matrix.Add("negative", "positive", n - correct);
  return c;
}

TEST(FormatTest, DeltaFormat) {
  EXPECT_EQ(FormatDelta(0.93, 0.65), "(↓28.00)");
  EXPECT_EQ(FormatDelta(0.85, 0.62), "(↓23.00)");
  EXPECT_EQ(FormatDelta(0.47, 0.50), "(↑3.00)");
  EXPECT_EQ(FormatDelta(0.62, 0.62), "(0.00)");
  EXPECT_EQ(FormatPercent(0.93), "93.00");
  EXPECT_EQ(FormatPercent(1.0), "100.00");
  EXPECT_EQ(FormatPercent(0.0), "0.00");
}

TEST(FormatTest, DeltaIsVerticalMinusOriginalForEveryPercentPair) {
  for (int o = 0; o <= 100; ++o) {
    for (int v = 0; v <= 100; ++v) {
      const std::string d = FormatDelta(o / 100.0, v / 100.0);
      const std::string mag = fmt::format("{}.00", std::abs(v - o));
      const std::string expected =
          v == o ? "(0.00)" : fmt::format("({}{})", v < o ? "↓" : "↑", mag);
      ASSERT_EQ(d, expected) << o << " " << v;
    }
  }
  // The delta is taken between the displayed values: 66.67 - 33.33.
  EXPECT_EQ(FormatDelta(1.0 / 3.0, 2.0 / 3.0), "(↑33.34)");
}

TEST(BuildReportTest, TableRowWithDelta) {
  ReportInput input;
  input.cells = {Cell("sst2", Condition::kOriginal, 0, 93),
                 Cell("sst2", Condition::kVertical, 4, 65)};
  const ReportBundle b = BuildReport(input);
  EXPECT_TRUE(b.complete);
  EXPECT_NE(b.markdown.find("| gpt-3.5 | zero_shot@v1 | 93.00 | 65.00 (↓28.00) |"),
            std::string::npos)
      << b.markdown;
  ASSERT_EQ(b.summary["table"].size(), 1u);
  EXPECT_EQ(b.summary["table"][0]["delta"], "(↓28.00)");
  EXPECT_EQ(b.summary["table"][0]["delta_points"], -28.0);
}

TEST(BuildReportTest, PrefersTheTaskDefaultK) {
  ReportInput input;
  input.cells = {Cell("sst2", Condition::kOriginal, 0, 93),
                 Cell("sst2", Condition::kVertical, 1, 80),
                 Cell("sst2", Condition::kVertical, 4, 65),
                 Cell("sst2", Condition::kVertical, 6, 55)};
  EXPECT_EQ(BuildReport(input).summary["table"][0]["k"], 4);
  input.cells.erase(input.cells.begin() + 2);
  EXPECT_EQ(BuildReport(input).summary["table"][0]["k"], 6);
}

TEST(BuildReportTest, MissingVerticalCellIsFlagged) {
  ReportInput input;
  input.cells = {Cell("sst2", Condition::kOriginal, 0, 93),
                 Cell("jigsaw", Condition::kOriginal, 0, 85),
                 Cell("jigsaw", Condition::kVertical, 4, 62)};
  const ReportBundle b = BuildReport(input);
  EXPECT_FALSE(b.complete);
  EXPECT_FALSE(b.summary["complete"].get<bool>());
  EXPECT_NE(b.markdown.find("93.00 | n/a"), std::string::npos) << b.markdown;
  EXPECT_NE(b.markdown.find("62.00 (↓23.00)"), std::string::npos);
}

TEST(BuildReportTest, NothingToReport) {
  EXPECT_THROW(BuildReport({}), Error);
}

TEST(ConfusionRenderTest, RowsAreGoldLabels) {
  ConfusionMatrix m({"positive", "negative"});
  m.Add("positive", "positive", 43);
  m.Add("positive", "negative", 3);
  m.Add("negative", "positive", 5);
  m.Add("negative", "negative", 49);
  const std::string md = RenderConfusionMatrix(m);
  EXPECT_NE(md.find("| positive | 43 | 3 |"), std::string::npos) << md;
  EXPECT_NE(md.find("| negative | 5 | 49 |"), std::string::npos) << md;
}

TEST(SweepRenderTest, SvgHasOnePointPerK) {
  SweepResult s;
  s.model = "keyword-mock";
  s.dataset = "sst2";
  s.strategy_id = "zero_shot@v1";
  s.ks = {0, 1, 2, 3};
  s.accuracies = {1.0, 1.0, 0.5, 0.5};
  const std::string svg = RenderSweepSvg(std::span<const SweepResult>(&s, 1), "sst2");
  EXPECT_EQ(svg.rfind("<svg", 0), 0u);
  std::size_t circles = 0;
  for (std::size_t p = svg.find("<circle"); p != std::string::npos; p = svg.find("<circle", p + 1)) {
    ++circles;
  }
  EXPECT_EQ(circles, 4u);
  ReportInput input;
  input.sweeps = {s};
  const ReportBundle b = BuildReport(input);
  EXPECT_TRUE(b.plots.contains("sweep_sst2.svg"));
}

TEST(AttentionTest, CommittedFixtureRenders) {
  const AttentionReport r = LoadAttentionReport(kFixtures / "attention_vertical.json");
  EXPECT_EQ(r.schema_version, 1);
  EXPECT_EQ(r.condition, Condition::kVertical);
  EXPECT_EQ(r.tokens.size(), r.weights.size());
  double sum = 0;
  for (double w : r.weights) sum += w;
  EXPECT_NEAR(sum, 1.0, 1e-4);
  ReportInput input;
  input.attention = {r};
  const ReportBundle b = BuildReport(input);
  ASSERT_TRUE(b.plots.contains("attention_1_vertical.svg"));
  EXPECT_NE(b.plots.at("attention_1_vertical.svg").find("<svg"), std::string::npos);
  EXPECT_EQ(b.summary["attention"][0]["probe"], " bad");
  EXPECT_EQ(AttentionReport::FromJson(r.ToJson()).ToJson(), r.ToJson());
}

TEST(AttentionTest, InvalidReportsAreSchemaMismatches) {
  std::ifstream in(kFixtures / "attention_vertical.json");
  const Json good = Json::parse(in);
  const auto code_of = [](const Json& j) {
    try {
      AttentionReport::FromJson(j);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::kIoError;
  };
  Json j = good;
  j.erase("tokens");
  EXPECT_EQ(code_of(j), ErrorCode::kSchemaMismatch);
  j = good;
  j["schema_version"] = 2;
  EXPECT_EQ(code_of(j), ErrorCode::kSchemaMismatch);
  j = good;
  j["weights"][0] = 0.9;
  EXPECT_EQ(code_of(j), ErrorCode::kSchemaMismatch);
  j = good;
  j["weights"].erase(0);
  EXPECT_EQ(code_of(j), ErrorCode::kSchemaMismatch);
  j = good;
  j["condition"] = "sideways";
  EXPECT_EQ(code_of(j), ErrorCode::kSchemaMismatch);
  j = good;
  j["heads"] = 3;
  EXPECT_EQ(code_of(j), ErrorCode::kSchemaMismatch);
}

TEST(WriteReportTest, CollectsCellsAndIgnoresReportDirectory) {
  const fs::path dir = fs::temp_directory_path() / "vertattack_report_test";
  fs::remove_all(dir);
  for (const CellSummary& c : {Cell("sst2", Condition::kOriginal, 0, 93),
                               Cell("sst2", Condition::kVertical, 4, 65)}) {
    fs::create_directories(dir / c.run_key);
    Json summary{{"run_key", c.run_key}, {"model", c.model},       {"dataset", c.dataset},
                 {"condition", ConditionName(c.condition)},        {"k", c.k},
                 {"strategy", c.strategy}, {"accuracy", c.accuracy}, {"n", c.n},
                 {"confusion", c.matrix.ToJson()}};
    std::ofstream(dir / c.run_key / "summary.json") << summary.dump();
    std::ofstream(dir / c.run_key / "records.jsonl") << "";
  }
  const ReportBundle first = BuildReport(CollectRuns(dir));
  const auto written = WriteReport(first, dir / "report");
  EXPECT_TRUE(fs::exists(dir / "report" / "report.md"));
  EXPECT_TRUE(fs::exists(dir / "report" / "summary.json"));
  EXPECT_EQ(written.size(), 2u);
  const ReportInput again = CollectRuns(dir);
  EXPECT_EQ(again.cells.size(), 2u);
  EXPECT_EQ(BuildReport(again).markdown, first.markdown);
  fs::remove_all(dir);
  EXPECT_THROW(CollectRuns(dir), Error);
}

TEST(CellReportTest, MentionsAccuracyAndMatrix) {
  const std::string md = RenderCellReport(Cell("sst2", Condition::kVertical, 4, 65));
  EXPECT_NE(md.find("65.00"), std::string::npos) << md;
  EXPECT_NE(md.find("| positive |"), std::string::npos) << md;
}

}  // namespace
}  // namespace vertattack
