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

// Rendering of finished runs: the original/vertical accuracy table,
// confusion matrices, sweep charts, attention comparisons, and a summary.

#ifndef VERTATTACK_REPORT_H_
#define VERTATTACK_REPORT_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "vertattack/eval.h"

namespace vertattack {

// Accuracy in hundredths of a percentage point, rounded half away from zero.
std::int64_t PercentHundredths(double accuracy);

// 0.93 -> "93.00".
std::string FormatPercent(double accuracy);

// Vertical minus original in percentage points: "(↓28.00)", "(↑3.00)",
// "(0.00)". Both sides are rounded to two decimals first.
std::string FormatDelta(double original, double vertical);

// The fields of a cell's summary.json the report needs.
struct CellSummary {
  std::string run_key;
  std::string model;
  std::string dataset;
  Condition condition = Condition::kOriginal;
  std::size_t k = 0;
  std::string strategy;
  double accuracy = 0.0;
  std::size_t n = 0;
  ConfusionMatrix matrix;

  static CellSummary FromJson(const nlohmann::json& json);
};

// Per-token attention from a probe token, as produced by the attention probe.
struct AttentionReport {
  int schema_version = 1;
  std::string model;
  std::string text;
  std::string probe;
  bool probe_single_token = true;
  int layer = -1;
  nlohmann::json heads;  // "mean" or a list of head indices
  Condition condition = Condition::kOriginal;
  std::vector<std::string> tokens;
  std::vector<double> weights;

  // Throws SchemaMismatch on missing fields, length mismatch, weights outside
  // [0, 1], or weights summing past 1 + 1e-4.
  static AttentionReport FromJson(const nlohmann::json& json);
  nlohmann::json ToJson() const;
};

AttentionReport LoadAttentionReport(const std::filesystem::path& path);

struct ReportInput {
  std::vector<CellSummary> cells;
  std::vector<SweepResult> sweeps;
  std::vector<AttentionReport> attention;
};

// Reads <runs_dir>/*/summary.json and <runs_dir>/sweeps/*.json.
ReportInput CollectRuns(const std::filesystem::path& runs_dir);

struct ReportBundle {
  bool complete = true;
  std::string markdown;
  nlohmann::json summary;
  std::map<std::string, std::string> plots;  // file name -> SVG
};

// One row per (model, strategy) with an original and a vertical column per
// dataset, the vertical one suffixed with the delta; a missing side renders as
// "n/a" and clears `complete`. The vertical side uses the dataset's default
// k when present, else the largest k recorded. Throws EmptyRun when there is nothing to report.
ReportBundle BuildReport(const ReportInput& input);

// report.md for a single cell directory.
std::string RenderCellReport(const CellSummary& cell);

// Markdown table for one matrix; rows are gold labels.
std::string RenderConfusionMatrix(const ConfusionMatrix& matrix);

// Line chart of accuracy against k, one series per sweep.
std::string RenderSweepSvg(std::span<const SweepResult> sweeps,
                           std::string_view title);

// Horizontal bar chart of one attention row.
std::string RenderAttentionSvg(const AttentionReport& report);

// Writes report.md, summary.json, and plots/*.svg; returns the files written.
std::vector<std::filesystem::path> WriteReport(
    const ReportBundle& bundle, const std::filesystem::path& out_dir);

}  // namespace vertattack

#endif  // VERTATTACK_REPORT_H_
