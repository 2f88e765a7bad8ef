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

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>
#include <tuple>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "vertattack/error.h"
#include "vertattack/prompts.h"
#include "vertattack/text_util.h"

namespace vertattack {
namespace {

using Json = nlohmann::json;

constexpr std::string_view kMissing = "n/a";
constexpr std::string_view kDatasetOrder[] = {"sst2", "cola", "qnli",
                                              "rotten_tomatoes", "jigsaw"};
constexpr std::string_view kPalette[] = {"#1f77b4", "#d62728", "#2ca02c",
                                         "#9467bd", "#ff7f0e", "#8c564b"};

std::string FormatHundredths(std::int64_t h) {
  const std::int64_t a = h < 0 ? -h : h;
  return fmt::format("{}{}.{:02d}", h < 0 ? "-" : "", a / 100, a % 100);
}

std::size_t DatasetRank(const std::string& name) {
  auto it = std::find(std::begin(kDatasetOrder), std::end(kDatasetOrder), name);
  return static_cast<std::size_t>(it - std::begin(kDatasetOrder));
}

bool DatasetLess(const std::string& a, const std::string& b) {
  return std::tuple(DatasetRank(a), a) < std::tuple(DatasetRank(b), b);
}

std::string XmlEscape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string MarkdownCell(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c == '\n') {
      out += "\\n";
    } else if (c == '|') {
      out += "\\|";
    } else {
      out.push_back(c);
    }
  }
  return out;
}

std::string Slug(std::string_view s) {
  std::string out;
  for (char c : s) {
    out.push_back(std::isalnum(static_cast<unsigned char>(c)) ? c : '_');
  }
  return out;
}

std::optional<std::size_t> DefaultK(const std::string& dataset) {
  try {
    return GetTask(dataset).default_k;
  } catch (const Error&) {
    return std::nullopt;
  }
}

struct TableRow {
  std::string model;
  std::string strategy;
  friend auto operator<=>(const TableRow&, const TableRow&) = default;
};

struct TableCell {
  const CellSummary* original = nullptr;
  const CellSummary* vertical = nullptr;
};

void WriteText(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  out << text;
}

Json ReadJson(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kFileNotFound, path.string());
  Json json = Json::parse(in, nullptr, false);
  if (json.is_discarded()) {
    throw Error(ErrorCode::kSchemaMismatch, path.string() + " is not JSON");
  }
  return json;
}

}  // namespace

std::int64_t PercentHundredths(double accuracy) {
  return std::llround(accuracy * 10000.0);
}

std::string FormatPercent(double accuracy) {
  return FormatHundredths(PercentHundredths(accuracy));
}

std::string FormatDelta(double original, double vertical) {
  const std::int64_t delta =
      PercentHundredths(vertical) - PercentHundredths(original);
  if (delta == 0) return "(0.00)";
  const std::string_view arrow = delta < 0 ? "↓" : "↑";
  return fmt::format("({}{})", arrow, FormatHundredths(delta < 0 ? -delta : delta));
}

CellSummary CellSummary::FromJson(const Json& json) {
  try {
    CellSummary s;
    s.run_key = json.at("run_key").get<std::string>();
    s.model = json.at("model").get<std::string>();
    s.dataset = json.at("dataset").get<std::string>();
    s.condition = ParseCondition(json.at("condition").get<std::string>());
    s.k = json.at("k").get<std::size_t>();
    s.strategy = json.at("strategy").get<std::string>();
    s.accuracy = json.at("accuracy").get<double>();
    s.n = json.at("n").get<std::size_t>();
    s.matrix = ConfusionMatrix::FromJson(json.at("confusion"));
    return s;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kSchemaMismatch,
                fmt::format("cell summary: {}", e.what()));
  }
}

// ---------------------------------------------------------------------------

AttentionReport AttentionReport::FromJson(const Json& json) {
  AttentionReport r;
  try {
    r.schema_version = json.at("schema_version").get<int>();
    r.model = json.at("model").get<std::string>();
    r.text = json.at("text").get<std::string>();
    r.probe = json.at("probe").get<std::string>();
    r.probe_single_token = json.value("probe_single_token", true);
    r.layer = json.at("layer").get<int>();
    r.heads = json.at("heads");
    r.condition = ParseCondition(json.at("condition").get<std::string>());
    r.tokens = json.at("tokens").get<std::vector<std::string>>();
    r.weights = json.at("weights").get<std::vector<double>>();
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kSchemaMismatch,
                fmt::format("attention report: {}", e.what()));
  } catch (const Error& e) {
    throw Error(ErrorCode::kSchemaMismatch, e.detail());
  }
  if (r.schema_version != 1) {
    throw Error(ErrorCode::kSchemaMismatch,
                fmt::format("unsupported attention schema version {}",
                            r.schema_version));
  }
  if (!(r.heads.is_string() && r.heads.get<std::string>() == "mean") &&
      !r.heads.is_array()) {
    throw Error(ErrorCode::kSchemaMismatch,
                "heads must be \"mean\" or a list of head indices");
  }
  if (r.tokens.size() != r.weights.size()) {
    throw Error(ErrorCode::kSchemaMismatch,
                fmt::format("{} tokens but {} weights", r.tokens.size(),
                            r.weights.size()));
  }
  if (r.tokens.empty()) throw Error(ErrorCode::kSchemaMismatch, "no tokens");
  double sum = 0.0;
  for (double w : r.weights) {
    if (!(w >= 0.0 && w <= 1.0)) {
      throw Error(ErrorCode::kSchemaMismatch, "weight outside [0, 1]");
    }
    sum += w;
  }
  if (sum > 1.0 + 1e-4) {
    throw Error(ErrorCode::kSchemaMismatch,
                fmt::format("weights sum to {:.6f}", sum));
  }
  return r;
}

Json AttentionReport::ToJson() const {
  return Json{{"schema_version", schema_version},
              {"model", model},
              {"text", text},
              {"probe", probe},
              {"probe_single_token", probe_single_token},
              {"layer", layer},
              {"heads", heads},
              {"condition", ConditionName(condition)},
              {"tokens", tokens},
              {"weights", weights}};
}

AttentionReport LoadAttentionReport(const std::filesystem::path& path) {
  return AttentionReport::FromJson(ReadJson(path));
}

ReportInput CollectRuns(const std::filesystem::path& runs_dir) {
  if (!std::filesystem::is_directory(runs_dir)) {
    throw Error(ErrorCode::kFileNotFound, runs_dir.string());
  }
  ReportInput input;
  std::vector<std::filesystem::path> summaries;
  for (const auto& entry : std::filesystem::directory_iterator(runs_dir)) {
    const auto summary = entry.path() / "summary.json";
    if (entry.is_directory() && std::filesystem::exists(summary) &&
        std::filesystem::exists(entry.path() / "records.jsonl")) {
      summaries.push_back(summary);
    }
  }
  std::sort(summaries.begin(), summaries.end());
  for (const auto& path : summaries) {
    input.cells.push_back(CellSummary::FromJson(ReadJson(path)));
  }
  const auto sweeps_dir = runs_dir / "sweeps";
  if (std::filesystem::is_directory(sweeps_dir)) {
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(sweeps_dir)) {
      if (entry.path().extension() == ".json") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& path : files) {
      input.sweeps.push_back(SweepResult::FromJson(ReadJson(path)));
    }
  }
  return input;
}

// ---------------------------------------------------------------------------

std::string RenderConfusionMatrix(const ConfusionMatrix& matrix) {
  const std::vector<std::string> rows = matrix.RowLabels();
  const std::vector<std::string> cols = matrix.ColumnLabels();
  std::string out = "| gold \\ predicted |";
  for (const auto& c : cols) out += fmt::format(" {} |", c);
  out += "\n|---|";
  for (std::size_t i = 0; i < cols.size(); ++i) out += "---:|";
  out += "\n";
  for (const auto& r : rows) {
    out += fmt::format("| {} |", r);
    for (const auto& c : cols) out += fmt::format(" {} |", matrix.Count(r, c));
    out += "\n";
  }
  return out;
}

std::string RenderCellReport(const CellSummary& cell) {
  return fmt::format(
      "# Cell {}\n\n- model: {}\n- dataset: {}\n- strategy: {}\n"
      "- condition: {}\n- k: {}\n- n: {}\n- accuracy: {}\n\n{}",
      cell.run_key, cell.model, cell.dataset, cell.strategy,
      ConditionName(cell.condition), cell.k, cell.n, FormatPercent(cell.accuracy),
      RenderConfusionMatrix(cell.matrix));
}

std::string RenderSweepSvg(std::span<const SweepResult> sweeps,
                           std::string_view title) {
  constexpr double kWidth = 560, kHeight = 360;
  constexpr double kLeft = 60, kRight = 170, kTop = 40, kBottom = 50;
  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  std::size_t k_max = 1;
  for (const auto& s : sweeps) {
    if (!s.ks.empty()) k_max = std::max(k_max, s.ks.back());
  }
  auto x = [&](std::size_t k) {
    return kLeft + plot_w * static_cast<double>(k) / static_cast<double>(k_max);
  };
  auto y = [&](double acc) { return kTop + plot_h * (1.0 - acc); };

  std::string svg = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" "
      "viewBox=\"0 0 {0} {1}\" font-family=\"sans-serif\" font-size=\"12\">\n"
      "<rect width=\"{0}\" height=\"{1}\" fill=\"white\"/>\n"
      "<text x=\"{2}\" y=\"22\" font-size=\"14\">{3}</text>\n",
      kWidth, kHeight, kLeft, XmlEscape(title));
  for (int tick = 0; tick <= 100; tick += 20) {
    const double ty = y(tick / 100.0);
    svg += fmt::format(
        "<line x1=\"{0:.1f}\" y1=\"{1:.1f}\" x2=\"{2:.1f}\" y2=\"{1:.1f}\" "
        "stroke=\"#ddd\"/>\n<text x=\"{3:.1f}\" y=\"{4:.1f}\" "
        "text-anchor=\"end\">{5}</text>\n",
        kLeft, ty, kLeft + plot_w, kLeft - 6, ty + 4, tick);
  }
  for (std::size_t k = 0; k <= k_max; ++k) {
    svg += fmt::format(
        "<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"middle\">{}</text>\n",
        x(k), kTop + plot_h + 18, k);
  }
  svg += fmt::format(
      "<line x1=\"{0:.1f}\" y1=\"{1:.1f}\" x2=\"{0:.1f}\" y2=\"{2:.1f}\" "
      "stroke=\"black\"/>\n<line x1=\"{0:.1f}\" y1=\"{2:.1f}\" x2=\"{3:.1f}\" "
      "y2=\"{2:.1f}\" stroke=\"black\"/>\n",
      kLeft, kTop, kTop + plot_h, kLeft + plot_w);
  svg += fmt::format(
      "<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"middle\">vertical words "
      "(k)</text>\n<text x=\"16\" y=\"{:.1f}\" text-anchor=\"middle\" "
      "transform=\"rotate(-90 16 {:.1f})\">accuracy (%)</text>\n",
      kLeft + plot_w / 2, kHeight - 12, kTop + plot_h / 2, kTop + plot_h / 2);

  for (std::size_t i = 0; i < sweeps.size(); ++i) {
    const SweepResult& s = sweeps[i];
    const std::string_view color = kPalette[i % std::size(kPalette)];
    std::string points;
    for (std::size_t j = 0; j < s.ks.size(); ++j) {
      if (j > 0) points += ' ';
      points += fmt::format("{:.1f},{:.1f}", x(s.ks[j]), y(s.accuracies[j]));
    }
    svg += fmt::format(
        "<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"2\" "
        "points=\"{}\"/>\n",
        color, points);
    for (std::size_t j = 0; j < s.ks.size(); ++j) {
      svg += fmt::format(
          "<circle cx=\"{:.1f}\" cy=\"{:.1f}\" r=\"3\" fill=\"{}\"/>\n",
          x(s.ks[j]), y(s.accuracies[j]), color);
    }
    const double ly = kTop + 10 + 18.0 * static_cast<double>(i);
    svg += fmt::format(
        "<line x1=\"{0:.1f}\" y1=\"{1:.1f}\" x2=\"{2:.1f}\" y2=\"{1:.1f}\" "
        "stroke=\"{3}\" stroke-width=\"2\"/>\n<text x=\"{4:.1f}\" "
        "y=\"{5:.1f}\">{6}</text>\n",
        kLeft + plot_w + 12, ly, kLeft + plot_w + 32, color,
        kLeft + plot_w + 38, ly + 4, XmlEscape(s.model + " " + s.strategy_id));
  }
  svg += "</svg>\n";
  return svg;
}

std::string RenderAttentionSvg(const AttentionReport& report) {
  constexpr double kRow = 18, kLabel = 140, kBar = 300, kTop = 40;
  const double height = kTop + kRow * static_cast<double>(report.tokens.size()) + 20;
  const double width = kLabel + kBar + 80;
  const double max_w =
      std::max(1e-12, *std::max_element(report.weights.begin(), report.weights.end()));
  std::string svg = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" "
      "viewBox=\"0 0 {0} {1}\" font-family=\"monospace\" font-size=\"12\">\n"
      "<rect width=\"{0}\" height=\"{1}\" fill=\"white\"/>\n"
      "<text x=\"8\" y=\"22\" font-family=\"sans-serif\" font-size=\"14\">"
      "attention to '{2}' ({3}, {4})</text>\n",
      width, height, XmlEscape(report.probe), ConditionName(report.condition),
      XmlEscape(report.model));
  for (std::size_t i = 0; i < report.tokens.size(); ++i) {
    const double ty = kTop + kRow * static_cast<double>(i);
    const double w = report.weights[i];
    svg += fmt::format(
        "<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"end\">{}</text>\n"
        "<rect x=\"{:.1f}\" y=\"{:.1f}\" width=\"{:.1f}\" height=\"{:.1f}\" "
        "fill=\"#1f77b4\"/>\n<text x=\"{:.1f}\" y=\"{:.1f}\">{:.4f}</text>\n",
        kLabel - 6, ty + 12, XmlEscape(MarkdownCell(report.tokens[i])), kLabel,
        ty + 2, kBar * w / max_w, kRow - 4, kLabel + kBar * w / max_w + 4,
        ty + 12, w);
  }
  svg += "</svg>\n";
  return svg;
}

// ---------------------------------------------------------------------------

ReportBundle BuildReport(const ReportInput& input) {
  if (input.cells.empty() && input.sweeps.empty() && input.attention.empty()) {
    throw Error(ErrorCode::kEmptyRun, "nothing to report");
  }
  ReportBundle bundle;
  std::string& md = bundle.markdown;
  md += "# Vertical text evaluation report\n";

  // Cells, in a deterministic order.
  std::vector<const CellSummary*> cells;
  for (const auto& c : input.cells) cells.push_back(&c);
  std::sort(cells.begin(), cells.end(), [](const auto* a, const auto* b) {
    return std::tuple(a->model, a->strategy, DatasetRank(a->dataset), a->dataset,
                      a->condition, a->k, a->run_key) <
           std::tuple(b->model, b->strategy, DatasetRank(b->dataset), b->dataset,
                      b->condition, b->k, b->run_key);
  });

  std::set<TableRow> rows;
  std::vector<std::string> datasets;
  std::map<std::pair<TableRow, std::string>, TableCell> grid;
  for (const CellSummary* c : cells) {
    const TableRow row{c->model, c->strategy};
    rows.insert(row);
    if (std::find(datasets.begin(), datasets.end(), c->dataset) == datasets.end()) {
      datasets.push_back(c->dataset);
    }
    TableCell& cell = grid[{row, c->dataset}];
    if (c->condition == Condition::kOriginal) {
      cell.original = c;
    } else {
      const std::optional<std::size_t> preferred = DefaultK(c->dataset);
      const CellSummary* current = cell.vertical;
      const bool better =
          current == nullptr ||
          (preferred && c->k == *preferred && current->k != *preferred) ||
          (!(preferred && current->k == *preferred) && c->k > current->k);
      if (better) cell.vertical = c;
    }
  }
  std::sort(datasets.begin(), datasets.end(), DatasetLess);

  Json table = Json::array();
  if (!rows.empty()) {
    md += "\n## Accuracy (%)\n\n| model | strategy |";
    for (const auto& d : datasets) md += fmt::format(" {} original | {} vertical |", d, d);
    md += "\n|---|---|";
    for (std::size_t i = 0; i < datasets.size(); ++i) md += "---:|---:|";
    md += "\n";
    for (const TableRow& row : rows) {
      md += fmt::format("| {} | {} |", row.model, row.strategy);
      for (const auto& d : datasets) {
        const TableCell cell = grid[{row, d}];
        Json entry{{"model", row.model}, {"strategy", row.strategy},
                   {"dataset", d}};
        std::string text;
        text += cell.original ? FormatPercent(cell.original->accuracy)
                              : std::string(kMissing);
        text += " | ";
        text += cell.vertical ? FormatPercent(cell.vertical->accuracy)
                              : std::string(kMissing);
        entry["original"] = cell.original ? Json(cell.original->accuracy) : Json();
        entry["vertical"] = cell.vertical ? Json(cell.vertical->accuracy) : Json();
        entry["k"] = cell.vertical ? Json(cell.vertical->k) : Json();
        if (cell.original && cell.vertical) {
          const std::string delta =
              FormatDelta(cell.original->accuracy, cell.vertical->accuracy);
          text += " " + delta;
          entry["delta"] = delta;
          entry["delta_points"] =
              static_cast<double>(PercentHundredths(cell.vertical->accuracy) -
                                  PercentHundredths(cell.original->accuracy)) /
              100.0;
        } else {
          bundle.complete = false;
          entry["delta"] = Json();
          entry["delta_points"] = Json();
        }
        md += fmt::format(" {} |", text);
        table.push_back(std::move(entry));
      }
      md += "\n";
    }
    if (!bundle.complete) {
      md += "\nIncomplete: cells marked " + std::string(kMissing) +
            " have no recorded run.\n";
    }

    md += "\n## Confusion matrices\n";
    for (const CellSummary* c : cells) {
      md += fmt::format("\n### {} / {} / {} / {} k={} (n={}, accuracy {})\n\n",
                        c->model, c->dataset, c->strategy,
                        ConditionName(c->condition), c->k, c->n,
                        FormatPercent(c->accuracy));
      md += RenderConfusionMatrix(c->matrix);
    }
  }

  // Sweeps, one chart per dataset.
  Json sweeps = Json::array();
  if (!input.sweeps.empty()) {
    md += "\n## Accuracy by number of vertical words\n";
    std::map<std::string, std::vector<SweepResult>> by_dataset;
    for (const auto& s : input.sweeps) {
      by_dataset[s.dataset].push_back(s);
      sweeps.push_back(s.ToJson());
    }
    for (auto& [dataset, series] : by_dataset) {
      std::sort(series.begin(), series.end(), [](const auto& a, const auto& b) {
        return std::tie(a.model, a.strategy_id) < std::tie(b.model, b.strategy_id);
      });
      const std::string name = fmt::format("sweep_{}.svg", Slug(dataset));
      bundle.plots[name] = RenderSweepSvg(series, "Accuracy vs. k: " + dataset);
      md += fmt::format("\n### {}\n\n![sweep](plots/{})\n\n| model | strategy |",
                        dataset, name);
      std::size_t k_max = 0;
      for (const auto& s : series) {
        if (!s.ks.empty()) k_max = std::max(k_max, s.ks.back());
      }
      for (std::size_t k = 0; k <= k_max; ++k) md += fmt::format(" k={} |", k);
      md += "\n|---|---|";
      for (std::size_t k = 0; k <= k_max; ++k) md += "---:|";
      md += "\n";
      for (const auto& s : series) {
        md += fmt::format("| {} | {} |", s.model, s.strategy_id);
        for (std::size_t k = 0; k <= k_max; ++k) {
          auto it = std::find(s.ks.begin(), s.ks.end(), k);
          md += fmt::format(
              " {} |", it == s.ks.end()
                           ? std::string(kMissing)
                           : FormatPercent(s.accuracies[it - s.ks.begin()]));
        }
        md += "\n";
      }
    }
  }

  // Attention comparisons.
  Json attention = Json::array();
  if (!input.attention.empty()) {
    md += "\n## Attention toward the label token\n";
    for (std::size_t i = 0; i < input.attention.size(); ++i) {
      const AttentionReport& r = input.attention[i];
      const std::string name = fmt::format("attention_{}_{}.svg", i + 1,
                                           ConditionName(r.condition));
      bundle.plots[name] = RenderAttentionSvg(r);
      std::vector<std::size_t> order(r.tokens.size());
      std::iota(order.begin(), order.end(), 0);
      std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return r.weights[a] > r.weights[b];
      });
      const std::string heads =
          r.heads.is_string() ? r.heads.get<std::string>() : r.heads.dump();
      md += fmt::format(
          "\n### {} input, probe '{}' ({}, layer {}, heads {})\n\n"
          "![attention](plots/{})\n\n",
          ConditionName(r.condition), r.probe, r.model, r.layer, heads, name);
      if (!r.probe_single_token) {
        md += "The probe word spans several tokens; its last piece is used.\n\n";
      }
      md += "| rank | token | weight |\n|---:|---|---:|\n";
      Json top = Json::array();
      for (std::size_t j = 0; j < std::min<std::size_t>(5, order.size()); ++j) {
        md += fmt::format("| {} | `{}` | {:.4f} |\n", j + 1,
                          MarkdownCell(r.tokens[order[j]]), r.weights[order[j]]);
        top.push_back({{"token", r.tokens[order[j]]},
                       {"weight", r.weights[order[j]]}});
      }
      attention.push_back({{"model", r.model},
                           {"probe", r.probe},
                           {"condition", ConditionName(r.condition)},
                           {"layer", r.layer},
                           {"heads", r.heads},
                           {"top", top},
                           {"plot", "plots/" + name}});
    }
  }

  Json cell_json = Json::array();
  for (const CellSummary* c : cells) {
    cell_json.push_back({{"run_key", c->run_key},
                         {"model", c->model},
                         {"dataset", c->dataset},
                         {"strategy", c->strategy},
                         {"condition", ConditionName(c->condition)},
                         {"k", c->k},
                         {"n", c->n},
                         {"accuracy", c->accuracy},
                         {"confusion", c->matrix.ToJson()}});
  }
  bundle.summary = Json{{"complete", bundle.complete},
                        {"cells", cell_json},
                        {"table", table},
                        {"sweeps", sweeps},
                        {"attention", attention}};
  return bundle;
}

std::vector<std::filesystem::path> WriteReport(
    const ReportBundle& bundle, const std::filesystem::path& out_dir) {
  std::vector<std::filesystem::path> written;
  std::filesystem::create_directories(out_dir);
  WriteText(out_dir / "report.md", bundle.markdown);
  written.push_back(out_dir / "report.md");
  WriteText(out_dir / "summary.json", bundle.summary.dump(2) + "\n");
  written.push_back(out_dir / "summary.json");
  if (!bundle.plots.empty()) std::filesystem::create_directories(out_dir / "plots");
  for (const auto& [name, svg] : bundle.plots) {
    WriteText(out_dir / "plots" / name, svg);
    written.push_back(out_dir / "plots" / name);
  }
  return written;
}

}  // namespace vertattack
