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


#include <optional>
#include <string>
#include <vector>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "json.hpp"
#include "vertattack/error.h"
#include "vertattack/prompts.h"
#include "vertattack/report.h"
#include "vertattack/select.h"
#include "vertattack/tokshift.h"
#include "vertattack/transform.h"
#include "vertattack/version.h"

namespace py = pybind11;

namespace vertattack {
namespace {

py::object ToPython(const nlohmann::json& value) {
  return py::module_::import("json").attr("loads")(value.dump());
}

char PadChar(const std::string& pad) {
  if (pad.size() != 1) throw Error(ErrorCode::kInvalidArgument, "pad must be one character");
  return pad[0];
}

Rendering Render(const std::string& text, std::vector<std::size_t> indices,
                 const std::string& pad) {
  return Verticalize(Decompose(text), {std::move(indices), PadChar(pad)});
}

py::dict Layout(const std::string& text, std::vector<std::size_t> indices,
                const std::string& pad) {
  const Sentence sentence = Decompose(text);
  const Rendering r = Verticalize(sentence, {std::move(indices), PadChar(pad)});
  py::list placements;
  for (const auto& [index, p] : r.grid.placements) {
    py::dict entry;
    entry["index"] = index;
    entry["word"] = sentence.words[index];
    entry["row"] = p.row;
    entry["column"] = p.column;
    entry["orientation"] = std::string(OrientationName(p.orientation));
    placements.append(entry);
  }
  py::dict out;
  out["rendered"] = r.rendered;
  out["height"] = r.grid.height;
  out["rows"] = r.grid.rows;
  out["placements"] = placements;
  return out;
}

std::vector<std::size_t> SelectWords(const std::string& text, std::size_t k) {
  SelectionRequest request;
  request.sentence = Decompose(text);
  request.k = k;
  return SelectHeuristic(request).indices;
}

py::list Prompt(const std::string& strategy, const std::string& task, const std::string& text,
                std::optional<std::string> question) {
  const TaskSpec& spec = GetTask(task);
  const PromptStrategy s = PromptStrategy::Create(ParseStrategy(strategy), spec);
  const std::string input =
      question ? FormatInput(spec, text, std::string_view(*question)) : FormatInput(spec, text);
  py::list out;
  for (const Message& m : BuildPrompt(s, input)) {
    py::dict entry;
    entry["role"] = m.role;
    entry["content"] = m.content;
    out.append(entry);
  }
  return out;
}

}  // namespace
}  // namespace vertattack

PYBIND11_MODULE(_vertattack, m) {
  using namespace vertattack;
  m.attr("__version__") = kVersion;

  py::exception<Error>(m, "VertattackError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object type = py::module_::import("vertattack._vertattack").attr("VertattackError");
      py::object instance = type(e.what());
      instance.attr("code") = std::string(ErrorCodeName(e.code()));
      PyErr_SetObject(type.ptr(), instance.ptr());
    }
  });

  m.def("verticalize",
        [](const std::string& text, std::vector<std::size_t> indices, const std::string& pad) {
          return Render(text, std::move(indices), pad).rendered;
        },
        py::arg("text"), py::arg("indices"), py::arg("pad") = " ",
        "Renders the words at `indices` as vertical columns.");
  m.def("layout", &Layout, py::arg("text"), py::arg("indices"), py::arg("pad") = " ",
        "Rendering plus grid rows and per-word placements.");
  m.def("reconstruct",
        [](const std::string& rendered, const std::string& pad) {
          return Reconstruct(rendered, PadChar(pad)).words;
        },
        py::arg("rendered"), py::arg("pad") = " ", "Recovers the word list from a rendering.");
  m.def("select_heuristic", &SelectWords, py::arg("text"), py::arg("k"),
        "Indices of the k longest non-stopwords, in sentence order.");
  m.def("build_prompt", &Prompt, py::arg("strategy"), py::arg("task"), py::arg("text"),
        py::arg("question") = py::none(), "Chat messages for one classification request.");
  m.def("parse_label",
        [](const std::string& generation, const std::string& task) {
          return ParseLabel(generation, GetTask(task)).label;
        },
        py::arg("generation"), py::arg("task"));
  m.def("format_delta", &FormatDelta, py::arg("original"), py::arg("vertical"),
        "Signed accuracy change in percentage points, e.g. \"(↓28.00)\".");

  py::class_<Tokenizer>(m, "Tokenizer")
      .def_static("load",
                  [](const std::filesystem::path& path) { return Tokenizer::Load(path); },
                  py::arg("path"))
      .def("encode", &Tokenizer::Encode, py::arg("text"))
      .def("decode",
           [](const Tokenizer& t, const std::vector<int>& ids) {
             return py::bytes(t.Decode(ids));
           },
           py::arg("ids"))
      .def_property_readonly("vocab_size", &Tokenizer::vocab_size)
      .def("inflate",
           [](const Tokenizer& t, const std::string& word, std::optional<std::string> context,
              std::optional<std::size_t> index) {
             std::optional<std::string_view> ctx;
             if (context) ctx = *context;
             return ToPython(Inflate(t, word, ctx, index).ToJson());
           },
           py::arg("word"), py::arg("context") = py::none(), py::arg("index") = py::none());
}
