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

#include "vertattack/transform.h"

#include <algorithm>
#include <set>

#include <fmt/format.h>

#include "vertattack/error.h"
#include "vertattack/text_util.h"

namespace vertattack {

std::string Sentence::Joined() const {
  std::string out;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (i > 0) out.push_back(' ');
    out += words[i];
  }
  return out;
}

std::string_view OrientationName(Orientation orientation) {
  return orientation == Orientation::kVertical ? "vertical" : "horizontal";
}

Sentence Decompose(std::string_view text) {
  Sentence sentence;
  sentence.original_text = std::string(text);
  sentence.words = SplitWhitespace(text);
  if (sentence.words.empty()) {
    throw Error(ErrorCode::kEmptyInput, "text is empty after trimming");
  }
  if (sentence.words.size() > kMaxSentenceWords) {
    throw Error(ErrorCode::kOversizeInput,
                fmt::format("{} words exceeds the limit of {}",
                            sentence.words.size(), kMaxSentenceWords));
  }
  for (const std::string& word : sentence.words) {
    if (word.size() > kMaxWordLength) {
      throw Error(ErrorCode::kOversizeInput,
                  fmt::format("word of length {} exceeds the limit of {}",
                              word.size(), kMaxWordLength));
    }
  }
  return sentence;
}

void ValidateSpec(const Sentence& sentence, const TransformSpec& spec) {
  std::set<std::size_t> seen;
  for (std::size_t index : spec.vertical_indices) {
    if (index >= sentence.words.size()) {
      throw Error(ErrorCode::kSpecOutOfRange,
                  fmt::format("index {} with only {} words", index,
                              sentence.words.size()));
    }
    if (!seen.insert(index).second) {
      throw Error(ErrorCode::kDuplicateIndex,
                  fmt::format("index {} listed twice", index));
    }
  }
  if (spec.pad_char != ' ' && IsAsciiSpace(spec.pad_char)) {
    throw Error(ErrorCode::kInvalidArgument,
                "pad character must be ' ' or a non-whitespace character");
  }
  for (const std::string& word : sentence.words) {
    if (word.empty()) {
      throw Error(ErrorCode::kInvalidArgument, "sentence contains an empty word");
    }
    if (word.find(spec.pad_char) != std::string::npos) {
      throw Error(ErrorCode::kInvalidArgument,
                  fmt::format("pad character occurs inside word '{}'", word));
    }
  }
}

Rendering Verticalize(const Sentence& sentence, const TransformSpec& spec) {
  ValidateSpec(sentence, spec);
  const std::set<std::size_t> vertical(spec.vertical_indices.begin(),
                                       spec.vertical_indices.end());
  const char pad = spec.pad_char;

  Rendering out;
  LayoutGrid& grid = out.grid;
  std::string row0;
  std::vector<std::pair<std::size_t, const std::string*>> columns;
  for (std::size_t i = 0; i < sentence.words.size(); ++i) {
    if (i > 0) row0.push_back(pad);
    const std::string& word = sentence.words[i];
    const std::size_t column = row0.size();
    if (vertical.contains(i)) {
      row0.push_back(word.front());
      columns.emplace_back(column, &word);
      grid.height = std::max(grid.height, word.size());
      grid.placements[i] = {0, column, Orientation::kVertical};
    } else {
      row0 += word;
      grid.placements[i] = {0, column, Orientation::kHorizontal};
    }
  }

  grid.rows.reserve(grid.height);
  grid.rows.push_back(std::move(row0));
  for (std::size_t r = 1; r < grid.height; ++r) {
    std::string row(grid.rows.front().size(), pad);
    for (const auto& [column, word] : columns) {
      if (r < word->size()) row[column] = (*word)[r];
    }
    row.erase(row.find_last_not_of(pad) + 1);
    grid.rows.push_back(std::move(row));
  }
  std::string& row0_ref = grid.rows.front();
  row0_ref.erase(row0_ref.find_last_not_of(pad) + 1);

  for (std::size_t r = 0; r < grid.rows.size(); ++r) {
    if (r > 0) out.rendered.push_back('\n');
    out.rendered += grid.rows[r];
  }
  return out;
}

Sentence Reconstruct(std::string_view rendered, char pad_char) {
  std::vector<std::string> rows = Split(rendered, '\n');
  for (std::string& row : rows) {
    if (!row.empty() && row.back() == '\r') row.pop_back();
  }
  // Blank trailing rows carry no characters.
  while (rows.size() > 1 &&
         rows.back().find_first_not_of(pad_char) == std::string::npos) {
    rows.pop_back();
  }
  if (rows.empty() ||
      rows.front().find_first_not_of(pad_char) == std::string::npos) {
    throw Error(ErrorCode::kMalformedGrid, "no characters on the first row");
  }

  struct Token {
    std::size_t begin;
    std::size_t end;
  };
  const std::string& row0 = rows.front();
  std::vector<Token> tokens;
  for (std::size_t i = 0; i < row0.size();) {
    if (row0[i] == pad_char) {
      ++i;
      continue;
    }
    std::size_t start = i;
    while (i < row0.size() && row0[i] != pad_char) ++i;
    tokens.push_back({start, i});
  }

  // Column -> token index, for width-1 tokens only.
  std::map<std::size_t, std::size_t> narrow;
  for (std::size_t t = 0; t < tokens.size(); ++t) {
    if (tokens[t].end - tokens[t].begin == 1) narrow[tokens[t].begin] = t;
  }

  std::vector<std::string> words;
  words.reserve(tokens.size());
  for (const Token& token : tokens) {
    words.push_back(row0.substr(token.begin, token.end - token.begin));
  }
  std::vector<bool> ended(tokens.size(), false);
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const std::string& row = rows[r];
    std::vector<bool> present(tokens.size(), false);
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (row[c] == pad_char) continue;
      auto it = narrow.find(c);
      if (it == narrow.end()) {
        throw Error(ErrorCode::kMalformedGrid,
                    fmt::format("row {} column {} is not under a vertical "
                                "word's first character",
                                r, c));
      }
      const std::size_t t = it->second;
      if (ended[t]) {
        throw Error(ErrorCode::kMalformedGrid,
                    fmt::format("gap in column {} above row {}", c, r));
      }
      present[t] = true;
      words[t].push_back(row[c]);
    }
    for (const auto& [column, t] : narrow) {
      if (!present[t]) ended[t] = true;
    }
  }

  Sentence sentence;
  sentence.words = std::move(words);
  sentence.original_text = sentence.Joined();
  return sentence;
}

std::size_t FindWord(const Sentence& sentence, std::string_view word,
                     std::span<const std::size_t> taken) {
  auto is_taken = [&](std::size_t i) {
    return std::find(taken.begin(), taken.end(), i) != taken.end();
  };
  for (std::size_t i = 0; i < sentence.words.size(); ++i) {
    if (!is_taken(i) && EqualsIgnoreCase(sentence.words[i], word)) return i;
  }
  const std::string_view bare = StripPunctuation(word);
  if (bare.empty()) return std::string::npos;
  for (std::size_t i = 0; i < sentence.words.size(); ++i) {
    if (!is_taken(i) &&
        EqualsIgnoreCase(StripPunctuation(sentence.words[i]), bare)) {
      return i;
    }
  }
  return std::string::npos;
}

}  // namespace vertattack
