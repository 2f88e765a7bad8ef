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

// Mixed horizontal/vertical grid layout of a sentence.
//
// Every horizontal word and the first character of every vertical word sit on
// row 0, separated by a single pad character. A vertical word occupies one
// column; its remaining characters run down that column, one per row. Rows
// are joined with '\n' and trailing pad characters are trimmed, so
//
//   verticalize("a bad day", {1}) == "a b day\n  a\n  d"
//
// reconstruct() inverts the rendering back to the word sequence.

#ifndef VERTATTACK_TRANSFORM_H_
#define VERTATTACK_TRANSFORM_H_

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace vertattack {

inline constexpr std::size_t kMaxWordLength = 50;
inline constexpr std::size_t kMaxSentenceWords = 512;

struct Sentence {
  std::vector<std::string> words;
  std::string original_text;

  // Words joined by single spaces.
  std::string Joined() const;

  friend bool operator==(const Sentence&, const Sentence&) = default;
};

struct TransformSpec {
  std::vector<std::size_t> vertical_indices;
  char pad_char = ' ';
};

enum class Orientation { kHorizontal, kVertical };

std::string_view OrientationName(Orientation orientation);

struct Placement {
  std::size_t row = 0;
  std::size_t column = 0;
  Orientation orientation = Orientation::kHorizontal;

  friend bool operator==(const Placement&, const Placement&) = default;
};

struct LayoutGrid {
  std::size_t height = 1;
  std::vector<std::string> rows;
  std::map<std::size_t, Placement> placements;  // keyed by word index
};

struct Rendering {
  LayoutGrid grid;
  std::string rendered;
};

// Splits on ASCII whitespace; punctuation stays attached to its word.
// Throws EmptyInput for blank text and OversizeInput past the size limits.
Sentence Decompose(std::string_view text);

// Throws SpecOutOfRange, DuplicateIndex, or InvalidArgument (pad character
// that is whitespace other than ' ' or occurs inside a word).
void ValidateSpec(const Sentence& sentence, const TransformSpec& spec);

Rendering Verticalize(const Sentence& sentence, const TransformSpec& spec);

// Inverse of Verticalize for renderings produced with `pad_char`. Throws
// MalformedGrid on empty input, ragged columns, or characters that do not sit
// under a width-1 row-0 token.
Sentence Reconstruct(std::string_view rendered, char pad_char = ' ');

// Index of the first word equal to `word` ignoring ASCII case, skipping
// indices in `taken`. Falls back to a comparison with surrounding
// punctuation stripped. Returns npos when absent.
std::size_t FindWord(const Sentence& sentence, std::string_view word,
                     std::span<const std::size_t> taken = {});

}  // namespace vertattack

#endif  // VERTATTACK_TRANSFORM_H_
