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


#ifndef VERTATTACK_TESTS_SUPPORT_RANDOM_CORPUS_H_
#define VERTATTACK_TESTS_SUPPORT_RANDOM_CORPUS_H_

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "vertattack/transform.h"

namespace vertattack::testing {

struct RandomCase {
  std::string text;
  std::vector<std::string> words;
  std::vector<std::size_t> vertical;
};

// Sentences of 1..20 printable-ASCII words with a random index subset.
inline std::vector<RandomCase> RandomCorpus(std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto uniform = [&](std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
  };
  static const std::string kLetters = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ";
  static const std::string kOther = "0123456789.,;:!?'\"-()[]{}/@#$%&*+=<>_~`^|\\";
  std::vector<RandomCase> out;
  out.reserve(count);
  for (std::size_t c = 0; c < count; ++c) {
    RandomCase rc;
    const std::size_t n = uniform(1, 20);
    for (std::size_t i = 0; i < n; ++i) {
      std::string word;
      const std::size_t len = uniform(1, 12);
      for (std::size_t j = 0; j < len; ++j) {
        word.push_back(uniform(0, 9) < 8 ? kLetters[uniform(0, kLetters.size() - 1)]
                                         : kOther[uniform(0, kOther.size() - 1)]);
      }
      rc.words.push_back(word);
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i > 0) rc.text += std::string(uniform(1, 3), ' ');
      rc.text += rc.words[i];
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (uniform(0, 2) == 0) rc.vertical.push_back(i);
    }
    out.push_back(std::move(rc));
  }
  return out;
}

// Checks height, identity, and column laws; returns an empty string on success.
inline std::string CheckGridLaws(const RandomCase& rc, const Rendering& r) {
  std::size_t expected_height = 1;
  for (std::size_t i : rc.vertical) expected_height = std::max(expected_height, rc.words[i].size());
  if (r.grid.height != expected_height) return "height";
  if (r.grid.rows.size() != r.grid.height) return "row count";
  if (rc.vertical.empty()) {
    std::string joined;
    for (std::size_t i = 0; i < rc.words.size(); ++i) {
      if (i > 0) joined += ' ';
      joined += rc.words[i];
    }
    if (r.rendered != joined) return "identity";
  }
  for (const auto& [index, p] : r.grid.placements) {
    const std::string& word = rc.words[index];
    if (p.orientation == Orientation::kVertical) {
      for (std::size_t row = 0; row < word.size(); ++row) {
        const std::string& line = r.grid.rows[row];
        if (p.column >= line.size() || line[p.column] != word[row]) return "vertical column";
      }
    } else if (r.grid.rows[0].compare(p.column, word.size(), word) != 0) {
      return "horizontal column";
    }
  }
  return {};
}

}  // namespace vertattack::testing

#endif  // VERTATTACK_TESTS_SUPPORT_RANDOM_CORPUS_H_
