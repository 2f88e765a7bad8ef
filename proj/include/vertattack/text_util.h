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

#ifndef VERTATTACK_TEXT_UTIL_H_
#define VERTATTACK_TEXT_UTIL_H_

#include <string>
#include <string_view>
#include <vector>

namespace vertattack {

inline bool IsAsciiSpace(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' ||
         c == '\f';
}

std::string AsciiLower(std::string_view s);
std::string_view TrimWhitespace(std::string_view s);

// Drops leading and trailing characters that are neither ASCII letters nor
// digits (nor bytes >= 0x80, which are kept as part of the word).
std::string_view StripPunctuation(std::string_view s);

bool EqualsIgnoreCase(std::string_view a, std::string_view b);

std::vector<std::string> SplitWhitespace(std::string_view s);
std::vector<std::string> Split(std::string_view s, char delimiter);

// Lowercase hex SHA-256 of `data`.
std::string Sha256Hex(std::string_view data);

}  // namespace vertattack

#endif  // VERTATTACK_TEXT_UTIL_H_
