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

#ifndef VERTATTACK_EMBEDDED_PROMPTS_H_
#define VERTATTACK_EMBEDDED_PROMPTS_H_

#include <map>
#include <string>

namespace vertattack::internal {

// File name -> contents of every file under prompts/, generated at build time.
const std::map<std::string, std::string>& EmbeddedPromptFiles();

}  // namespace vertattack::internal

#endif  // VERTATTACK_EMBEDDED_PROMPTS_H_
