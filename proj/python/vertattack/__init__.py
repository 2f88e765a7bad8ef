# Copyright 2026 The vertattack Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Vertical-text perturbations, prompt rendering, and token-inflation probes."""

from vertattack._vertattack import (
    Tokenizer,
    VertattackError,
    __version__,
    build_prompt,
    format_delta,
    layout,
    parse_label,
    reconstruct,
    select_heuristic,
    verticalize,
)

__all__ = [
    "Tokenizer",
    "VertattackError",
    "__version__",
    "build_prompt",
    "format_delta",
    "layout",
    "parse_label",
    "reconstruct",
    "select_heuristic",
    "verticalize",
]
