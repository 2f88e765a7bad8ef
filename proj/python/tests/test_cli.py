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

"""Runs every CLI subcommand offline and checks each JSON document against its schema."""

import json
import os
import pathlib
import subprocess
import time

import jsonschema
import pytest

ROOT = pathlib.Path(__file__).resolve().parents[2]
FIXTURES = ROOT / "tests" / "fixtures"
SCHEMAS = ROOT / "docs" / "schemas"
GPT2 = str(ROOT / "data" / "tokenizers" / "gpt2")


def cli_path():
    path = os.environ.get("VERTATTACK_CLI") or str(ROOT / "build" / "vertattack")
    if not pathlib.Path(path).exists():
        pytest.skip(f"CLI binary not found at {path}")
    return path


def validate(name, document):
    schema = json.loads((SCHEMAS / f"{name}.schema.json").read_text())
    jsonschema.Draft202012Validator(schema).validate(document)


def run(*args):
    env = dict(os.environ, VERTATTACK_OFFLINE="1")
    result = subprocess.run([cli_path(), *args], capture_output=True, text=True, env=env,
                            timeout=60, check=False)
    assert result.returncode == 0, result.stderr
    return json.loads(result.stdout)


def test_every_subcommand(tmp_path):
    out = str(tmp_path)
    start = time.monotonic()
    cases = [
        ("transform", ["transform", "--text", "a bad day", "--indices", "1", "--json"]),
        ("select", ["select", "--text", "overburdened with complicated plotting", "-k", "2",
                    "--json"]),
        ("prompts_render", ["prompts", "render", "--strategy", "cot", "--task", "sst2",
                            "--text", "a bad day", "--json"]),
        ("data_load", ["data", "load", "--dataset", "sst2", "--path",
                       str(FIXTURES / "mock_sst2.tsv"), "--split-n", "10", "--json"]),
        ("run", ["--out-dir", out, "run", "--config", str(FIXTURES / "mock_run.toml"), "--json"]),
        ("sweep_output", ["--out-dir", out, "sweep", "--config",
                          str(FIXTURES / "mock_sweep.toml"), "--json"]),
        ("tokens_inflate", ["tokens", "inflate", "--artifact", GPT2, "--word", "vertical"]),
        ("tokens_encode", ["tokens", "encode", "--artifact", GPT2, "--text", "a bad day",
                           "--json"]),
        ("report", ["--out-dir", out, "report", "--runs", out, "--attention",
                    str(FIXTURES / "attention_vertical.json"), "--json"]),
    ]
    outputs = {}
    for schema, args in cases:
        outputs[schema] = run(*args)
        validate(schema, outputs[schema])

    validate("manifest", json.loads((tmp_path / "manifest.json").read_text()))
    cells = [p for p in tmp_path.iterdir() if (p / "records.jsonl").exists()]
    assert cells
    for cell in cells:
        validate("cell_summary", json.loads((cell / "summary.json").read_text()))
    for sweep in (tmp_path / "sweeps").iterdir():
        validate("sweep", json.loads(sweep.read_text()))
    validate("attention_report", json.loads((FIXTURES / "attention_vertical.json").read_text()))

    accuracies = {(c["condition"], c["k"]): c["accuracy"] for c in outputs["run"]["cells"]}
    assert accuracies == {("original", 0): 1.0, ("vertical", 1): 0.5}
    assert outputs["sweep_output"]["sweeps"][0]["accuracy"] == [1.0, 1.0, 0.5, 0.5, 0.5]
    assert time.monotonic() - start < 60


def test_errors_exit_nonzero(tmp_path):
    env = dict(os.environ, VERTATTACK_OFFLINE="1")
    bad = subprocess.run([cli_path(), "transform", "--text", "a bad day", "--indices", "9"],
                         capture_output=True, text=True, env=env, check=False)
    assert bad.returncode == 2
    assert bad.stderr.startswith("error:")
    usage = subprocess.run([cli_path(), "transform", "--bogus"], capture_output=True, text=True,
                           env=env, check=False)
    assert usage.returncode == 1
