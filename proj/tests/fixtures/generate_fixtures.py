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

"""Regenerates the committed test fixtures.

Run from the repository root:
  python3 tests/fixtures/generate_fixtures.py [--prompt-goldens BUILD/vertattack]

Tokenizer goldens come from the Hugging Face `tokenizers` package (GPT-2)
and `tiktoken` (Llama-3, only when VERTATTACK_LLAMA3_TOKENIZER is set).
"""

import argparse
import base64
import json
import os
import pathlib
import random
import re
import subprocess

ROOT = pathlib.Path(__file__).resolve().parents[2]
OUT = ROOT / "tests" / "fixtures"

POSITIVE = [
    "magnificent", "exhilarating", "spellbinding", "masterful", "triumphant",
    "delightful", "remarkable", "exquisite", "enchanting", "captivating",
    "marvelous", "sublime", "dazzling", "luminous", "heartfelt",
]
NEGATIVE = [
    "dreadful", "abysmal", "insufferable", "tedious", "disastrous",
    "lifeless", "incoherent", "miserable", "atrocious", "pointless",
    "tiresome", "unwatchable", "lackluster", "clumsy", "laughable",
]
FILLER = [
    "film", "plot", "cast", "story", "score", "scene", "actor", "script",
    "movie", "drama", "pace", "tone", "ending", "music", "set", "camera",
    "lead", "role", "hero", "town", "night", "year", "house", "road",
]
FRAMES = [
    "the {a} was {w} from start to end",
    "a {w} {a} with a {b} at its core",
    "this {a} is {w} and the {b} knows it",
    "{w} work by the {a} and the {b}",
    "an {w} {a} about a {b}",
    "the {a} feels {w} in every {b}",
]
SWEEP_FRAMES = [
    "the {a} was {w1} and {w2} all the way",
    "a {w1} {a} with a {w2} {b}",
    "{w1} {a} and {w2} {b} too",
    "this {a} is {w1} yet {w2} in its {b}",
]


def template_words():
    words = set()
    for path in (ROOT / "prompts").iterdir():
        words.update(re.findall(r"[a-z]+", path.read_text(encoding="utf-8").lower()))
    return words


def lexicon(min_len):
    banned = template_words()
    pos = [w for w in POSITIVE if w not in banned and len(w) >= min_len]
    neg = [w for w in NEGATIVE if w not in banned and len(w) >= min_len]
    return pos, neg


def write_tsv(path, rows):
    with open(path, "w", encoding="utf-8") as f:
        f.write("sentence\tlabel\n")
        for text, label in rows:
            f.write(f"{text}\t{label}\n")


def write_lexicon(path, pos, neg):
    with open(path, "w", encoding="utf-8") as f:
        f.write("# word<TAB>label\n")
        for w in pos:
            f.write(f"{w}\tpositive\n")
        for w in neg:
            f.write(f"{w}\tnegative\n")


def mock_fixture(rng):
    pos, neg = lexicon(8)
    rows = []
    for i in range(100):
        label = i % 2
        word = rng.choice(pos if label else neg)
        a, b = rng.sample(FILLER, 2)
        rows.append((rng.choice(FRAMES).format(w=word, a=a, b=b), label))
    rng.shuffle(rows)
    write_tsv(OUT / "mock_sst2.tsv", rows)
    write_lexicon(OUT / "mock_lexicon.tsv", pos, neg)


def sweep_fixture(rng):
    pos, neg = lexicon(8)
    rows = []
    for i in range(100):
        label = i % 2
        w1, w2 = rng.sample(pos if label else neg, 2)
        a, b = rng.sample(FILLER, 2)
        rows.append((rng.choice(SWEEP_FRAMES).format(w1=w1, w2=w2, a=a, b=b), label))
    rng.shuffle(rows)
    write_tsv(OUT / "sweep_sst2.tsv", rows)


def corpus(rng):
    words = FILLER + POSITIVE + NEGATIVE + [
        "don't", "it's", "we'll", "I'm", "they've", "3", "42", "2024", "1234567",
        "café", "naïve", "Zürich", "東京", "😀", "ünïcödé", "—", "...", "!?",
        "$5.99", "e-mail", "HTTP", "CamelCase", "snake_case", "#tag", "@user",
        "\t", "  ", "\n", "\r\n", "½", "١٢٣", "ǅ", "x²",
    ]
    out = []
    for _ in range(1000):
        n = rng.randint(1, 14)
        parts = [rng.choice(words) for _ in range(n)]
        seps = [rng.choice([" ", " ", " ", "  ", "\n", ""]) for _ in range(n)]
        out.append("".join(p + s for p, s in zip(parts, seps)))
    return out


def gpt2_golden(sentences):
    from tokenizers import Tokenizer, decoders, models, pre_tokenizers
    art = ROOT / "data" / "tokenizers" / "gpt2"
    tok = Tokenizer(models.BPE.from_file(str(art / "vocab.json"), str(art / "merges.txt")))
    tok.pre_tokenizer = pre_tokenizers.ByteLevel(add_prefix_space=False)
    tok.decoder = decoders.ByteLevel()
    with open(OUT / "tokenizer_corpus_gpt2.jsonl", "w", encoding="utf-8") as f:
        for s in sentences:
            f.write(json.dumps({"text": s, "ids": tok.encode(s).ids}, ensure_ascii=False) + "\n")


def llama3_golden(sentences):
    path = os.environ.get("VERTATTACK_LLAMA3_TOKENIZER")
    if not path:
        return
    import tiktoken
    ranks = {}
    for line in open(path, "rb"):
        if line.strip():
            token, rank = line.split()
            ranks[base64.b64decode(token)] = int(rank)
    pattern = (r"(?i:'s|'t|'re|'ve|'m|'ll|'d)|[^\r\n\p{L}\p{N}]?\p{L}+|\p{N}{1,3}"
               r"| ?[^\s\p{L}\p{N}]+[\r\n]*|\s*[\r\n]+|\s+(?!\S)|\s+")
    enc = tiktoken.Encoding("llama3", pat_str=pattern, mergeable_ranks=ranks,
                            special_tokens={})
    with open(OUT / "tokenizer_corpus_llama3.jsonl", "w", encoding="utf-8") as f:
        for s in sentences:
            f.write(json.dumps({"text": s, "ids": enc.encode_ordinary(s)},
                               ensure_ascii=False) + "\n")


def word_list(rng):
    vocab = json.loads((ROOT / "data" / "tokenizers" / "gpt2" / "vocab.json").read_text())
    words = sorted({t[1:].lower() for t in vocab
                    if t.startswith("Ġ") and t[1:].isascii() and t[1:].isalpha()
                    and 1 <= len(t) - 1 <= 6})
    pick = sorted(rng.sample(words, 1000))
    (OUT / "words_1k.txt").write_text("\n".join(pick) + "\n")


def attention_fixture():
    tokens = ["a", " b", " day", "\n", " ", " a", "\n", " ", " d", " .", " Is", " it",
              " bad", "?"]
    raw = [0.02, 0.03, 0.05, 0.04, 0.01, 0.02, 0.04, 0.01, 0.02, 0.06, 0.1, 0.1, 0.0, 0.0]
    total = sum(raw)
    weights = [round(w / total, 6) for w in raw]
    weights[-1] = round(1.0 - sum(weights[:-1]), 6)
    report = {
        "schema_version": 1,
        "model": "fixture-model",
        "text": "a b day\n  a\n  d",
        "probe": " bad",
        "probe_single_token": True,
        "layer": 11,
        "heads": "mean",
        "condition": "vertical",
        "tokens": tokens,
        "weights": weights,
    }
    (OUT / "attention_vertical.json").write_text(json.dumps(report, indent=2) + "\n")


def configs():
    (OUT / "mock_run.toml").write_text("""\
[run]
out_dir = "runs"
seed = 7
split_n = 100
conditions = ["original", "vertical"]
strategies = ["zero_shot"]
k = [1]

[model]
provider = "mock"
id = "keyword-mock"
lexicon = "mock_lexicon.tsv"
default_label = "positive"
parallelism = 4

[selector]
mode = "heuristic"

[datasets]
sst2 = "mock_sst2.tsv"
""")
    (OUT / "mock_sweep.toml").write_text("""\
[run]
out_dir = "runs"
seed = 7
split_n = 100
strategies = ["zero_shot"]
k_max = 4

[model]
provider = "mock"
id = "keyword-mock"
lexicon = "mock_lexicon.tsv"
default_label = "positive"

[selector]
mode = "heuristic"

[datasets]
sst2 = "sweep_sst2.tsv"
""")


def prompt_goldens(binary):
    out = OUT / "prompts"
    out.mkdir(exist_ok=True)
    inputs = {
        "sst2": ("a b day\n  a\n  d", None),
        "cola": ("the cat s on the mat\n      a\n      t", None),
        "qnli": ("paris is the c of france\n            a\n            p", "what is the capital of france?"),
        "rotten_tomatoes": ("a d mess\n  u\n  l", None),
        "jigsaw": ("you are a f\n          o\n          o\n          l", None),
    }
    for task, (text, question) in inputs.items():
        for strategy in ["zero_shot", "cot", "few_shot", "explicit"]:
            cmd = [binary, "prompts", "render", "--task", task, "--strategy", strategy,
                   "--text", text, "--json"]
            if question:
                cmd += ["--question", question]
            result = json.loads(subprocess.check_output(cmd))
            (out / f"{task}.{strategy}.json").write_text(
                json.dumps({"text": text, "question": question,
                            "messages": result["messages"]}, indent=2,
                           ensure_ascii=False) + "\n")


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--prompt-goldens", metavar="BINARY",
                        help="snapshot rendered prompts with this vertattack binary")
    args = parser.parse_args()
    mock_fixture(random.Random(1))
    sweep_fixture(random.Random(2))
    sentences = corpus(random.Random(3))
    gpt2_golden(sentences)
    llama3_golden(sentences)
    word_list(random.Random(4))
    attention_fixture()
    configs()
    if args.prompt_goldens:
        prompt_goldens(args.prompt_goldens)


if __name__ == "__main__":
    main()
