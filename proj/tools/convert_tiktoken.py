#!/usr/bin/env python3
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
"""Converts a tiktoken rank file into the vocab.json + merges.txt layout.

Usage: convert_tiktoken.py RANKS_FILE OUT_DIR [--special TOKEN ...]
"""

import argparse
import base64
import json
import pathlib


def bytes_to_unicode():
    bs = (list(range(ord("!"), ord("~") + 1)) + list(range(ord("¡"), ord("¬") + 1))
          + list(range(ord("®"), ord("ÿ") + 1)))
    cs = bs[:]
    n = 0
    for b in range(256):
        if b not in bs:
            bs.append(b)
            cs.append(256 + n)
            n += 1
    return {b: chr(c) for b, c in zip(bs, cs)}


def load_ranks(path):
    ranks = {}
    for line in pathlib.Path(path).read_bytes().splitlines():
        if not line.strip():
            continue
        token, rank = line.split()
        ranks[base64.b64decode(token)] = int(rank)
    return ranks


def split_into_pair(token, rank, ranks):
    parts = [bytes([b]) for b in token]
    while len(parts) > 2:
        best = None
        for i in range(len(parts) - 1):
            r = ranks.get(parts[i] + parts[i + 1])
            if r is not None and r < rank and (best is None or r < best[0]):
                best = (r, i)
        if best is None:
            break
        i = best[1]
        parts[i:i + 2] = [parts[i] + parts[i + 1]]
    if len(parts) != 2:
        raise ValueError(f"token {token!r} does not reduce to a pair")
    return parts


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("ranks")
    ap.add_argument("out_dir")
    ap.add_argument("--special", action="append", default=[])
    ap.add_argument("--pretokenizer", default="gpt2")
    args = ap.parse_args()

    ranks = load_ranks(args.ranks)
    b2u = bytes_to_unicode()
    enc = lambda bs: "".join(b2u[b] for b in bs)

    vocab = {enc(tok): rank for tok, rank in ranks.items()}
    next_id = max(ranks.values()) + 1
    for special in args.special:
        vocab[special] = next_id
        next_id += 1

    merges = []
    for tok, rank in sorted(ranks.items(), key=lambda kv: kv[1]):
        if len(tok) < 2:
            continue
        left, right = split_into_pair(tok, rank, ranks)
        merges.append(f"{enc(left)} {enc(right)}")

    out = pathlib.Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "vocab.json").write_text(json.dumps(vocab, ensure_ascii=False), encoding="utf-8")
    (out / "merges.txt").write_text("#version: 0.2\n" + "\n".join(merges) + "\n", encoding="utf-8")
    (out / "artifact.json").write_text(json.dumps(
        {"pretokenizer": args.pretokenizer, "special_tokens": args.special}, indent=2) + "\n")


if __name__ == "__main__":
    main()
