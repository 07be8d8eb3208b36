#!/usr/bin/env python3
# Copyright 2026 The QFSL Authors.
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
"""Regenerates the bundled desk-scale corpus and synthetic embeddings.

Output is deterministic for a given --seed. Label 1 is food, 0 is technology.
"""

import argparse
import pathlib
import random

import numpy as np

DIM = 300

# Words seen in training.
SEEN = {
    "subject": ["man", "woman", "person"],
    "food_verb": ["cooks", "prepares"],
    "tech_verb": ["debugs", "runs"],
    "food_obj": ["soup", "meal", "sauce"],
    "tech_obj": ["program", "application", "software"],
    "food_adj": ["tasty"],
    "tech_adj": ["useful"],
}

# Words that never occur in the training split.
UNSEEN = {
    "subject": ["chef", "guy", "engineer", "lady"],
    "food_verb": ["bakes", "roasts", "fries"],
    "tech_verb": ["compiles", "codes", "deploys"],
    "food_obj": ["stew", "pasta", "supper", "dinner"],
    "tech_obj": ["website", "database", "algorithm", "code"],
    "food_adj": ["delicious", "flavorful"],
    "tech_adj": ["efficient", "helpful"],
}

# In the embedding file only; filtered out by the lexicon.
DISTRACTORS = ["river", "mountain", "cloud", "rain", "tree", "dog", "cat", "horse", "bird", "blue", "green", "red", "yellow"]

POS = {"subject": "noun", "food_obj": "noun", "tech_obj": "noun",
       "food_verb": "tverb", "tech_verb": "tverb", "food_adj": "adj", "tech_adj": "adj"}


def sentence(rng, words, label, adj_prob):
    theme = "food" if label == 1 else "tech"
    subj = rng.choice(words["subject"])
    verb = rng.choice(words[theme + "_verb"])
    obj = rng.choice(words[theme + "_obj"])
    parts = [subj, verb]
    if rng.random() < adj_prob:
        parts.append(rng.choice(words[theme + "_adj"]))
    parts.append(obj)
    return " ".join(parts)


def draw(rng, words, n, adj_prob, exclude):
    out = []
    seen = set(exclude)
    while len(out) < n:
        label = len(out) % 2 if rng.random() < 0.5 else 1 - len(out) % 2
        s = sentence(rng, words, label, adj_prob)
        if s in seen:
            continue
        seen.add(s)
        out.append((label, s))
    return out


def mixed_words(rng):
    # Roughly half seen and half unseen words per slot.
    return {k: SEEN[k] + UNSEEN[k][: max(1, len(SEEN[k]))] for k in SEEN}


def write_split(path, rows):
    with open(path, "w") as f:
        for label, s in rows:
            f.write(f"{label}\t{s}\n")


def embeddings(seed):
    g = np.random.default_rng(seed)

    def unit(v):
        return v / np.linalg.norm(v)

    common = unit(g.standard_normal(DIM))
    centers = {c: unit(g.standard_normal(DIM)) for c in ("food", "tech", "person", "nature", "animal", "colour")}
    rows = []

    def add(word, center, spread=0.45):
        v = 0.4 * common + centers[center] + spread * unit(g.standard_normal(DIM))
        rows.append((word, v))

    for group in (SEEN, UNSEEN):
        for slot, words in group.items():
            center = "person" if slot == "subject" else slot.split("_")[0]
            for w in words:
                add(w, center)
    for w in DISTRACTORS:
        add(w, "nature" if w in ("river", "mountain", "cloud", "rain", "tree") else
            "animal" if w in ("dog", "cat", "horse", "bird") else "colour")
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default=str(pathlib.Path(__file__).resolve().parent.parent / "data"))
    ap.add_argument("--seed", type=int, default=7)
    args = ap.parse_args()
    out = pathlib.Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    rng = random.Random(args.seed)

    train = draw(rng, SEEN, 30, 0.35, [])
    used = [s for _, s in train]
    dev = draw(rng, SEEN, 8, 0.35, used)
    used += [s for _, s in dev]
    test = draw(rng, SEEN, 10, 0.35, used)
    used += [s for _, s in test]
    redundancy = draw(rng, mixed_words(rng), 12, 0.35, used)
    oov = draw(rng, UNSEEN, 12, 0.35, [])
    for name, rows in (("train", train), ("dev", dev), ("test", test),
                       ("redundancy", redundancy), ("oov", oov)):
        write_split(out / f"{name}.tsv", rows)
    write_split(out / "toy_train.tsv", train[:8])

    with open(out / "lexicon.tsv", "w") as f:
        f.write("# token\tpart of speech\n")
        for group in (SEEN, UNSEEN):
            for slot, words in group.items():
                for w in words:
                    f.write(f"{w}\t{POS[slot]}\n")

    with open(out / "embeddings_synthetic.txt", "w") as f:
        for word, v in embeddings(args.seed):
            f.write(word + " " + " ".join(f"{x:.6f}" for x in v) + "\n")


if __name__ == "__main__":
    main()
