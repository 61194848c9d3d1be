#!/usr/bin/env python3
"""Writes a synthetic 4^8 DNA reward table (a stand-in for TF-Bind-8 scores).

Scores are a position weight matrix plus a few pairwise couplings and two
planted motifs, squashed to (0, 1). Output is deterministic for a given seed.

usage: make_tfbind8_fixture.py OUT_DIR [--seed N]
"""

import argparse
import itertools
import json
import math
import os
import random
import statistics

ALPHABET = "ACGT"
LENGTH = 8


def build_scorer(seed):
    rng = random.Random(seed)
    pwm = [[rng.gauss(0.0, 1.0) for _ in ALPHABET] for _ in range(LENGTH)]
    pairs = []
    for _ in range(6):
        i, j = sorted(rng.sample(range(LENGTH), 2))
        pairs.append((i, j, [[rng.gauss(0.0, 0.5) for _ in ALPHABET] for _ in ALPHABET]))
    motifs = ["".join(rng.choice(ALPHABET) for _ in range(LENGTH)) for _ in range(2)]

    def score(seq):
        idx = [ALPHABET.index(c) for c in seq]
        s = sum(pwm[p][t] for p, t in enumerate(idx))
        s += sum(w[idx[i]][idx[j]] for i, j, w in pairs)
        for m in motifs:
            s += 3.0 * math.exp(-sum(a != b for a, b in zip(seq, m)))
        return 1.0 / (1.0 + math.exp(-0.5 * s))

    return score


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("out_dir")
    ap.add_argument("--seed", type=int, default=8)
    args = ap.parse_args()
    score = build_scorer(args.seed)
    os.makedirs(args.out_dir, exist_ok=True)
    values = []
    with open(os.path.join(args.out_dir, "scores.tsv"), "w", newline="\n") as f:
        f.write("# sequence\tscore\n")
        for chars in itertools.product(ALPHABET, repeat=LENGTH):
            seq = "".join(chars)
            v = score(seq)
            values.append(v)
            f.write(f"{seq}\t{v!r}\n")
    stats = {"mu": statistics.fmean(values), "sigma": statistics.pstdev(values)}
    with open(os.path.join(args.out_dir, "stats.json"), "w", newline="\n") as f:
        json.dump(stats, f, indent=2)
        f.write("\n")


if __name__ == "__main__":
    main()
