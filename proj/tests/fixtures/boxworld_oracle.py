"""Exact-arithmetic counts for the reflection-twirled boxworld.

Builds the gbit and the PR-box composite from scratch with Fractions, twirls
with the reflection x -> -x on each gbit, and ranks the twirled generators by
Gaussian elimination.  Writes the fixture read by the C++ tests; with --check
it compares against the committed file instead.
"""
import argparse
import itertools
import json
import sys
from fractions import Fraction as F


def gbit_states():
    return [[sx, sy, 1] for sx, sy in ((1, 1), (1, -1), (-1, 1), (-1, -1))]


def pr_boxes():
    # printed order; index 0 is omega_1
    return [
        [1, 1, 0, 1, -1, 0, 0, 0, 1],
        [1, 1, 0, -1, 1, 0, 0, 0, 1],
        [1, -1, 0, 1, 1, 0, 0, 0, 1],
        [-1, 1, 0, 1, 1, 0, 0, 0, 1],
        [-1, -1, 0, -1, 1, 0, 0, 0, 1],
        [-1, -1, 0, 1, -1, 0, 0, 0, 1],
        [-1, 1, 0, -1, -1, 0, 0, 0, 1],
        [1, -1, 0, -1, -1, 0, 0, 0, 1],
    ]


def kron(a, b):
    return [x * y for x in a for y in b]


def reflect(v):
    return [-v[0], v[1], v[2]]


def reflect_pair(v):
    out = [F(0)] * 9
    for i, j in itertools.product(range(3), range(3)):
        si = -1 if i == 0 else 1
        sj = -1 if j == 0 else 1
        out[3 * i + j] = si * sj * F(v[3 * i + j])
    return out


def twirl(v, act):
    w = act(v)
    return [(F(x) + F(y)) / 2 for x, y in zip(v, w)]


def rank(rows):
    m = [list(map(F, r)) for r in rows]
    r = 0
    cols = len(m[0]) if m else 0
    for c in range(cols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c] / m[r][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        r += 1
    return r


def fixture():
    a = gbit_states()
    ab = [kron(x, y) for x in a for y in a] + pr_boxes()
    ta = [twirl(v, reflect) for v in a]
    tab = [twirl(v, reflect_pair) for v in ab]
    distinct_ta = sorted({tuple(v) for v in ta})
    return {
        "K_A": rank(ta),
        "K_B": rank(ta),
        "K_AB": rank(tab),
        "K_A_untwirled": rank(a),
        "K_AB_untwirled": rank(ab),
        "twirled_gbit_states": [[str(x) for x in v] for v in distinct_ta],
    }


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("path")
    ap.add_argument("--check", action="store_true")
    args = ap.parse_args()
    text = json.dumps(fixture(), indent=2, sort_keys=True) + "\n"
    if args.check:
        with open(args.path) as f:
            if f.read() != text:
                print("fixture out of date:", args.path)
                return 1
        print("fixture matches")
        return 0
    with open(args.path, "w") as f:
        f.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
