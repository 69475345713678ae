#!/usr/bin/env python3
"""Count index-2 family instances from the combinatorial rules alone.

Each holonomy factor is described by its dimension and whether it commutes
with an orthogonal complex structure. No linear algebra is done here.
"""
import itertools
import json
import sys

# id -> (dimension of L, admits a complex structure)
FACTORS = {
    "so:2": (2, True),
    "so:3": (3, False),
    "so:4": (4, False),
    "u:1": (2, True),
    "u:2": (4, True),
}


def count(factors):
    n = sum(FACTORS[f][0] for f in factors)
    t = len(factors)
    if n == 0:
        return {"6": 1, "7": 1}
    out = {}
    out["1"] = sum(1 for _ in itertools.product([False, True], repeat=t))
    out["2"] = 1
    out["3"] = 1
    for f in factors:
        out["3"] *= 3 if FACTORS[f][1] else 1
    patterns4 = [p for p in itertools.product([(1, 0), (0, 1), (1, 1)], repeat=t)]
    out["4"] = len(patterns4)
    out["5"] = len(list(itertools.product([0, 1], repeat=t)))
    return out


def main():
    cases = [[], ["so:2"], ["u:1"], ["so:3"], ["so:2", "so:2"], ["so:4"], ["u:2"], ["so:2", "so:3"]]
    doc = []
    for c in cases:
        doc.append({"n": sum(FACTORS[f][0] for f in c), "factors": c, "counts": count(c)})
    json.dump(doc, sys.stdout, indent=2)
    sys.stdout.write("\n")


if __name__ == "__main__":
    main()
