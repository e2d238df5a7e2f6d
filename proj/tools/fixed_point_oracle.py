#!/usr/bin/env python3
"""Brute-force oracle for the 2x2 reference fixed point.

Plain fixed-point iteration x <- W tanh(x) + c from x = 0 until successive
iterates differ by less than 1e-15 (the map is a contraction here since
||W|| = 0.5). Writes fixtures/oracle/fixed_point_2x2.json, or with --check
recomputes and compares against the committed file.
"""
import argparse
import json
import math
import sys
from pathlib import Path

W = [[0.0, 0.5], [0.5, 0.0]]
C = [0.1, 0.0]
DEFAULT_PATH = Path(__file__).resolve().parents[1] / "fixtures" / "oracle" / "fixed_point_2x2.json"


def iterate():
    x = [0.0, 0.0]
    for sweep in range(1, 10000):
        r = [math.tanh(v) for v in x]
        nxt = [sum(W[i][j] * r[j] for j in range(2)) + C[i] for i in range(2)]
        change = max(abs(a - b) for a, b in zip(nxt, x))
        x = nxt
        if change < 1e-15:
            return x, sweep
    raise RuntimeError("iteration did not settle")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--check", action="store_true", help="compare against the committed file instead of writing")
    ap.add_argument("--path", type=Path, default=DEFAULT_PATH)
    args = ap.parse_args()

    x0, sweeps = iterate()
    gains = [1.0 / math.cosh(v) ** 2 for v in x0]
    record = {"W": W, "c": C, "x0": x0, "gains": gains, "iterations": sweeps}

    if args.check:
        committed = json.loads(args.path.read_text())
        worst = max(abs(a - b) for a, b in zip(committed["x0"], x0))
        print(f"x0 = {x0}, committed = {committed['x0']}, max diff = {worst:.3e}")
        return 0 if worst <= 1e-14 else 1
    args.path.parent.mkdir(parents=True, exist_ok=True)
    args.path.write_text(json.dumps(record, indent=2) + "\n")
    print(json.dumps(record, indent=2))
    return 0


if __name__ == "__main__":
    sys.exit(main())
