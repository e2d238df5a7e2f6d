#!/usr/bin/env python3
"""Generate the committed fixture models and experiment configs.

Run once; the outputs under fixtures/ are checked in so the C++ tool and its
tests never depend on a random number generator. Re-running with the same
numpy version reproduces the files.
"""
import argparse
import json
import math
from pathlib import Path

import numpy as np

SEED = 20240611
HORIZON = 100
INPUT_NORM = 1e-3


def newton(W, c, tol=1e-12, max_iter=100):
    """Damped Newton on W tanh(x) + c - x, mirroring find_fixed_point."""
    n = len(c)
    x = np.zeros(n)
    F = W @ np.tanh(x) + c - x
    res = np.max(np.abs(F))
    for _ in range(max_iter):
        if res <= tol:
            return x
        J = W * (1.0 / np.cosh(x) ** 2)[None, :] - np.eye(n)
        delta = np.linalg.solve(J, -F)
        for _ in range(31):
            trial = x + delta
            tF = W @ np.tanh(trial) + c - trial
            tres = np.max(np.abs(tF))
            if tres < res:
                x, F, res = trial, tF, tres
                break
            delta *= 0.5
        else:
            return None
    return x if res <= tol else None


def spectral_radius(W, x0):
    D = 1.0 / np.cosh(x0) ** 2
    return float(np.max(np.abs(np.linalg.eigvals(W * D[None, :]))))


def taylor_ratio(W, x0, c, direction, eps=1e-2, horizon=5):
    D = 1.0 / np.cosh(x0) ** 2
    A = W * D[None, :]

    def err(e):
        xn = x0 + e * direction
        xl = e * direction
        worst = 0.0
        for _ in range(horizon):
            xn = W @ np.tanh(xn) + c
            xl = A @ xl
            worst = max(worst, np.max(np.abs(xn - x0 - xl)))
        return worst

    return err(eps) / err(eps / 2)


def round_list(v):
    return [float(f"{x:.17g}") for x in v]


def write_json(path, obj):
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(obj, indent=2) + "\n")


def case_config(name, n, c, rng, direction=None):
    dev = rng.standard_normal(n)
    dev *= 1e-3 / np.linalg.norm(dev)
    inputs = []
    for k in range(HORIZON):
        u = rng.standard_normal(n)
        u *= INPUT_NORM * rng.uniform(0.2, 1.0) / np.linalg.norm(u)
        inputs.append({"k": k, "u": round_list(u)})
    cfg = {
        "model": f"../models/{name}.json",
        "contexts": [{"label": "R", "c": round_list(c)}],
        "dev_init": round_list(dev),
        "inputs": inputs,
        "horizon": HORIZON,
        "tol": 1e-12,
        "fixed_point_tol": 1e-12,
        "probe_u": [1.0] * n,
        "epsilon": 1e-2,
        "taylor_horizon": 5,
    }
    if direction is not None:
        cfg["direction"] = round_list(direction)
    return cfg


def model_json(W):
    return {"n": len(W), "W": [round_list(row) for row in W], "nonlinearity": {"kind": "tanh"}}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default=Path(__file__).resolve().parents[1] / "fixtures", type=Path)
    args = ap.parse_args()
    rng = np.random.default_rng(SEED)
    manifest = []

    def add(name, W, c, want, taylor_dir=None):
        W = np.array([round_list(r) for r in W])
        c = np.array(round_list(c))
        x0 = newton(W, c)
        if x0 is None:
            return False
        rho = spectral_radius(W, x0)
        stability = "unstable" if rho > 1.0 else "stable"
        if want is not None and stability != want:
            return False
        if stability == "unstable" and rho > 1.15:
            return False  # keep 100-step linear runs far from the divergence guard
        entry = {
            "name": name,
            "config": f"cases/{name}.json",
            "n": len(c),
            "stability": stability,
            "spectral_radius": rho,
            "taylor": taylor_dir is not None,
        }
        if taylor_dir is not None:
            ratio = taylor_ratio(W, x0, c, taylor_dir)
            if not 3.6 <= ratio <= 4.4:
                return False
            entry["taylor_ratio_numpy"] = ratio
        write_json(args.out / "models" / f"{name}.json", model_json(W))
        write_json(args.out / "cases" / f"{name}.json", case_config(name, len(c), c, rng, taylor_dir))
        manifest.append(entry)
        return True

    # The hand-checkable 2x2 network at context (0.1, 0).
    d2 = np.array([1.0, 1.0]) / math.sqrt(2.0)
    assert add("n2_derived", [[0.0, 0.5], [0.5, 0.0]], [0.1, 0.0], None, taylor_dir=d2)

    plan = [(2, "stable"), (2, "unstable"), (2, "stable"), (2, "unstable")]
    plan += [(5, "stable"), (5, "unstable"), (5, "stable"), (5, "unstable"), (5, "stable")]
    plan += [(10, "stable"), (10, "unstable"), (10, "stable"), (10, "unstable"), (10, "stable")]
    plan += [(50, "stable"), (50, "unstable"), (50, "stable"), (50, "unstable"), (50, "stable")]
    counters = {}
    for n, want in plan:
        counters[n] = counters.get(n, 0) + 1
        name = f"n{n}_{counters[n]:02d}_{want}"
        taylor = n == 5 and counters[n] == 1
        for _ in range(10000):
            scale = rng.uniform(0.5, 0.95) if want == "stable" else rng.uniform(1.1, 1.8)
            W = scale * rng.standard_normal((n, n)) / math.sqrt(n)
            c = rng.uniform(0.2, 1.0) * rng.standard_normal(n)
            direction = None
            if taylor:
                direction = rng.standard_normal(n)
                direction /= np.linalg.norm(direction)
            if add(name, W, c, want, direction):
                break
        else:
            raise SystemExit(f"could not generate {name}")

    # Context-comparison fixtures.
    write_json(args.out / "models" / "ctx_swap2.json", model_json([[0.0, 0.5], [0.5, 0.0]]))
    write_json(args.out / "models" / "ctx_identity2.json",
               {"n": 2, "W": [[0.2, -0.1], [0.3, 0.1]], "nonlinearity": {"kind": "identity"}})
    contexts = {
        "context_saturating": ("ctx_swap2", [("A", [1.5, 0.0]), ("B", [0.0, 0.3])], [1.0, 1.0]),
        "context_mirrored": ("ctx_swap2", [("A", [1.5, 0.0]), ("B", [0.0, 1.5])], [1.0, 1.0]),
        "context_identity_control": ("ctx_identity2", [("A", [1.0, -0.5]), ("B", [-2.0, 0.7])], [1.0, 1.0]),
    }
    for name, (model, ctxs, u) in contexts.items():
        write_json(args.out / "cases" / f"{name}.json", {
            "model": f"../models/{model}.json",
            "contexts": [{"label": label, "c": c} for label, c in ctxs],
            "probe_u": u,
            "fixed_point_tol": 1e-12,
        })
    n10 = next(m for m in manifest if m["n"] == 10)
    sweep_contexts = [{"label": f"s{i}", "c": round_list(rng.uniform(0.2, 0.8) * rng.standard_normal(10))}
                      for i in range(3)]
    write_json(args.out / "cases" / "context_sweep10.json", {
        "model": f"../models/{n10['name']}.json",
        "contexts": sweep_contexts,
        "probe_u": round_list(rng.standard_normal(10)),
        "fixed_point_tol": 1e-12,
    })

    write_json(args.out / "manifest.json", {
        "seed": SEED,
        "fixtures": manifest,
        "context_fixtures": {
            "saturating": "cases/context_saturating.json",
            "mirrored": "cases/context_mirrored.json",
            "identity_control": "cases/context_identity_control.json",
            "sweep": "cases/context_sweep10.json",
        },
    })
    for m in manifest:
        print(f"{m['name']:24s} n={m['n']:3d} {m['stability']:9s} rho={m['spectral_radius']:.4f}")


if __name__ == "__main__":
    main()
