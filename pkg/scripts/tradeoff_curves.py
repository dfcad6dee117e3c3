"""Precision versus T-count tradeoff curves.

Samples Haar-random targets, then records two families of rows:

  db rows: nearest-entry distance per exact T-count class, i.e. what the
    catalog alone buys you at each circuit depth;
  sk rows: mean distance and mean T-count per recursion level, i.e. what
    the commutator recursion buys on top of a fixed catalog.

Output is a tidy CSV (one observation per row) meant for plotting.
"""
from __future__ import annotations

import argparse
import csv
import sys
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from qcanon.catalog import build, load
from qcanon.search import nearest
from qcanon.sk import SkConfig, sk_approximate


@dataclass
class RunConfig:
    db_path: str | None
    t_max: int
    samples: int
    seed: int
    sk_depth: int
    out: str


def haar_targets(seed: int, n: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    q = rng.normal(size=(n, 4))
    q /= np.linalg.norm(q, axis=1)[:, None]
    mats = np.empty((n, 2, 2), dtype=complex)
    c, x, y, z = q.T
    mats[:, 0, 0] = c - 1j * z
    mats[:, 0, 1] = -y - 1j * x
    mats[:, 1, 0] = y - 1j * x
    mats[:, 1, 1] = c + 1j * z
    return mats


def run(cfg: RunConfig) -> list[dict]:
    t0 = time.perf_counter()
    db = load(cfg.db_path) if cfg.db_path else build(cfg.t_max)
    print(f"catalog: t_max={db.max_tcount} entries={db.entry_count()} "
          f"({time.perf_counter() - t0:.1f} s)", file=sys.stderr)

    mats = haar_targets(cfg.seed, cfg.samples)
    rows: list[dict] = []

    by_t: dict[int, list[float]] = {}
    for mat in mats:
        r = nearest(mat, db)
        by_t.setdefault(r.t_count, []).append(r.achieved_dist)
    for t in sorted(by_t):
        ds = by_t[t]
        rows.append({"kind": "db", "level": "", "t_count": t,
                     "mean_dist": float(np.mean(ds)),
                     "min_dist": float(np.min(ds)),
                     "max_dist": float(np.max(ds)), "samples": len(ds)})

    sk_cfg = SkConfig(db, max_depth=cfg.sk_depth)
    per_level: list[list[tuple[int, float]]] = [[] for _ in range(cfg.sk_depth + 1)]
    t0 = time.perf_counter()
    for i, mat in enumerate(mats):
        res = sk_approximate(mat, cfg.sk_depth, sk_cfg)
        for k in range(cfg.sk_depth + 1):
            per_level[k].append((res.t_per_level[k], res.dist_per_level[k]))
        if (i + 1) % 20 == 0:
            print(f"sk: {i + 1}/{len(mats)} targets "
                  f"({time.perf_counter() - t0:.0f} s)", file=sys.stderr)
    for k, obs in enumerate(per_level):
        ts = [t for t, _ in obs]
        ds = [d for _, d in obs]
        rows.append({"kind": "sk", "level": k,
                     "t_count": float(np.mean(ts)),
                     "mean_dist": float(np.mean(ds)),
                     "min_dist": float(np.min(ds)),
                     "max_dist": float(np.max(ds)), "samples": len(obs)})
    return rows


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--db", help="existing catalog; default builds --t-max")
    ap.add_argument("--t-max", type=int, default=16)
    ap.add_argument("--samples", type=int, default=50)
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--sk-depth", type=int, default=3)
    ap.add_argument("--out", default="tradeoff_curves.csv")
    a = ap.parse_args()
    cfg = RunConfig(a.db, a.t_max, a.samples, a.seed, a.sk_depth, a.out)

    rows = run(cfg)
    fields = ["kind", "level", "t_count", "mean_dist", "min_dist",
              "max_dist", "samples"]
    with open(cfg.out, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=fields)
        w.writeheader()
        w.writerows(rows)
    print(f"wrote {len(rows)} rows -> {cfg.out}", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
