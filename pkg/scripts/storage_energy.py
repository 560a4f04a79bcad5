"""Storage-phase transmission counts per code family.

Writes one CSV row per (seed, k, family) and prints per-(k, family) means.

    python3 scripts/storage_energy.py --seeds 0-19 --out results/storage_energy.csv
    python3 scripts/storage_energy.py --regime one-hop --out results/storage_one_hop.csv
"""

from __future__ import annotations

import argparse
import statistics
from collections import defaultdict
from dataclasses import dataclass, field
from pathlib import Path

from ncstorage.simnet import ComparisonConfig, rows_to_csv, run_comparison


def parse_seeds(text: str) -> tuple[int, ...]:
    if "-" in text:
        lo, hi = map(int, text.split("-"))
        return tuple(range(lo, hi + 1))
    return tuple(int(s) for s in text.split(","))


@dataclass
class StorageRun:
    seeds: tuple[int, ...] = tuple(range(20))
    regime: str = "random"
    k_values: tuple[int, ...] = tuple(range(3, 9))
    families: tuple[str, ...] = ("sparsest", "rs", "rlnc")
    redundancy: int = 2
    out: Path = field(default_factory=lambda: Path("results/storage_energy.csv"))


def run(cfg: StorageRun) -> list[dict]:
    rows = run_comparison(ComparisonConfig(
        seeds=cfg.seeds,
        k_values=cfg.k_values,
        families=cfg.families,
        methods=("storage",),
        regime=cfg.regime,
        redundancy=cfg.redundancy,
    ))
    cfg.out.parent.mkdir(parents=True, exist_ok=True)
    rows_to_csv(rows, cfg.out)
    return rows


def summarize(rows: list[dict]) -> None:
    cells = defaultdict(list)
    for r in rows:
        cells[(r["k"], r["family"])].append((r["total_tx"], float(r["stddev_tx"])))
    print(f"{'k':>2} {'family':>10} {'mean_tx':>8} {'mean_sd':>8}")
    for (k, fam), vals in sorted(cells.items()):
        tx = statistics.fmean(v[0] for v in vals)
        sd = statistics.fmean(v[1] for v in vals)
        print(f"{k:>2} {fam:>10} {tx:>8.1f} {sd:>8.3f}")


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--seeds", type=parse_seeds, default=StorageRun.seeds)
    p.add_argument("--regime", choices=["random", "one-hop"], default="random")
    p.add_argument("--families", nargs="+", default=list(StorageRun.families))
    p.add_argument("--out", type=Path, default=Path("results/storage_energy.csv"))
    a = p.parse_args()
    cfg = StorageRun(seeds=a.seeds, regime=a.regime, families=tuple(a.families), out=a.out)
    rows = run(cfg)
    summarize(rows)
    print(f"wrote {len(rows)} rows to {cfg.out}")


if __name__ == "__main__":
    main()
