"""Repair transmissions: network-coded tree vs download-k baseline.

One random storage node fails per seeded topology (10 storage nodes,
20 sensors, 200 x 180 area, radius 60); every k in the sweep repairs the
same failure.

    python3 scripts/repair_energy.py --seeds 0-49 --out results/repair_energy.csv
"""

from __future__ import annotations

import argparse
import statistics
from collections import defaultdict
from dataclasses import dataclass, field
from pathlib import Path

from ncstorage.simnet import ComparisonConfig, rows_to_csv, run_comparison
from storage_energy import parse_seeds


@dataclass
class RepairRun:
    seeds: tuple[int, ...] = tuple(range(50))
    k_values: tuple[int, ...] = tuple(range(3, 9))
    mode: str = "exact"
    out: Path = field(default_factory=lambda: Path("results/repair_energy.csv"))


def run(cfg: RepairRun) -> list[dict]:
    rows = run_comparison(ComparisonConfig(
        seeds=cfg.seeds,
        k_values=cfg.k_values,
        methods=("nc", "traditional"),
        repair_mode=cfg.mode,
    ))
    cfg.out.parent.mkdir(parents=True, exist_ok=True)
    rows_to_csv(rows, cfg.out)
    return rows


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--seeds", type=parse_seeds, default=RepairRun.seeds)
    p.add_argument("--mode", choices=["exact", "functional"], default="exact")
    p.add_argument("--out", type=Path, default=Path("results/repair_energy.csv"))
    a = p.parse_args()
    rows = run(RepairRun(seeds=a.seeds, mode=a.mode, out=a.out))
    cells = defaultdict(list)
    for r in rows:
        cells[(r["k"], r["method"])].append(r)
    print(f"{'k':>2} {'method':>12} {'mean_tx':>8} {'mean_sd':>8} {'ctrl':>6}")
    for (k, method), rs in sorted(cells.items()):
        print(f"{k:>2} {method:>12} {statistics.fmean(r['total_tx'] for r in rs):>8.2f} "
              f"{statistics.fmean(float(r['stddev_tx']) for r in rs):>8.3f} "
              f"{statistics.fmean(r['control_tx'] for r in rs):>6.1f}")
    print(f"wrote {len(rows)} rows to {a.out}")


if __name__ == "__main__":
    main()
