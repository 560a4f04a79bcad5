"""Memory taken by the multiplication lookup tables, per field and mode.

    python3 scripts/field_tables.py --out results/field_tables.csv
"""

import argparse
import csv
from pathlib import Path

from ncstorage.galois import TableMode, build_tables, validate_field


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--out", type=Path, default=Path("results/field_tables.csv"))
    a = p.parse_args()
    rows = []
    for m in range(1, 9):
        spec = validate_field(m)
        for mode in TableMode:
            t = build_tables(spec, mode)
            rows.append({"field": str(spec), "mode": mode.value, "memory_bytes": t.memory_bytes})
    a.out.parent.mkdir(parents=True, exist_ok=True)
    with open(a.out, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=["field", "mode", "memory_bytes"])
        w.writeheader()
        w.writerows(rows)
    for r in rows:
        print(f"{r['field']:>14} {r['mode']:>3} {r['memory_bytes']:>7}")


if __name__ == "__main__":
    main()
