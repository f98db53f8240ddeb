"""Write a convergence table per regime to CSV.

    python3 scripts/convergence_tables.py --out results/

Ranges are small enough to finish in well under a minute on a laptop.
"""

import argparse
import time
from pathlib import Path

from derange.asymptotics import convergence_table, table_csv

TABLES = [
    ("hatcheck", "r2_hatcheck", range(1, 31), {}),
    ("kindergartner", "r2n_kindergartner", range(1, 31), {}),
    ("r3", "r3_tripartite", range(1, 41), {}),
    ("bpm_r4", "bpm_general", range(1, 6), {"r": 4}),
    ("regular_d1", "regular_removal", range(1, 61), {"d": 1}),
    ("regular_d2_cycles", "regular_removal", range(2, 101), {"d": 2}),
    ("regular_d3", "regular_removal", range(3, 61, 3), {"d": 3}),
    ("constant_c2", "constant_class", range(2, 41), {"c": 2}),
    ("constant_c3", "constant_class", range(3, 31, 3), {"c": 3}),
]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", type=Path, default=Path("results"))
    ap.add_argument("--precision", type=int, default=50)
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    for name, regime, values, fixed in TABLES:
        t0 = time.perf_counter()
        recs = convergence_table(regime, values, args.precision, **fixed)
        path = args.out / f"{name}.csv"
        path.write_text(table_csv(recs))
        first, last = recs[0], recs[-1]
        print(f"{name:<18} {len(recs):>3} rows  err {first.abs_error:.3e} -> {last.abs_error:.3e}"
              f"  ({time.perf_counter() - t0:.2f}s)  {path}", flush=True)


if __name__ == "__main__":
    main()
