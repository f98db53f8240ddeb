"""Observed error decay per regime, frozen to tests/data/decay_rates.json.

The slope is log(err_hi/err_lo) / log(hi/lo) between the two endpoints of
each sweep. It is an observation, not a rate anyone has proved.

    python3 scripts/decay_rates.py            # print
    python3 scripts/decay_rates.py --write    # refresh the fixture
"""

import argparse
import json
import math
from pathlib import Path

from derange.asymptotics import ratio_record, render

FIXTURE = Path(__file__).resolve().parent.parent / "tests" / "data" / "decay_rates.json"

SWEEPS = [
    ("r3_tripartite", "m", 10, 40, {}),
    ("bpm_general", "m", 2, 6, {"r": 4}),
    ("r2n_kindergartner", "n", 10, 40, {}),
    ("regular_removal", "n", 10, 100, {"d": 2}),
    ("regular_removal", "n", 12, 60, {"d": 3}),
    ("constant_class", "n", 10, 40, {"c": 2}),
]


def decay_rates():
    rows = []
    for regime, key, lo, hi, fixed in SWEEPS:
        e_lo = ratio_record(regime, **{key: lo}, **fixed).abs_error
        e_hi = ratio_record(regime, **{key: hi}, **fixed).abs_error
        slope = math.log(float(e_hi) / float(e_lo)) / math.log(hi / lo)
        rows.append({"regime": regime, "fixed": fixed, "param": key, "lo": lo, "hi": hi,
                     "err_lo": render(e_lo, 20), "err_hi": render(e_hi, 20), "slope": round(slope, 6)})
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--write", action="store_true")
    args = ap.parse_args()
    rows = decay_rates()
    for r in rows:
        print(f"{r['regime']:<18} {r['fixed']!s:<10} {r['param']}={r['lo']}..{r['hi']}  "
              f"{r['err_lo']} -> {r['err_hi']}  slope {r['slope']}")
    if args.write:
        FIXTURE.write_text(json.dumps(rows, indent=2) + "\n")


if __name__ == "__main__":
    main()
