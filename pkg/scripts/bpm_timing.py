"""Time the two evaluations of the balanced r-partite sum (odometer vs dp).

    python3 scripts/bpm_timing.py --r 4 --m-max 6 --jobs 4
"""

import argparse
import time

from derange.counting import bpm_r_partite_minus_M


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--r", type=int, default=4)
    ap.add_argument("--m-max", type=int, default=5)
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--skip-odometer-above", type=int, default=6,
                    help="odometer cost is (m+1)^C(r,2); stop timing it past this m")
    args = ap.parse_args()
    for m in range(1, args.m_max + 1):
        t0 = time.perf_counter()
        dp = bpm_r_partite_minus_M(args.r, m, method="dp")
        t_dp = time.perf_counter() - t0
        line = f"r={args.r} m={m:<3} dp {t_dp:8.3f}s"
        if m <= args.skip_odometer_above:
            t0 = time.perf_counter()
            od = bpm_r_partite_minus_M(args.r, m, term_budget=10**12, jobs=args.jobs)
            line += f"  odometer {time.perf_counter() - t0:8.3f}s  agree={od == dp}"
        print(line, flush=True)


if __name__ == "__main__":
    main()
