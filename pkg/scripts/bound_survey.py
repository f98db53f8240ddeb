"""Slack of the three k-matching bounds on small regular graphs.

Prints, per graph, the minimum ratio bound/mu_k (upper bounds) and mu_k/bound
(lower bound) over k >= 2, so 1.0 means the bound is attained there.
k = 0 and k = 1 are skipped: every bound is exact for them.
"""

import argparse
import random
from fractions import Fraction

from derange.graphs import Graph, complete_graph, cycle_graph
from derange.matchpoly import check_mu_bounds


def random_regular(nv, d, rng, tries=500):
    # configuration-model retry loop; fine for the tiny sizes surveyed here
    for _ in range(tries):
        stubs = [v for v in range(nv) for _ in range(d)]
        rng.shuffle(stubs)
        edges = set()
        ok = True
        for a, b in zip(stubs[::2], stubs[1::2]):
            e = (min(a, b), max(a, b))
            if a == b or e in edges:
                ok = False
                break
            edges.add(e)
        if ok:
            return Graph.from_edges(nv, sorted(edges))
    return None


def survey():
    yield "C8", cycle_graph(8), 2
    yield "C16", cycle_graph(16), 2
    yield "K4", complete_graph(4), 3
    yield "K6", complete_graph(6), 5
    rng = random.Random(5)
    for nv, d in ((10, 3), (12, 3), (12, 4), (14, 3), (16, 3), (16, 5)):
        g = random_regular(nv, d, rng)
        if g is not None:
            yield f"rand{d}reg{nv}", g, d


def main():
    argparse.ArgumentParser(description=__doc__.splitlines()[0]).parse_args()
    print(f"{'graph':<12} {'crude':>8} {'sharp':>8} {'lower':>8}  ok")
    for name, g, d in survey():
        rep = check_mu_bounds(g, d)
        slack = {}
        for c in rep.checks:
            if c.k < 2 or c.mu_k == 0 or c.value == 0:
                continue
            s = Fraction(c.mu_k) / c.value if c.bound == "lower" else c.value / c.mu_k
            slack[c.bound] = min(slack.get(c.bound, s), s)
        cols = [f"{float(slack[b]):8.3f}" if b in slack else f"{'-':>8}"
                for b in ("crude_upper", "sharp_upper", "lower")]
        print(f"{name:<12} {' '.join(cols)}  {rep.ok}")


if __name__ == "__main__":
    main()
