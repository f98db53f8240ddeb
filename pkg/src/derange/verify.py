"""Oracle-equivalence and invariant checks behind ``derange verify``."""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass
from decimal import Decimal
from importlib import resources
from pathlib import Path
from typing import Callable, Iterator

from . import asymptotics as asy
from . import counting as cnt
from . import graphs as gr
from . import matchpoly as mp


@dataclass
class Check:
    name: str
    run: Callable[[], bool | str]
    suites: tuple[str, ...] = ("fast", "full")


def default_fixture_path() -> Path:
    return Path(str(resources.files("derange") / "data" / "fixtures.json"))


def load_fixtures(path: str | Path | None = None) -> list[dict]:
    data = json.loads(Path(path or default_fixture_path()).read_text())
    return data["counts"]


def _brute_derangements(n: int) -> int:
    return sum(all(p[i] != i for i in range(n)) for p in itertools.permutations(range(n)))


def _oracle_minus(shape: gr.Shape) -> int:
    return gr.enumerate_perfect_matchings(gr.build_complete_multipartite(shape), cnt.removed_matching(shape))


def _check_random_complements(count: int, seed: int) -> bool:
    rng = random.Random(seed)
    for _ in range(count):
        nv = rng.choice([2, 4, 6, 8, 10, 12])
        h = gr.random_graph(nv, rng.random(), rng)
        if cnt.pm_via_complement(h) != gr.enumerate_perfect_matchings(gr.complement_in_complete(h)):
            return False
    return True


def _regular_test_graphs() -> Iterator[tuple[str, gr.Graph, int]]:
    for n in range(1, 9):
        yield f"matching-{2 * n}", gr.Graph.from_edges(2 * n, [(2 * i, 2 * i + 1) for i in range(n)]), 1
    for v in range(4, 17, 2):
        yield f"C{v}", gr.cycle_graph(v), 2
    yield "K4", gr.complete_graph(4), 3
    yield "K33", gr.build_complete_multipartite(gr.Shape(2, 3)), 3
    cube = gr.Graph.from_edges(8, [(a, a ^ (1 << b)) for a in range(8) for b in range(3) if a < a ^ (1 << b)])
    yield "Q3", cube, 3
    for v in range(6, 17, 2):
        # prism C_{v/2} x K2
        h = v // 2
        edges = [(i, (i + 1) % h) for i in range(h)] + [(h + i, h + (i + 1) % h) for i in range(h)]
        edges += [(i, h + i) for i in range(h)]
        yield f"prism{v}", gr.Graph.from_edges(v, edges), 3


def _check_bounds() -> bool | str:
    for name, g, d in _regular_test_graphs():
        rep = mp.check_mu_bounds(g, d)
        if not rep.ok:
            f = rep.failures()[0]
            return f"{name}: k={f.k} {f.bound}"
    return True


def _check_fixture(entry: dict) -> Callable[[], bool | str]:
    def run():
        got = cnt.count(entry["family"], method=entry.get("method"), **entry["params"]).value
        return True if str(got) == str(entry["value"]) else f"computed {got}, fixture says {entry['value']}"
    return run


def build_checks(fixtures: list[dict] | None, fixture_error: str | None = None) -> list[Check]:
    checks = [
        Check("derangements-vs-brute-force n<=8",
              lambda: all(cnt.derangements(n) == _brute_derangements(n) for n in range(9))),
        Check("derangement-methods-agree n<=300",
              lambda: all(len({cnt.derangements(n, m) for m in ("alternating_sum", "euler_recurrence",
                                                                 "sign_recurrence")}) == 1 for n in range(301))),
        Check("deranged-matchings-vs-oracle n<=5",
              lambda: all(cnt.deranged_matchings(n) == _oracle_minus(gr.Shape(2 * n, 1)) for n in range(1, 6))),
        Check("tripartite-vs-oracle m<=2",
              lambda: all(cnt.pm_tripartite(m) == gr.enumerate_perfect_matchings(
                  gr.build_complete_multipartite(gr.Shape(3, 2 * m))) and
                  cnt.pm_tripartite_minus_M(m) == _oracle_minus(gr.Shape(3, 2 * m)) for m in (1, 2))),
        Check("tripartite-vs-oracle m=3",
              lambda: cnt.pm_tripartite(3) == gr.enumerate_perfect_matchings(
                  gr.build_complete_multipartite(gr.Shape(3, 6))) and
              cnt.pm_tripartite_minus_M(3) == _oracle_minus(gr.Shape(3, 6)), ("full",)),
        Check("bpm-vs-balanced-oracle r=4 m=1",
              lambda: cnt.bpm_r_partite(4, 1) == gr.count_balanced_pm_oracle(gr.Shape(4, 3)) and
              cnt.bpm_r_partite_minus_M(4, 1) == gr.count_balanced_pm_oracle(
                  gr.Shape(4, 3), gr.canonical_perfect_matching(gr.Shape(4, 3)))),
        Check("general-sum-r3-equals-tripartite m<=10",
              lambda: all(cnt.bpm_r_partite_minus_M(3, m) == cnt.pm_tripartite_minus_M(m) for m in range(1, 11))),
        Check("odometer-equals-dp r in 4..5",
              lambda: all(cnt.bpm_r_partite_minus_M(r, m) == cnt.bpm_r_partite_minus_M(r, m, method="dp")
                          for r, m in ((4, 1), (4, 2), (4, 3), (5, 1), (5, 2))), ("full",)),
        Check("complement-identity-random 25 graphs", lambda: _check_random_complements(25, 2024)),
        Check("complement-identity-structured",
              lambda: all(cnt.pm_multipartite(s, minus) == (
                  _oracle_minus(s) if minus else gr.enumerate_perfect_matchings(gr.build_complete_multipartite(s)))
                  for s in (gr.Shape(2, 5), gr.Shape(3, 2), gr.Shape(4, 2), gr.Shape(4, 3), gr.Shape(6, 2),
                            gr.Shape(8, 1), gr.Shape(3, 4)) for minus in (False, True))),
        Check("mu-bounds d<=3 2n<=16", _check_bounds),
        Check("series-limits r=2..6 t=30",
              lambda: all(s.actual_error < Decimal("1e-12") and s.actual_error <= s.tail_bound
                          for s in (asy.truncated_limit_series(r, 30) for r in range(2, 7)))),
        Check("nearest-integer n!/e n<=18",
              lambda: all(cnt.derangements(n) == cnt.nearest_integer_factorial_over_e(n) for n in range(1, 19))),
        Check("convergence r3 m=40",
              lambda: (lambda a, b: b.abs_error < Decimal("0.01") and b.abs_error < a.abs_error)(
                  asy.ratio_record("r3_tripartite", m=1), asy.ratio_record("r3_tripartite", m=40)), ("full",)),
        Check("convergence constant-class c=2 2n=40",
              lambda: asy.ratio_record("constant_class", n=20, c=2).abs_error
              < asy.ratio_record("constant_class", n=4, c=2).abs_error, ("full",)),
        Check("convergence cycles d=2 n=100",
              lambda: asy.ratio_record("regular_removal", n=100, d=2).abs_error
              < asy.ratio_record("regular_removal", n=4, d=2).abs_error, ("full",)),
    ]
    if fixture_error is not None:
        checks.append(Check("fixtures-load", lambda: fixture_error))
    for entry in fixtures or []:
        checks.append(Check(f"fixture {entry['name']}", _check_fixture(entry)))
    return checks


def run_checks(suite: str = "fast", fixture_path: str | Path | None = None, out=print) -> bool:
    try:
        fixtures, err = load_fixtures(fixture_path), None
    except (OSError, ValueError, KeyError) as exc:
        fixtures, err = None, f"cannot load fixtures: {exc}"
    ok = True
    for check in build_checks(fixtures, err):
        if suite not in check.suites:
            continue
        try:
            res = check.run()
        except Exception as exc:  # a crashing check is a failing check
            res = f"{type(exc).__name__}: {exc}"
        passed = res is True
        ok &= passed
        detail = "" if passed or res is False else f" ({res})"
        out(f"{'PASS' if passed else 'FAIL'} {check.name}{detail}")
    return ok
