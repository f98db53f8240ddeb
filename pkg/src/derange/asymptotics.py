"""Limit targets, exact-ratio convergence tables and tail-bounded series truncations.

Ratios are carried as exact fractions; a Decimal is produced only when the record
is rendered or compared against its target.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from decimal import ROUND_CEILING, Decimal
from fractions import Fraction
from typing import Iterable

from .bigmath import (DEFAULT_PRECISION, E_UPPER, binomial, context, double_factorial_odd,
                      exp_decimal, factorial, to_decimal)
from .counting import (bpm_r_partite, bpm_r_partite_minus_M, deranged_matchings, derangements,
                       pm_multipartite, pm_tripartite, pm_tripartite_minus_M)
from .graphs import Graph, Shape
from .matchpoly import (MatchingSequence, convolve_power, mu, mu_complete_bipartite, mu_cycle)

REGIMES = ("r2_hatcheck", "r2n_kindergartner", "r3_tripartite", "bpm_general",
           "regular_removal", "constant_class")
CSV_COLUMNS = ("regime", "r", "c", "m", "n", "d", "numerator", "denominator", "ratio", "target", "abs_error")
RENDER_PLACES = 15

INFINITE_R = "inf"


def limit_exponent(r) -> Fraction:
    """-r/(2r-2), or -1/2 for the r -> infinity marker."""
    if r == INFINITE_R or r is None:
        return Fraction(-1, 2)
    if r < 2:
        raise ValueError(f"limit target needs r >= 2, got {r}")
    return Fraction(-r, 2 * r - 2)


def limit_target(r, precision: int = DEFAULT_PRECISION) -> Decimal:
    return exp_decimal(limit_exponent(r), precision)


@dataclass(frozen=True)
class RatioRecord:
    regime: str
    params: dict
    numerator: int
    denominator: int
    target_exponent: Fraction
    precision: int = DEFAULT_PRECISION
    ratio: Decimal = field(init=False)
    target: Decimal = field(init=False)
    abs_error: Decimal = field(init=False)

    def __post_init__(self):
        ratio = to_decimal(self.exact, self.precision)
        target = exp_decimal(self.target_exponent, self.precision)
        object.__setattr__(self, "ratio", ratio)
        object.__setattr__(self, "target", target)
        object.__setattr__(self, "abs_error", context(self.precision).abs(context(self.precision).subtract(ratio, target)))

    @property
    def exact(self) -> Fraction:
        return Fraction(self.numerator, self.denominator)

    def row(self, places: int = RENDER_PLACES) -> dict[str, str]:
        out = {k: "" for k in CSV_COLUMNS}
        out["regime"] = self.regime
        for k, v in self.params.items():
            if k in out:
                out[k] = str(v)
        out["numerator"] = str(self.numerator)
        out["denominator"] = str(self.denominator)
        for k in ("ratio", "target", "abs_error"):
            out[k] = render(getattr(self, k), places)
        return out


def render(x: Decimal, places: int = RENDER_PLACES) -> str:
    """Fixed-point, never scientific notation."""
    return format(x.quantize(Decimal(1).scaleb(-places)), "f")


def _regular_complement_sequence(family: str, d: int, n: int, graph: Graph | None = None) -> MatchingSequence:
    if d < 0 or n < 1:
        raise ValueError("need d >= 0 and n >= 1")
    if d == 0:
        return MatchingSequence([1])
    if family == "union_of_cycles":
        if d != 2:
            raise ValueError("union_of_cycles family is 2-regular; use d = 2")
        if 2 * n < 3:
            raise ValueError("a 2n-cycle needs 2n >= 3")
        return mu_cycle(2 * n)
    if family == "union_of_matchings":
        # n/d disjoint copies of K_{d,d}, each the union of d perfect matchings
        if n % d:
            raise ValueError(f"union_of_matchings needs d | n (d={d}, n={n})")
        return convolve_power(mu_complete_bipartite(d), n // d)
    if family == "custom":
        if graph is None or graph.vertex_count != 2 * n:
            raise ValueError("custom family needs a complement graph on 2n vertices")
        if any(x != d for x in graph.degrees()):
            raise ValueError(f"custom complement is not {d}-regular")
        return mu(graph)
    raise ValueError(f"unknown complement family {family!r}")


def regular_removal_ratio(family: str, d: int, n: int, graph: Graph | None = None,
                          precision: int = DEFAULT_PRECISION) -> RatioRecord:
    """pm(K_2n minus a d-regular graph) / (2n-1)!!, against e^{-d/2}."""
    seq = _regular_complement_sequence(family, d, n, graph)
    num = sum((-1) ** k * seq[k] * double_factorial_odd(n - k) for k in range(n + 1))
    return RatioRecord("regular_removal", {"n": n, "d": d}, num, double_factorial_odd(n),
                       Fraction(-d, 2), precision)


def ratio_record(regime: str, precision: int = DEFAULT_PRECISION, **params) -> RatioRecord:
    """One exact ratio pm(G - M)/pm(G) for ``regime`` at ``params``."""
    if regime == "r2_hatcheck":
        n = params["n"]
        _positive(n=n)
        return RatioRecord(regime, {"r": 2, "c": n, "n": n}, derangements(n), factorial(n),
                           limit_exponent(2), precision)
    if regime == "r2n_kindergartner":
        n = params["n"]
        _positive(n=n)
        return RatioRecord(regime, {"r": 2 * n, "c": 1, "n": n}, deranged_matchings(n),
                           double_factorial_odd(n), limit_exponent(INFINITE_R), precision)
    if regime == "r3_tripartite":
        m = params["m"]
        _positive(m=m)
        return RatioRecord(regime, {"r": 3, "c": 2 * m, "m": m, "n": 3 * m}, pm_tripartite_minus_M(m),
                           pm_tripartite(m), limit_exponent(3), precision)
    if regime == "bpm_general":
        r, m = params["r"], params["m"]
        _positive(m=m)
        if r < 3:
            raise ValueError("bpm_general needs r >= 3")
        num = bpm_r_partite_minus_M(r, m, term_budget=params.get("term_budget"),
                                    jobs=params.get("jobs", 1))
        return RatioRecord(regime, {"r": r, "c": (r - 1) * m, "m": m, "n": binomial(r, 2) * m}, num,
                           bpm_r_partite(r, m), limit_exponent(r), precision)
    if regime == "regular_removal":
        d = params["d"]
        family = params.get("family") or ("union_of_cycles" if d == 2 else "union_of_matchings")
        return regular_removal_ratio(family, d, params["n"], params.get("graph"), precision)
    if regime == "constant_class":
        n, c = params["n"], params["c"]
        _positive(n=n, c=c)
        if (2 * n) % c:
            raise ValueError(f"c must divide 2n (c={c}, n={n})")
        r = 2 * n // c
        if r < 2:
            raise ValueError("constant_class needs at least two classes (c < 2n)")
        shape = Shape(r, c)
        return RatioRecord(regime, {"r": r, "c": c, "n": n}, pm_multipartite(shape, True),
                           pm_multipartite(shape, False), limit_exponent(INFINITE_R), precision)
    raise ValueError(f"unknown regime {regime!r}")


def _positive(**values):
    for name, v in values.items():
        if v < 1:
            raise ValueError(f"{name} must be >= 1, got {v}")


SWEEP_PARAM = {"r2_hatcheck": "n", "r2n_kindergartner": "n", "r3_tripartite": "m", "bpm_general": "m",
               "regular_removal": "n", "constant_class": "n"}


def convergence_table(regime: str, values: Iterable[int], precision: int = DEFAULT_PRECISION,
                      **fixed) -> list[RatioRecord]:
    """Records for ``regime`` with its sweep parameter running over ``values`` (sorted)."""
    key = SWEEP_PARAM[regime]
    return [ratio_record(regime, precision, **{key: v}, **fixed) for v in sorted(values)]


def table_csv(records: Iterable[RatioRecord], places: int = RENDER_PLACES) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    w.writeheader()
    for rec in records:
        w.writerow(rec.row(places))
    return buf.getvalue()


def table_json(records: Iterable[RatioRecord], places: int = RENDER_PLACES) -> str:
    return json.dumps([rec.row(places) for rec in records], indent=2) + "\n"


@dataclass(frozen=True)
class SeriesTruncation:
    r: int
    terms_per_factor: int
    value: Decimal
    tail_bound: Decimal
    exact_value: Fraction = field(repr=False)
    exact_bound: Fraction = field(repr=False)
    precision: int = DEFAULT_PRECISION

    @property
    def target(self) -> Decimal:
        return limit_target(self.r, self.precision)

    @property
    def actual_error(self) -> Decimal:
        """|exact truncation - limit|, evaluated with 40 guard digits beyond the working precision."""
        guard = self.precision + 40
        ctx = context(guard)
        diff = ctx.subtract(to_decimal(self.exact_value, guard), limit_target(self.r, guard))
        return context(self.precision).plus(ctx.abs(diff))


def truncated_limit_series(r: int, t: int, precision: int = DEFAULT_PRECISION) -> SeriesTruncation:
    """Product over the C(r,2) class pairs of sum_{x<=t} (-1)^x / (x! (r-1)^{2x}).

    Each factor misses at most tail = e / ((t+1)! q^{t+1}) with q = (r-1)^2, by
    domination with sum_x 1/(x! q^x). With P equal factors S and true factors f,
    |prod f - prod S| <= (|S| + tail)^P - |S|^P.
    """
    if r < 2:
        raise ValueError(f"r must be >= 2, got {r}")
    if t < 0:
        raise ValueError("t must be >= 0")
    q = (r - 1) ** 2
    factors = binomial(r, 2)
    partial = sum(Fraction((-1) ** x, factorial(x) * q**x) for x in range(t + 1))
    tail = E_UPPER / (factorial(t + 1) * q ** (t + 1))
    value = partial**factors
    bound = (abs(partial) + tail) ** factors - abs(partial) ** factors
    return SeriesTruncation(r, t, to_decimal(value, precision), to_decimal(bound, precision, ROUND_CEILING),
                            value, bound, precision)
