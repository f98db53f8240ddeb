"""Exact counts: derangements, deranged matchings, (balanced) perfect matchings of
balanced complete multipartite graphs with and without a removed perfect matching.

Every family has at least two routes (closed form / inclusion-exclusion sum /
complement identity / oracle) and the test-suite holds them to exact agreement.
"""

from __future__ import annotations

import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from decimal import ROUND_HALF_EVEN, Decimal
from itertools import combinations, product
from typing import Sequence

from .bigmath import DEFAULT_PRECISION, binomial, context, double_factorial_odd, exp_decimal, factorial
from .graphs import (Graph, NoPerfectMatching, Shape, build_complete_multipartite,
                     canonical_perfect_matching, complement_in_complete, count_balanced_pm_oracle,
                     enumerate_perfect_matchings)
from .matchpoly import MatchingSequence, convolve_power, mu, mu_complete, mu_edges

DEFAULT_TERM_BUDGET = 10**8

FAMILIES = ("derangement", "deranged_matching", "tripartite", "tripartite_minus_M",
            "bpm", "bpm_minus_M", "multipartite", "multipartite_minus_M", "custom")
METHODS = ("closed_form", "pie_sum", "complement_identity", "recurrence", "oracle")


class TermBudgetExceeded(RuntimeError):
    pass


def term_budget_from_env(default: int = DEFAULT_TERM_BUDGET) -> int:
    raw = os.environ.get("DERANGE_TERM_BUDGET")
    return int(raw) if raw else default


@dataclass(frozen=True)
class CountResult:
    family: str
    params: dict
    value: int
    method: str

    def as_dict(self) -> dict:
        return {"family": self.family, "params": self.params, "value": str(self.value), "method": self.method}

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), sort_keys=True)


# -- derangements ---------------------------------------------------------------

def derangements(n: int, method: str = "alternating_sum") -> int:
    """Number of fixed-point-free permutations of n items."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if method == "alternating_sum":
        nf = factorial(n)
        # n!/k! is an integer, so the sum stays exact
        return sum((-1) ** k * (nf // factorial(k)) for k in range(n + 1))
    if method == "euler_recurrence":
        a, b = 1, 0  # d_0, d_1
        if n == 0:
            return a
        for k in range(2, n + 1):
            a, b = b, (k - 1) * (a + b)
        return b
    if method == "sign_recurrence":
        d = 1
        for k in range(1, n + 1):
            d = k * d + (-1) ** k
        return d
    raise ValueError(f"unknown method {method!r}")


def derangement_partial_sums(n: int) -> list[int]:
    """n! * sum_{k<=t} (-1)^k/k! for t = 0..n."""
    nf = factorial(n)
    out, acc = [], 0
    for k in range(n + 1):
        acc += (-1) ** k * (nf // factorial(k))
        out.append(acc)
    return out


def nearest_integer_factorial_over_e(n: int, precision: int = DEFAULT_PRECISION) -> int:
    """round(n!/e) evaluated with ``precision`` significant digits."""
    ctx = context(precision)
    q = ctx.divide(Decimal(factorial(n)), exp_decimal(1, precision))
    return int(q.to_integral_value(rounding=ROUND_HALF_EVEN))


def deranged_matchings(n: int) -> int:
    """Perfect matchings of K_{2n} avoiding a fixed perfect matching."""
    return sum((-1) ** k * binomial(n, k) * double_factorial_odd(n - k) for k in range(n + 1))


# -- tripartite -----------------------------------------------------------------

def pm_tripartite(m: int) -> int:
    """pm(K_{2m,2m,2m}) = C(2m,m)^3 (m!)^3."""
    return binomial(2 * m, m) ** 3 * factorial(m) ** 3


def _tripartite_term(m: int, i: int, j: int, k: int) -> int:
    return (binomial(2 * m - i - j, m - i) * binomial(2 * m - j - k, m - j) * binomial(2 * m - k - i, m - k)
            * factorial(m - i) * factorial(m - j) * factorial(m - k))


def pm_tripartite_minus_M(m: int) -> int:
    """pm(K_{2m,2m,2m} - M), inclusion-exclusion grouped by |M-edges kept| per class pair."""
    if m == 0:
        return 1
    cm = [binomial(m, x) for x in range(m + 1)]
    total = 0
    for i, j, k in product(range(m + 1), repeat=3):
        sign = -1 if (i + j + k) & 1 else 1
        total += sign * cm[i] * cm[j] * cm[k] * _tripartite_term(m, i, j, k)
    return total


def pm_tripartite_minus_M_subsets(m: int) -> int:
    """Slow reference: the same sum taken over actual subsets I, J, K of the three
    class-pair parts of M. Only sensible for m <= 2."""
    if m > 3:
        raise ValueError("subset reference path is limited to m <= 3")
    shape = Shape(3, 2 * m)
    match = canonical_perfect_matching(shape)
    parts: dict[tuple[int, int], list] = {}
    for u, v in match:
        parts.setdefault((shape.class_of(u), shape.class_of(v)), []).append((u, v))
    xy, yz, xz = parts[(0, 1)], parts[(1, 2)], parts[(0, 2)]

    def subsets(edges):
        for size in range(len(edges) + 1):
            yield from combinations(edges, size)

    total = 0
    for I in subsets(xy):
        for J in subsets(yz):
            for K in subsets(xz):
                size = len(I) + len(J) + len(K)
                total += (-1) ** size * _tripartite_term(m, len(I), len(J), len(K))
    return total


# -- balanced r-partite ---------------------------------------------------------

def bpm_r_partite(r: int, m: int) -> int:
    """Balanced perfect matchings of K_{r x (r-1)m}."""
    if r < 2:
        raise ValueError("r must be >= 2")
    if m == 0:
        return 1
    return (factorial((r - 1) * m) // factorial(m) ** (r - 1)) ** r * factorial(m) ** binomial(r, 2)


def _general_tables(r: int, m: int):
    pairs = list(combinations(range(r), 2))
    mf = factorial(m)
    # W[x] = (-1)^x C(m,x)(m-x)! * (m!/(m-x)!)^2; the (m!)^{2P} scale is divided out at the end
    weight = [(-1) ** x * (mf // factorial(x)) * (mf // factorial(m - x)) ** 2 for x in range(m + 1)]
    fact_left = [factorial((r - 1) * m - s) for s in range((r - 1) * m + 1)]
    last = {}
    for p, (i, j) in enumerate(pairs):
        last[i] = p
        last[j] = p
    completes = [[c for c in range(r) if last[c] == p] for p in range(len(pairs))]
    return pairs, weight, fact_left, completes, mf ** (2 * len(pairs))


def _odometer_sum(r: int, m: int, first_values: Sequence[int]) -> int:
    pairs, weight, fact_left, completes, _ = _general_tables(r, m)
    npairs = len(pairs)
    s = [0] * r
    total = 0
    # partial[p] is the product over pairs < p, shared by every completion of that prefix
    partial = [1] * (npairs + 1)

    def descend(p: int):
        nonlocal total
        i, j = pairs[p]
        values = first_values if p == 0 else range(m + 1)
        base = partial[p]
        last = p == npairs - 1
        for x in values:
            s[i] += x
            s[j] += x
            val = base * weight[x]
            for c in completes[p]:
                val *= fact_left[s[c]]
            if last:
                total += val
            else:
                partial[p + 1] = val
                descend(p + 1)
            s[i] -= x
            s[j] -= x

    descend(0)
    return total


def _dp_sum(r: int, m: int) -> int:
    pairs, weight, fact_left, completes, _ = _general_tables(r, m)
    states: dict[tuple[int, ...], int] = {(0,) * r: 1}
    for p, (i, j) in enumerate(pairs):
        nxt: dict[tuple[int, ...], int] = {}
        for s, w in states.items():
            for x in range(m + 1):
                t = list(s)
                t[i] += x
                t[j] += x
                val = w * weight[x]
                for c in completes[p]:
                    val *= fact_left[t[c]]
                    t[c] = 0  # class finished; forget its load so states merge
                key = tuple(t)
                nxt[key] = nxt.get(key, 0) + val
        states = nxt
    return sum(states.values())


def bpm_r_partite_minus_M(r: int, m: int, term_budget: int | None = None,
                          method: str = "odometer", jobs: int = 1) -> int:
    """Balanced perfect matchings of K_{r x (r-1)m} avoiding a balanced M.

    ``odometer`` walks the full grid {0..m}^C(r,2) reusing prefix products;
    ``dp`` folds the same sum over per-class loads and is not subject to the
    term budget.
    """
    if r < 2:
        raise ValueError("r must be >= 2")
    if m == 0:
        return 1
    budget = term_budget_from_env() if term_budget is None else term_budget
    npairs = binomial(r, 2)
    scale = factorial(m) ** (2 * npairs)
    if method == "dp":
        total = _dp_sum(r, m)
    elif method == "odometer":
        terms = (m + 1) ** npairs
        if terms > budget:
            raise TermBudgetExceeded(f"{terms} terms for r={r}, m={m} exceeds the budget {budget}")
        if jobs > 1:
            chunks = [list(range(m + 1))[k::jobs] for k in range(jobs)]
            chunks = [c for c in chunks if c]
            with ProcessPoolExecutor(max_workers=len(chunks)) as pool:
                total = sum(pool.map(_odometer_sum, [r] * len(chunks), [m] * len(chunks), chunks))
        else:
            total = _odometer_sum(r, m, range(m + 1))
    else:
        raise ValueError(f"unknown method {method!r}")
    value, rem = divmod(total, scale)
    assert rem == 0, "inexact division in balanced sum"
    return value


# -- complement identity --------------------------------------------------------

def pm_via_complement(h: Graph | Sequence[int], n: int | None = None) -> int:
    """pm(G) = sum_k (-1)^k mu_k(complement) (2n-2k-1)!!.

    ``h`` is the complement graph itself or its k-matching sequence.
    """
    if isinstance(h, Graph):
        if h.vertex_count % 2:
            raise ValueError("complement must have an even number of vertices")
        if n is None:
            n = h.vertex_count // 2
        elif 2 * n != h.vertex_count:
            raise ValueError(f"dimension mismatch: graph has {h.vertex_count} vertices, expected {2 * n}")
        seq = mu(h)
    else:
        if n is None:
            raise ValueError("n is required with a bare matching sequence")
        seq = MatchingSequence(h)
        if len(seq) > n + 1:
            raise ValueError(f"dimension mismatch: {len(seq) - 1}-matchings cannot fit on {2 * n} vertices")
    return sum((-1) ** k * seq[k] * double_factorial_odd(n - k) for k in range(n + 1))


def multipartite_complement_edges(shape: Shape, minus_M: bool, balanced: bool | None = None):
    """Edges of r*K_c (plus the removed matching M when ``minus_M``)."""
    c = shape.c
    edges = [(i * c + a, i * c + b) for i in range(shape.r) for a, b in combinations(range(c), 2)]
    if minus_M:
        edges += list(removed_matching(shape, balanced))
    return edges


def removed_matching(shape: Shape, balanced: bool | None = None):
    """The matching taken out of K_{r x c}: balanced whenever (r-1) | c unless told otherwise."""
    if balanced is None:
        balanced = shape.r >= 2 and shape.c % (shape.r - 1) == 0
    return canonical_perfect_matching(shape, balanced)


def pm_multipartite(shape: Shape, minus_M: bool = False, balanced: bool | None = None) -> int:
    """pm(K_{r x c}) or pm(K_{r x c} - M) through the complement identity."""
    if shape.vertices % 2:
        raise NoPerfectMatching(f"rc = {shape.vertices} is odd")
    n = shape.vertices // 2
    if shape.r < 2:
        return 1 if n == 0 else 0
    if not minus_M:
        seq = convolve_power(mu_complete(shape.c), shape.r)
    else:
        seq = mu_edges(shape.vertices, multipartite_complement_edges(shape, True, balanced))
    return pm_via_complement(seq, n)


# -- dispatch -------------------------------------------------------------------

def count(family: str, method: str | None = None, term_budget: int | None = None,
          jobs: int = 1, graph: Graph | None = None, **params) -> CountResult:
    """Compute one family at one parameter point and tag it with the method used."""
    if family == "derangement":
        n = params["n"]
        meth = method or "closed_form"
        if meth == "closed_form":
            v = derangements(n, "alternating_sum")
        elif meth == "recurrence":
            v = derangements(n, "euler_recurrence")
        elif meth == "oracle":
            v = enumerate_perfect_matchings(*_host_minus(Shape(2, n))) if n else 1
        else:
            raise ValueError(f"method {meth} not available for {family}")
        return CountResult(family, {"n": n}, v, meth)
    if family == "deranged_matching":
        n = params["n"]
        meth = method or "closed_form"
        if meth in ("closed_form", "complement_identity"):
            v = deranged_matchings(n)
        elif meth == "oracle":
            v = enumerate_perfect_matchings(*_host_minus(Shape(2 * n, 1))) if n else 1
        else:
            raise ValueError(f"method {meth} not available for {family}")
        return CountResult(family, {"n": n}, v, meth)
    if family in ("tripartite", "tripartite_minus_M"):
        m = params["m"]
        _need(m >= 1, "m must be >= 1")
        minus = family.endswith("_M")
        meth = method or ("pie_sum" if minus else "closed_form")
        shape = Shape(3, 2 * m)
        if meth == "oracle":
            v = enumerate_perfect_matchings(*_host_minus(shape)) if minus else \
                enumerate_perfect_matchings(_host(shape))
        elif meth == "complement_identity":
            v = pm_multipartite(shape, minus)
        elif minus and meth == "pie_sum":
            v = pm_tripartite_minus_M(m)
        elif not minus and meth == "closed_form":
            v = pm_tripartite(m)
        else:
            raise ValueError(f"method {meth} not available for {family}")
        return CountResult(family, {"m": m}, v, meth)
    if family in ("bpm", "bpm_minus_M"):
        r, m = params["r"], params["m"]
        _need(r >= 3, "r must be >= 3")
        _need(m >= 1, "m must be >= 1")
        minus = family.endswith("_M")
        meth = method or ("pie_sum" if minus else "closed_form")
        if meth == "oracle":
            shape = Shape(r, (r - 1) * m)
            v = count_balanced_pm_oracle(shape, canonical_perfect_matching(shape) if minus else None)
        elif minus and meth == "pie_sum":
            v = bpm_r_partite_minus_M(r, m, term_budget=term_budget, jobs=jobs)
        elif minus and meth == "load_dp":
            v = bpm_r_partite_minus_M(r, m, method="dp")
        elif not minus and meth == "closed_form":
            v = bpm_r_partite(r, m)
        else:
            raise ValueError(f"method {meth} not available for {family}")
        return CountResult(family, {"r": r, "m": m}, v, meth)
    if family in ("multipartite", "multipartite_minus_M"):
        r, c = params["r"], params["c"]
        _need(r >= 2, "r must be >= 2")
        _need(c >= 1, "c must be >= 1")
        _need((r * c) % 2 == 0, "rc must be even")
        minus = family.endswith("_M")
        shape = Shape(r, c)
        meth = method or "complement_identity"
        if meth == "complement_identity":
            v = pm_multipartite(shape, minus)
        elif meth == "oracle":
            v = enumerate_perfect_matchings(*_host_minus(shape)) if minus else \
                enumerate_perfect_matchings(_host(shape))
        else:
            raise ValueError(f"method {meth} not available for {family}")
        return CountResult(family, {"r": r, "c": c}, v, meth)
    if family == "custom":
        _need(graph is not None, "custom family needs a graph")
        meth = method or "complement_identity"
        if meth == "complement_identity":
            v = pm_via_complement(complement_in_complete(graph))
        elif meth == "oracle":
            v = enumerate_perfect_matchings(graph)
        else:
            raise ValueError(f"method {meth} not available for {family}")
        return CountResult(family, {"vertices": graph.vertex_count, "edges": graph.edge_count}, v, meth)
    raise ValueError(f"unknown family {family!r}")


def _need(cond: bool, message: str) -> None:
    if not cond:
        raise ValueError(message)


def _host(shape: Shape) -> Graph:
    return build_complete_multipartite(shape)


def _host_minus(shape: Shape):
    return _host(shape), removed_matching(shape)
