"""k-matching counts (matching-polynomial coefficients).

``mu(g)[k]`` is the number of k-edge matchings of ``g``. General graphs go through a
memoised edge-deletion recursion, per connected component; complete graphs, paths,
cycles and ``K_{d,d}`` have closed forms so that structured complements far beyond
the 64-vertex cap can still be handled by convolution.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .bigmath import binomial, factorial
from .graphs import Graph


class NotRegular(ValueError):
    pass


class MatchingSequence(tuple):
    """Tuple of k-matching counts indexed by k; reads past the end are 0.

    Trailing zeros are stripped on construction so that sequences of the same graph
    padded to different vertex counts compare equal.
    """

    def __new__(cls, counts: Iterable[int] = (1,)):
        counts = list(counts)
        while len(counts) > 1 and counts[-1] == 0:
            counts.pop()
        return super().__new__(cls, counts)

    def __getitem__(self, k):
        if isinstance(k, int) and k >= len(self):
            return 0
        return super().__getitem__(k)

    def padded(self, length: int) -> list[int]:
        return [self[k] for k in range(length)]

    def __repr__(self):
        return f"MatchingSequence({list(self)})"


def convolve(a: Sequence[int], b: Sequence[int]) -> MatchingSequence:
    """Matching sequence of a disjoint union, given those of the parts."""
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return MatchingSequence(out)


def convolve_power(a: Sequence[int], times: int) -> MatchingSequence:
    """``times`` disjoint copies, by repeated squaring."""
    result = MatchingSequence([1])
    base = MatchingSequence(a)
    while times:
        if times & 1:
            result = convolve(result, base)
        times >>= 1
        if times:
            base = convolve(base, base)
    return result


def mu_complete(c: int) -> MatchingSequence:
    """mu_k(K_c) = c! / (2^k k! (c-2k)!)."""
    if c < 0:
        raise ValueError("c must be >= 0")
    return MatchingSequence(
        factorial(c) // (2**k * factorial(k) * factorial(c - 2 * k)) for k in range(c // 2 + 1))


def mu_path(n: int) -> MatchingSequence:
    """Path on n vertices: C(n-k, k)."""
    return MatchingSequence(binomial(n - k, k) for k in range(n // 2 + 1)) if n else MatchingSequence()


def mu_cycle(n: int) -> MatchingSequence:
    """Cycle on n >= 3 vertices: n/(n-k) * C(n-k, k)."""
    if n < 3:
        raise ValueError("a cycle needs at least 3 vertices")
    return MatchingSequence(n * binomial(n - k, k) // (n - k) for k in range(n // 2 + 1))


def mu_complete_bipartite(d: int) -> MatchingSequence:
    """K_{d,d}: C(d,k)^2 k!."""
    return MatchingSequence(binomial(d, k) ** 2 * factorial(k) for k in range(d + 1))


def _pick_max_degree(adj: tuple[int, ...]) -> tuple[int, int]:
    best, best_deg = -1, 0
    for u, a in enumerate(adj):
        deg = a.bit_count()
        if deg > best_deg:
            best, best_deg = u, deg
    u = best
    a = adj[u]
    return u, (a & -a).bit_length() - 1


def _pick_lowest_vertex(adj: tuple[int, ...]) -> tuple[int, int]:
    for u, a in enumerate(adj):
        if a:
            return u, a.bit_length() - 1
    raise AssertionError("no edge left")


# lowest_vertex strips one vertex completely before moving on, so most memo states
# are induced subgraphs and hit far more often than under max_degree.
POLICIES = {"lowest_vertex": _pick_lowest_vertex, "max_degree": _pick_max_degree}


def _mu_component(adj: tuple[int, ...], pick) -> list[int]:
    # Full adjacency tuple is the memo key: edge deletion leaves non-induced
    # subgraphs, so the vertex set alone would not identify the state.
    memo: dict[tuple[int, ...], list[int]] = {}

    def rec(state: tuple[int, ...]) -> list[int]:
        if not any(state):
            return [1]
        hit = memo.get(state)
        if hit is not None:
            return hit
        u, v = pick(state)
        drop_edge = list(state)
        drop_edge[u] &= ~(1 << v)
        drop_edge[v] &= ~(1 << u)
        keep = rec(tuple(drop_edge))
        # remove u and v entirely
        gone = ~(1 << u | 1 << v)
        drop_verts = [a & gone for a in drop_edge]
        drop_verts[u] = drop_verts[v] = 0
        take = rec(tuple(drop_verts))
        out = list(keep) + [0] * max(0, len(take) + 1 - len(keep))
        for k, x in enumerate(take):
            out[k + 1] += x
        memo[state] = out
        return out

    return rec(adj)


def mu(g: Graph, policy: str = "lowest_vertex") -> MatchingSequence:
    """Exact k-matching counts of ``g`` via mu_k(G) = mu_k(G-e) + mu_{k-1}(G-u-v)."""
    pick = POLICIES[policy]
    result = MatchingSequence([1])
    for comp in g.components():
        if comp & (comp - 1) == 0:
            continue
        sub = g.induced(comp)
        result = convolve(result, _mu_component(sub.adjacency, pick))
    return result


def matching_sequence_of(components: Iterable[Sequence[int]]) -> MatchingSequence:
    result = MatchingSequence([1])
    for seq in components:
        result = convolve(result, seq)
    return result


@dataclass(frozen=True)
class BoundCheck:
    k: int
    mu_k: int
    bound: str
    value: Fraction
    holds: bool

    def as_dict(self) -> dict:
        d = asdict(self)
        d["mu_k"] = str(self.mu_k)
        d["value"] = str(self.value)
        return d


@dataclass(frozen=True)
class BoundReport:
    n: int
    d: int
    checks: tuple[BoundCheck, ...]

    @property
    def ok(self) -> bool:
        return all(c.holds for c in self.checks)

    def failures(self) -> list[BoundCheck]:
        return [c for c in self.checks if not c.holds]

    def as_dict(self) -> dict:
        return {"n": self.n, "d": self.d, "ok": self.ok, "checks": [c.as_dict() for c in self.checks]}


def check_mu_bounds(g: Graph, d: int, seq: Sequence[int] | None = None) -> BoundReport:
    """Test the three k-matching bounds for a d-regular graph on 2n vertices.

    crude:  mu_k <= d^k n^k / k!
    lower:  mu_k >= d^k (n - 2(k-1))^k / k!   (only where n - 2(k-1) >= 0)
    sharp:  mu_k <= C(n, k) d^k
    """
    degs = g.degrees()
    if any(x != d for x in degs):
        raise NotRegular(f"graph is not {d}-regular (degrees {sorted(set(degs))})")
    if g.vertex_count % 2:
        raise ValueError("need an even number of vertices")
    n = g.vertex_count // 2
    seq = MatchingSequence(seq) if seq is not None else mu(g)
    checks = []
    for k in range(n + 1):
        mk = seq[k]
        crude = Fraction(d**k * n**k, factorial(k))
        checks.append(BoundCheck(k, mk, "crude_upper", crude, mk <= crude))
        base = n - 2 * (k - 1)
        if base >= 0:
            lower = Fraction(d**k * base**k, factorial(k))
            checks.append(BoundCheck(k, mk, "lower", lower, mk >= lower))
        sharp = Fraction(binomial(n, k) * d**k)
        checks.append(BoundCheck(k, mk, "sharp_upper", sharp, mk <= sharp))
    return BoundReport(n, d, tuple(checks))


def _component_edge_lists(vertex_count: int, edges: Sequence[tuple[int, int]]):
    parent = list(range(vertex_count))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in edges:
        parent[find(u)] = find(v)
    groups: dict[int, list[tuple[int, int]]] = {}
    sizes: dict[int, int] = {}
    for v in range(vertex_count):
        sizes[find(v)] = sizes.get(find(v), 0) + 1
    for u, v in edges:
        groups.setdefault(find(u), []).append((u, v))
    return [(sizes[root], comp) for root, comp in groups.items()]


def _recognise(size: int, comp: list[tuple[int, int]]) -> MatchingSequence | None:
    """Closed form for a connected component that is a path, cycle or clique."""
    deg: dict[int, int] = {}
    for u, v in comp:
        deg[u] = deg.get(u, 0) + 1
        deg[v] = deg.get(v, 0) + 1
    e = len(comp)
    if e == size * (size - 1) // 2:
        return mu_complete(size)
    if e == size and all(x == 2 for x in deg.values()):
        return mu_cycle(size)
    if e == size - 1 and max(deg.values()) <= 2:
        return mu_path(size)
    return None


def mu_edges(vertex_count: int, edges: Sequence[tuple[int, int]], policy: str = "lowest_vertex") -> MatchingSequence:
    """k-matching counts of a simple graph given as an edge list.

    Components that are paths, cycles or cliques use closed forms, so only the
    remaining components are subject to the 64-vertex cap of the recursion.
    """
    if len(set(map(frozenset, edges))) != len(edges):
        raise ValueError("repeated edge")
    result = MatchingSequence([1])
    for size, comp in _component_edge_lists(vertex_count, edges):
        seq = _recognise(size, comp)
        if seq is None:
            verts = sorted({w for e in comp for w in e})
            index = {w: i for i, w in enumerate(verts)}
            sub = Graph.from_edges(len(verts), [(index[u], index[v]) for u, v in comp])
            seq = MatchingSequence(_mu_component(sub.adjacency, POLICIES[policy]))
        result = convolve(result, seq)
    return result
