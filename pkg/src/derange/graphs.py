"""Small dense graphs on at most 64 vertices, balanced complete multipartite hosts,
their perfect matchings, and brute-force counting oracles.

Vertices are ``0..vertex_count-1``; adjacency is one Python int bitmask per vertex.
In ``K_{r x c}`` vertex ``v`` lies in class ``v // c``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from pathlib import Path
from typing import Iterable, Iterator

MAX_VERTICES = 64
LISTING_LIMIT = 12


class GraphSizeError(ValueError):
    pass


class NoPerfectMatching(ValueError):
    pass


class NotBalanceable(ValueError):
    pass


@dataclass(frozen=True)
class Shape:
    """``K_{r x c}``: r classes of c vertices each."""

    r: int
    c: int

    def __post_init__(self):
        if self.r < 1 or self.c < 1:
            raise ValueError(f"shape needs r >= 1 and c >= 1, got r={self.r}, c={self.c}")

    @property
    def vertices(self) -> int:
        return self.r * self.c

    @property
    def n(self) -> int:
        """Half the vertex count; only meaningful when rc is even."""
        if self.vertices % 2:
            raise NoPerfectMatching(f"rc = {self.vertices} is odd")
        return self.vertices // 2

    @property
    def balanced_m(self) -> int:
        """Edges per class pair in a balanced perfect matching."""
        if self.r < 2 or self.c % (self.r - 1):
            raise NotBalanceable(f"(r-1) must divide c (r={self.r}, c={self.c})")
        return self.c // (self.r - 1)

    def class_of(self, v: int) -> int:
        return v // self.c


@dataclass(frozen=True)
class Graph:
    vertex_count: int
    adjacency: tuple[int, ...]
    class_of: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.vertex_count > MAX_VERTICES:
            raise GraphSizeError(f"{self.vertex_count} vertices exceeds the {MAX_VERTICES}-vertex cap")
        if len(self.adjacency) != self.vertex_count:
            raise ValueError("adjacency length does not match vertex_count")
        for u, nbrs in enumerate(self.adjacency):
            if nbrs >> u & 1:
                raise ValueError(f"self-loop at {u}")
            if nbrs >> self.vertex_count:
                raise ValueError(f"vertex {u} has a neighbour out of range")
            for v in iter_bits(nbrs):
                if not self.adjacency[v] >> u & 1:
                    raise ValueError(f"adjacency not symmetric at {u}-{v}")
                if self.class_of is not None and self.class_of[u] == self.class_of[v]:
                    raise ValueError(f"edge {u}-{v} lies inside class {self.class_of[u]}")

    @classmethod
    def from_edges(cls, vertex_count: int, edges: Iterable[tuple[int, int]],
                   class_of: Iterable[int] | None = None) -> "Graph":
        adj = [0] * vertex_count
        for u, v in edges:
            if u == v:
                raise ValueError(f"self-loop at {u}")
            if not (0 <= u < vertex_count and 0 <= v < vertex_count):
                raise ValueError(f"edge {u}-{v} out of range")
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return cls(vertex_count, tuple(adj), tuple(class_of) if class_of is not None else None)

    @classmethod
    def empty(cls, vertex_count: int) -> "Graph":
        return cls(vertex_count, (0,) * vertex_count)

    @property
    def full_mask(self) -> int:
        return (1 << self.vertex_count) - 1

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adjacency[u] >> v & 1)

    def degree(self, v: int) -> int:
        return self.adjacency[v].bit_count()

    def degrees(self) -> list[int]:
        return [a.bit_count() for a in self.adjacency]

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.vertex_count) for v in iter_bits(self.adjacency[u]) if u < v]

    @property
    def edge_count(self) -> int:
        return sum(self.degrees()) // 2

    def without_edges(self, edges: Iterable[tuple[int, int]]) -> "Graph":
        adj = list(self.adjacency)
        for u, v in edges:
            adj[u] &= ~(1 << v)
            adj[v] &= ~(1 << u)
        return Graph(self.vertex_count, tuple(adj), self.class_of)

    def components(self) -> list[int]:
        """Vertex masks of the connected components, lowest vertex first."""
        out = []
        seen = 0
        for s in range(self.vertex_count):
            if seen >> s & 1:
                continue
            comp = frontier = 1 << s
            while frontier:
                nxt = 0
                for v in iter_bits(frontier):
                    nxt |= self.adjacency[v]
                frontier = nxt & ~comp
                comp |= frontier
            seen |= comp
            out.append(comp)
        return out

    def induced(self, mask: int) -> "Graph":
        """Induced subgraph on ``mask``, relabelled to 0..k-1 in vertex order."""
        keep = list(iter_bits(mask))
        index = {v: i for i, v in enumerate(keep)}
        adj = []
        for v in keep:
            a = 0
            for w in iter_bits(self.adjacency[v] & mask):
                a |= 1 << index[w]
            adj.append(a)
        cls_of = tuple(self.class_of[v] for v in keep) if self.class_of is not None else None
        return Graph(len(keep), tuple(adj), cls_of)


@dataclass(frozen=True)
class Matching:
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        seen = set()
        norm = []
        for u, v in self.edges:
            if u == v:
                raise ValueError(f"degenerate edge {u}-{v}")
            if u in seen or v in seen:
                raise ValueError(f"edges not disjoint at {u}-{v}")
            seen.update((u, v))
            norm.append((min(u, v), max(u, v)))
        object.__setattr__(self, "edges", tuple(sorted(norm)))

    def __len__(self):
        return len(self.edges)

    def __iter__(self):
        return iter(self.edges)

    @property
    def vertex_mask(self) -> int:
        mask = 0
        for u, v in self.edges:
            mask |= 1 << u | 1 << v
        return mask

    def is_perfect_in(self, g: Graph) -> bool:
        return self.vertex_mask == g.full_mask and all(g.has_edge(u, v) for u, v in self.edges)

    def pair_counts(self, class_of) -> dict[tuple[int, int], int]:
        counts: dict[tuple[int, int], int] = {}
        for u, v in self.edges:
            a, b = sorted((class_of[u], class_of[v]))
            counts[(a, b)] = counts.get((a, b), 0) + 1
        return counts


@dataclass(frozen=True)
class BalancedMatching:
    base: Matching
    shape: Shape
    pair_counts: dict = field(compare=False)

    def __post_init__(self):
        m = self.shape.balanced_m
        expected = {(i, j): m for i, j in combinations(range(self.shape.r), 2)}
        if self.pair_counts != expected or len(self.base) != self.shape.n:
            raise NotBalanceable(f"matching is not a balanced perfect matching of K_{self.shape.r}x{self.shape.c}")

    @property
    def m(self) -> int:
        return self.shape.balanced_m


def iter_bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def build_complete_multipartite(shape: Shape) -> Graph:
    nv = shape.vertices
    if nv > MAX_VERTICES:
        raise GraphSizeError(f"rc = {nv} exceeds the {MAX_VERTICES}-vertex cap")
    full = (1 << nv) - 1
    adj = []
    for v in range(nv):
        i = shape.class_of(v)
        own = ((1 << shape.c) - 1) << (i * shape.c)
        adj.append(full & ~own)
    return Graph(nv, tuple(adj), tuple(shape.class_of(v) for v in range(nv)))


def complete_graph(n: int) -> Graph:
    return build_complete_multipartite(Shape(n, 1)) if n else Graph.empty(0)


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise ValueError("a cycle needs at least 3 vertices")
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def disjoint_union(*graphs: Graph) -> Graph:
    edges = []
    offset = 0
    for g in graphs:
        edges += [(u + offset, v + offset) for u, v in g.edges()]
        offset += g.vertex_count
    return Graph.from_edges(offset, edges)


def canonical_perfect_matching(shape: Shape, balanced: bool = True) -> Matching:
    """A fixed perfect matching of ``K_{r x c}``.

    Balanced: class i spends its vertices in consecutive blocks of m, one block per
    other class j in increasing order, and block (i -> j) is paired with block (j -> i)
    position by position. Otherwise vertex v is paired with v + rc/2, which always
    crosses classes when r >= 2.
    """
    if shape.vertices % 2:
        raise NoPerfectMatching(f"K_{shape.r}x{shape.c} has an odd number of vertices")
    if shape.r < 2:
        raise NoPerfectMatching("a single class has no edges")
    n = shape.n
    if not balanced:
        return Matching(tuple((v, v + n) for v in range(n)))
    m = shape.balanced_m
    c = shape.c

    def block(i, j):
        slot = j if j < i else j - 1
        start = i * c + slot * m
        return range(start, start + m)

    edges = []
    for i, j in combinations(range(shape.r), 2):
        edges += zip(block(i, j), block(j, i))
    return Matching(tuple(edges))


def balanced_matching(shape: Shape, matching: Matching) -> BalancedMatching:
    class_of = [shape.class_of(v) for v in range(shape.vertices)]
    return BalancedMatching(matching, shape, matching.pair_counts(class_of))


def complement_in_complete(g: Graph) -> Graph:
    full = g.full_mask
    adj = tuple(full & ~a & ~(1 << v) for v, a in enumerate(g.adjacency))
    return Graph(g.vertex_count, adj)


def _forbidden_adjacency(g: Graph, forbidden: Matching | None) -> tuple[int, ...]:
    if forbidden is None:
        return g.adjacency
    return g.without_edges(forbidden.edges).adjacency


def enumerate_perfect_matchings(g: Graph, forbidden: Matching | None = None) -> int:
    """Count perfect matchings of ``g`` that use no edge of ``forbidden``.

    Always matches the lowest unmatched vertex first, so each matching is reached
    exactly once; counts are memoised on the set of still-unmatched vertices.
    """
    if g.vertex_count % 2:
        return 0
    adj = _forbidden_adjacency(g, forbidden)

    @lru_cache(maxsize=None)
    def count(free: int) -> int:
        if not free:
            return 1
        u = (free & -free).bit_length() - 1
        rest = free ^ (1 << u)
        return sum(count(rest ^ (1 << v)) for v in iter_bits(adj[u] & rest))

    return count(g.full_mask)


def list_perfect_matchings(g: Graph, forbidden: Matching | None = None) -> list[Matching]:
    """Every perfect matching explicitly; debugging aid for graphs of <= 12 vertices."""
    if g.vertex_count > LISTING_LIMIT:
        raise GraphSizeError(f"listing is limited to {LISTING_LIMIT} vertices")
    adj = _forbidden_adjacency(g, forbidden)
    out: list[Matching] = []

    def extend(free, acc):
        if not free:
            out.append(Matching(tuple(acc)))
            return
        u = (free & -free).bit_length() - 1
        rest = free ^ (1 << u)
        for v in iter_bits(adj[u] & rest):
            extend(rest ^ (1 << v), acc + [(u, v)])

    if g.vertex_count % 2 == 0:
        extend(g.full_mask, [])
    return out


def count_balanced_pm_oracle(shape: Shape, forbidden: Matching | None = None) -> int:
    """Count perfect matchings of ``K_{r x c}`` (minus ``forbidden``) with exactly m
    edges between every pair of classes."""
    m = shape.balanced_m
    g = build_complete_multipartite(shape)
    adj = _forbidden_adjacency(g, forbidden)
    r = shape.r
    pair_index = {p: k for k, p in enumerate(combinations(range(r), 2))}
    cls = [shape.class_of(v) for v in range(shape.vertices)]

    @lru_cache(maxsize=None)
    def count(free: int, profile: tuple[int, ...]) -> int:
        if not free:
            return 1
        u = (free & -free).bit_length() - 1
        rest = free ^ (1 << u)
        total = 0
        for v in iter_bits(adj[u] & rest):
            k = pair_index[(cls[u], cls[v])]
            # pair counts only grow, so exceeding m can never end balanced
            if profile[k] == m:
                continue
            nxt = profile[:k] + (profile[k] + 1,) + profile[k + 1:]
            total += count(rest ^ (1 << v), nxt)
        return total

    if shape.vertices % 2:
        return 0
    return count(g.full_mask, (0,) * len(pair_index))


def random_graph(vertex_count: int, p: float, rng: random.Random) -> Graph:
    edges = [(u, v) for u, v in combinations(range(vertex_count), 2) if rng.random() < p]
    return Graph.from_edges(vertex_count, edges)


def read_edge_list(path: str | Path) -> tuple[Graph, Shape | None]:
    """Parse the ``vertices N classes r size c`` header plus ``u v`` lines.

    ``classes r size c`` may be omitted; when present the class map is attached and
    intra-class edges are rejected.
    """
    lines = [ln.split("#", 1)[0].strip() for ln in Path(path).read_text().splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise ValueError(f"{path}: empty graph file")
    header = lines[0].split()
    fields = dict(zip(header[::2], header[1::2]))
    if "vertices" not in fields or len(header) % 2:
        raise ValueError(f"{path}: bad header {lines[0]!r}")
    nv = int(fields["vertices"])
    shape = None
    class_of = None
    if "classes" in fields:
        shape = Shape(int(fields["classes"]), int(fields["size"]))
        if shape.vertices != nv:
            raise ValueError(f"{path}: classes x size != vertices")
        class_of = [shape.class_of(v) for v in range(nv)]
    edges = []
    for ln in lines[1:]:
        u, v = (int(t) for t in ln.split())
        edges.append((u, v))
    return Graph.from_edges(nv, edges, class_of), shape


def write_edge_list(g: Graph, path: str | Path, shape: Shape | None = None) -> None:
    head = f"vertices {g.vertex_count}"
    if shape is not None:
        head += f" classes {shape.r} size {shape.c}"
    body = "".join(f"{u} {v}\n" for u, v in g.edges())
    Path(path).write_text(head + "\n" + body)
