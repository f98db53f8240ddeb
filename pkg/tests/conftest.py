import itertools
import random

import pytest
from hypothesis import strategies as st

from derange.graphs import Graph


def brute_k_matchings(g: Graph, k: int, forbidden=()) -> int:
    """Count k-edge matchings by trying every k-subset of edges."""
    bad = {tuple(sorted(e)) for e in forbidden}
    edges = [e for e in g.edges() if e not in bad]
    total = 0
    for sub in itertools.combinations(edges, k):
        verts = [v for e in sub for v in e]
        if len(set(verts)) == 2 * k:
            total += 1
    return total


def brute_perfect_matchings(g: Graph, forbidden=()) -> int:
    if g.vertex_count % 2:
        return 0
    return brute_k_matchings(g, g.vertex_count // 2, forbidden)


@st.composite
def graphs(draw, min_vertices=0, max_vertices=10):
    nv = draw(st.integers(min_vertices, max_vertices))
    pairs = list(itertools.combinations(range(nv), 2))
    chosen = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return Graph.from_edges(nv, [p for p, keep in zip(pairs, chosen) if keep])


@pytest.fixture
def rng():
    return random.Random(20221922)
