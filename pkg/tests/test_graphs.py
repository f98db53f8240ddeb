import itertools

import pytest
from hypothesis import given, settings

from derange.bigmath import double_factorial_odd, factorial
from derange.graphs import (Graph, GraphSizeError, Matching, NoPerfectMatching, NotBalanceable, Shape,
                            balanced_matching, build_complete_multipartite, canonical_perfect_matching,
                            complement_in_complete, complete_graph, count_balanced_pm_oracle, cycle_graph,
                            enumerate_perfect_matchings, list_perfect_matchings, random_graph, read_edge_list,
                            write_edge_list)

from .conftest import brute_perfect_matchings, graphs


@pytest.mark.parametrize("shape,edges,degree", [(Shape(2, 3), 9, 3), (Shape(4, 1), 6, 3), (Shape(3, 2), 12, 4)])
def test_complete_multipartite_sizes(shape, edges, degree):
    g = build_complete_multipartite(shape)
    assert g.edge_count == edges
    assert set(g.degrees()) == {degree}
    for u, v in g.edges():
        assert shape.class_of(u) != shape.class_of(v)


def test_size_cap():
    with pytest.raises(GraphSizeError):
        build_complete_multipartite(Shape(5, 13))


def test_intra_class_edge_rejected():
    with pytest.raises(ValueError):
        Graph.from_edges(4, [(0, 1)], class_of=[0, 0, 1, 1])


def test_canonical_bipartite_is_identity_matching():
    n = 5
    m = canonical_perfect_matching(Shape(2, n))
    assert m.edges == tuple((i, n + i) for i in range(n))


def test_canonical_balanced_4x3():
    shape = Shape(4, 3)
    m = canonical_perfect_matching(shape)
    assert len(m) == 6
    assert m.is_perfect_in(build_complete_multipartite(shape))
    bm = balanced_matching(shape, m)
    assert set(bm.pair_counts.values()) == {1}
    assert bm.m == 1


def test_not_balanceable():
    with pytest.raises(NotBalanceable):
        canonical_perfect_matching(Shape(4, 2))


def test_odd_has_no_perfect_matching():
    with pytest.raises(NoPerfectMatching):
        canonical_perfect_matching(Shape(3, 3))


@pytest.mark.parametrize("r,c", [(2, 4), (3, 4), (4, 3), (4, 6), (5, 4), (6, 1), (6, 5), (5, 2)])
def test_canonical_matchings_are_perfect(r, c):
    shape = Shape(r, c)
    g = build_complete_multipartite(shape)
    assert canonical_perfect_matching(shape, balanced=False).is_perfect_in(g)
    if c % (r - 1) == 0:
        m = canonical_perfect_matching(shape)
        assert m.is_perfect_in(g)
        balanced_matching(shape, m)


def test_unbalanced_4x2_matching_exists():
    # m edges between V1,V2 and m between V3,V4, none elsewhere
    shape = Shape(4, 2)
    m = Matching(((0, 2), (1, 3), (4, 6), (5, 7)))
    assert m.is_perfect_in(build_complete_multipartite(shape))
    counts = m.pair_counts([shape.class_of(v) for v in range(8)])
    assert counts == {(0, 1): 2, (2, 3): 2}
    with pytest.raises(NotBalanceable):
        balanced_matching(shape, m)


def test_complement_examples():
    k4 = complete_graph(4)
    pm = [(0, 1), (2, 3)]
    assert complement_in_complete(k4.without_edges(pm)).edges() == pm
    octa = build_complete_multipartite(Shape(3, 2))
    assert complement_in_complete(octa).edges() == [(0, 1), (2, 3), (4, 5)]
    assert complement_in_complete(Graph.empty(4)).edge_count == 6


def test_complement_involution(rng):
    for _ in range(100):
        g = random_graph(rng.randint(0, 20), rng.random(), rng)
        assert complement_in_complete(complement_in_complete(g)) == g


def test_pm_examples():
    assert enumerate_perfect_matchings(complete_graph(4)) == 3
    octa = build_complete_multipartite(Shape(3, 2))
    assert enumerate_perfect_matchings(octa) == 8
    assert enumerate_perfect_matchings(octa, canonical_perfect_matching(Shape(3, 2))) == 4
    assert enumerate_perfect_matchings(complete_graph(5)) == 0


def test_pm_complete_graphs():
    for v in range(0, 13, 2):
        assert enumerate_perfect_matchings(complete_graph(v)) == double_factorial_odd(v // 2)


def test_pm_complete_bipartite():
    for n in range(1, 7):
        assert enumerate_perfect_matchings(build_complete_multipartite(Shape(2, n))) == factorial(n)


@settings(max_examples=60, deadline=None)
@given(graphs(max_vertices=8))
def test_oracle_matches_subset_brute_force(g):
    assert enumerate_perfect_matchings(g) == brute_perfect_matchings(g)


def test_listing_agrees_with_count(rng):
    for _ in range(20):
        g = random_graph(rng.choice([4, 6, 8, 10]), 0.6, rng)
        listed = list_perfect_matchings(g)
        assert len(listed) == enumerate_perfect_matchings(g)
        assert len(set(listed)) == len(listed)
        assert all(m.is_perfect_in(g) for m in listed)


def test_listing_limit():
    with pytest.raises(GraphSizeError):
        list_perfect_matchings(complete_graph(14))


def test_balanced_oracle_tripartite_is_everything():
    # every perfect matching of K_{2m,2m,2m} is balanced
    for m in (1, 2):
        shape = Shape(3, 2 * m)
        g = build_complete_multipartite(shape)
        M = canonical_perfect_matching(shape)
        assert count_balanced_pm_oracle(shape) == enumerate_perfect_matchings(g)
        assert count_balanced_pm_oracle(shape, M) == enumerate_perfect_matchings(g, M)


def test_balanced_oracle_4x3():
    shape = Shape(4, 3)
    assert count_balanced_pm_oracle(shape) == 1296
    assert count_balanced_pm_oracle(shape, canonical_perfect_matching(shape)) == 686


def test_balanced_oracle_by_listing():
    # independent filter over every perfect matching of K_{4x3}
    shape = Shape(4, 3)
    g = build_complete_multipartite(shape)
    cls = [shape.class_of(v) for v in range(12)]
    M = canonical_perfect_matching(shape)
    total = 0
    for pm in list_perfect_matchings(g, M):
        counts = pm.pair_counts(cls)
        if len(counts) == 6 and set(counts.values()) == {1}:
            total += 1
    assert total == 686


def test_two_balanced_matchings_give_same_count():
    shape = Shape(4, 3)
    g = build_complete_multipartite(shape)
    first = canonical_perfect_matching(shape)
    # relabel class 0 vertices by a cyclic shift: another balanced matching
    perm = {0: 1, 1: 2, 2: 0}
    other = Matching(tuple((perm.get(u, u), perm.get(v, v)) for u, v in first))
    assert other != first
    balanced_matching(shape, other)
    assert count_balanced_pm_oracle(shape, other) == count_balanced_pm_oracle(shape, first)
    assert enumerate_perfect_matchings(g, other) == enumerate_perfect_matchings(g, first)


def test_matching_rejects_overlap():
    with pytest.raises(ValueError):
        Matching(((0, 1), (1, 2)))


def test_components():
    g = Graph.from_edges(7, [(0, 1), (1, 2), (4, 5)])
    assert g.components() == [0b111, 1 << 3, 0b110000, 1 << 6]


def test_edge_list_roundtrip(tmp_path):
    shape = Shape(3, 2)
    g = build_complete_multipartite(shape)
    path = tmp_path / "octa.txt"
    write_edge_list(g, path, shape)
    assert path.read_text().splitlines()[0] == "vertices 6 classes 3 size 2"
    back, s = read_edge_list(path)
    assert s == shape
    assert back == g


def test_edge_list_plain_header(tmp_path):
    path = tmp_path / "c4.txt"
    path.write_text("vertices 4\n0 1\n1 2\n2 3\n3 0\n")
    g, shape = read_edge_list(path)
    assert shape is None
    assert g == cycle_graph(4)


def test_edge_list_rejects_intra_class_edge(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("vertices 4 classes 2 size 2\n0 1\n")
    with pytest.raises(ValueError):
        read_edge_list(path)


def test_edge_list_bad_header(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("nodes 4\n0 1\n")
    with pytest.raises(ValueError):
        read_edge_list(path)
