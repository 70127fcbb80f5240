from __future__ import annotations

import itertools
import random

import pytest

import oracles
from sierpinski_gp import EnumerationLimitError, build_graph, build_oracle
from sierpinski_gp.graph_core import decode, encode


@pytest.fixture(scope="module")
def s32():
    g = build_graph(3, 2)
    return g, build_oracle(g)


@pytest.fixture(scope="module")
def s33():
    g = build_graph(3, 3)
    return g, build_oracle(g)


@pytest.mark.parametrize("p,n", [(3, 2), (3, 3), (4, 2), (5, 2), (3, 4)])
def test_distances_match_bfs(p, n):
    g = build_graph(p, n)
    o = build_oracle(g)
    ref = oracles.distances(p, n)
    for u in range(g.order):
        row = ref[decode(u, p, n)]
        for v in range(g.order):
            assert o.distance(u, v) == row[decode(v, p, n)]


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_extreme_vertex_distance(n):
    g = build_graph(3, n)
    o = build_oracle(g)
    assert o.distance(g.extreme_vertex(0), g.extreme_vertex(2)) == 2**n - 1


def test_counts_on_s32(s32):
    g, o = s32
    assert o.count_geodesics(0, 0) == 1
    for j in (1, 2):
        assert o.count_geodesics(g.parse("00"), g.parse(f"0{j}")) == 1
    for i, j, k in itertools.permutations(range(3)):
        assert o.count_geodesics(g.parse(f"{i}{k}"), g.parse(f"{j}{k}")) == 2


def test_two_geodesics_01_21(s32):
    g, o = s32
    paths = o.enumerate_geodesics(g.parse("01"), g.parse("21"))
    labelled = sorted([g.label(w) for w in path] for path in paths)
    # ik,ij,ji,jk and ik,ki,kj,jk with i=0, j=2, k=1
    assert labelled == [["01", "02", "20", "21"], ["01", "10", "12", "21"]]


def test_adjacent_pair_has_single_geodesic(s32):
    g, o = s32
    assert o.enumerate_geodesics(g.parse("01"), g.parse("10")) == [[g.parse("01"), g.parse("10")]]


@pytest.mark.parametrize("p,n", [(3, 2), (3, 3), (4, 2), (5, 2), (3, 4)])
def test_at_most_two_geodesics(p, n):
    g = build_graph(p, n)
    o = build_oracle(g)
    for u in range(g.order):
        for v in range(u + 1, g.order):
            assert 1 <= o.count_geodesics(u, v) <= 2


@pytest.mark.parametrize("p,n", [(3, 3), (4, 2)])
def test_enumeration_matches_dfs(p, n):
    g = build_graph(p, n)
    o = build_oracle(g)
    for u in range(g.order):
        for v in range(g.order):
            got = o.enumerate_geodesics(u, v)
            ref = oracles.geodesics(p, n, decode(u, p, n), decode(v, p, n))
            assert [tuple(decode(w, p, n) for w in path) for path in got] == ref
            assert len(got) == o.count_geodesics(u, v)


def test_000_to_111(s33):
    g, o = s33
    got = [tuple(g.label(w) for w in path) for path in o.enumerate_geodesics(0, g.parse("111"))]
    ref = [tuple("".join(map(str, w)) for w in path)
           for path in oracles.geodesics(3, 3, (0, 0, 0), (1, 1, 1))]
    assert got == ref


def test_enumeration_limit(s32):
    g, o = s32
    with pytest.raises(EnumerationLimitError):
        o.enumerate_geodesics(g.parse("01"), g.parse("21"), limit=1)


def test_avoiding_examples(s32):
    g, o = s32
    assert o.exists_geodesic_avoiding(g.parse("00"), g.parse("22"), 0)
    for j in (1, 2):
        # 00 -> 0j -> j0 -> ji is the only geodesic from 00 to ji
        for i in range(3):
            if i == j:
                continue
            u, v = g.parse("00"), g.parse(f"{j}{i}")
            assert not o.exists_geodesic_avoiding(u, v, 1 << g.parse(f"0{j}"))
            assert o.some_blocker_on_any_geodesic(u, v, 1 << g.parse(f"0{j}"))
    blocked = g.parse_set(["02", "20"])
    assert o.exists_geodesic_avoiding(g.parse("01"), g.parse("21"), blocked)
    assert o.some_blocker_on_any_geodesic(g.parse("01"), g.parse("21"), blocked)
    ends = g.parse_set(["01", "21"])
    assert not o.some_blocker_on_any_geodesic(g.parse("01"), g.parse("21"), ends)


@pytest.mark.parametrize("p,n", [(3, 3), (4, 2)])
def test_layered_search_matches_enumeration(p, n):
    g = build_graph(p, n)
    o = build_oracle(g)
    rng = random.Random(7)
    for _ in range(3000):
        u, v = rng.randrange(g.order), rng.randrange(g.order)
        X = rng.getrandbits(g.order) & rng.getrandbits(g.order)
        interiors = [sum(1 << w for w in path[1:-1]) for path in o.enumerate_geodesics(u, v)] if u != v else [0]
        visible = any(not m & X for m in interiors)
        blocked = any(m & X for m in interiors)
        assert o.exists_geodesic_avoiding(u, v, X) == visible
        assert o.visible(u, v, X) == visible
        assert o.some_blocker_on_any_geodesic(u, v, X) == blocked
        assert o.positionable(u, v, X) == (not blocked)


def test_tables_match_pair_methods(s33):
    g, o = s33
    th, it, gi = o.through_table(), o.interior_table(), o.interiors_table()
    for a in range(g.order):
        for b in range(g.order):
            assert th[a][b] == o.through_mask(a, b)
            assert it[a][b] == o.interior_mask(a, b)
            if a != b:
                assert gi[a][b] == o.geodesic_interiors(a, b)


def test_through_mask_definition(s33):
    g, o = s33
    for a in range(g.order):
        for b in range(g.order):
            ref = 0
            for c in range(g.order):
                if c != a and o.distance(c, a) + o.distance(a, b) == o.distance(c, b):
                    ref |= 1 << c
            assert o.through_mask(a, b) == ref


def test_distance_csv(s32):
    g, o = s32
    rows = o.to_csv().splitlines()
    assert len(rows) == 9
    assert rows[0].split(",")[encode([2, 2], 3)] == "3"
