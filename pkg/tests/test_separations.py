import itertools
import random

import pytest
from hypothesis import given, settings

from septree.errors import SeparationError
from septree.graph import Graph
from septree.separations import (
    Separation,
    corner_separations,
    enumerate_separations,
    is_nested,
    is_separation,
    is_symmetric,
    le,
    make_separation,
    separations_to_json,
    sort_separations,
)

from conftest import brute_separations, graphs, random_graph


def test_make_separation_examples(p3):
    s = make_separation(p3, p3.mask("ab"), p3.mask("bc"))
    assert s.order == 1 and s.is_proper
    with pytest.raises(SeparationError, match="edge a-b"):
        make_separation(p3, p3.mask("a"), p3.mask("bc"))
    t = make_separation(p3, p3.mask("abc"), p3.mask("b"))
    assert t.order == 1 and not t.is_proper
    assert s.inverse == Separation(p3.mask("bc"), p3.mask("ab"))


def test_make_separation_cover_error(p3):
    with pytest.raises(SeparationError, match="cover"):
        make_separation(p3, p3.mask("a"), p3.mask("b"))


def test_le_examples(p3):
    small = Separation(p3.mask("a"), p3.full)
    mid = Separation(p3.mask("ab"), p3.mask("bc"))
    assert le(small, mid)
    assert not le(mid, small)
    assert le(mid, mid)


def test_nested_examples(p3, c4):
    s = Separation(p3.mask("ab"), p3.mask("bc"))
    assert is_nested(s, s.inverse)
    assert is_nested(Separation(p3.mask("a"), p3.full), s)
    x = Separation(c4.mask("wxy"), c4.mask("yzw"))
    y = Separation(c4.mask("xyz"), c4.mask("zwx"))
    assert not is_nested(x, y)


def test_corner_examples(p3, c4):
    x = Separation(c4.mask("wxy"), c4.mask("yzw"))
    y = Separation(c4.mask("xyz"), c4.mask("zwx"))
    first, _, third, _ = corner_separations(x, y)
    assert first.order + third.order == x.order + y.order == 4

    s = Separation(p3.mask("a"), p3.full)
    t = Separation(p3.mask("ab"), p3.mask("bc"))
    first, _, third, _ = corner_separations(s, t)
    assert first == Separation(p3.mask("a"), p3.full) and first.order == 1
    assert third == Separation(p3.mask("bc"), p3.mask("ab")) and third.order == 1

    for c in corner_separations(t, t):
        assert c in (t, t.inverse) or not c.is_proper


def test_enumerate_examples(p3, k4):
    all2 = enumerate_separations(p3, 2)
    assert len(all2) == 10
    assert enumerate_separations(p3, 2, proper_only=True) == {
        Separation(p3.mask("ab"), p3.mask("bc")), Separation(p3.mask("bc"), p3.mask("ab"))}
    assert enumerate_separations(k4, 3, proper_only=True) == frozenset()
    assert enumerate_separations(p3, 1) == {Separation(0, p3.full), Separation(p3.full, 0)}


def test_enumerate_exact_order(tb):
    exact = enumerate_separations(tb, 2, exact_order=True)
    assert exact and all(s.order == 1 for s in exact)
    assert exact == {s for s in enumerate_separations(tb, 2) if s.order == 1}


@given(graphs(max_n=6))
@settings(max_examples=60, deadline=None)
def test_enumeration_matches_definition(g):
    for k in range(0, 4):
        assert enumerate_separations(g, k) == brute_separations(g, k)


def test_enumeration_is_symmetric_and_valid():
    rng = random.Random(11)
    for _ in range(30):
        g = random_graph(rng, 2, 8)
        seps = enumerate_separations(g, 3)
        assert is_symmetric(seps)
        for s in seps:
            assert is_separation(g, s.a, s.b) and s.order < 3


def _random_pairs(rng, count):
    while count:
        g = random_graph(rng, 2, 8)
        seps = sort_separations(enumerate_separations(g, g.n + 1))
        s, t = rng.choice(seps), rng.choice(seps)
        yield g, s, t
        count -= 1


def test_lemma_corner_order_identity():
    rng = random.Random(3)
    for g, s, t in _random_pairs(rng, 300):
        corners = corner_separations(s, t)
        for c in corners:
            assert is_separation(g, c.a, c.b)
        assert corners[0].order + corners[2].order == s.order + t.order


def test_order_duality_and_partial_order():
    rng = random.Random(4)
    for _ in range(8):
        g = random_graph(rng, 2, 6)
        seps = sort_separations(enumerate_separations(g, 3))
        for s, t in itertools.product(seps, repeat=2):
            assert le(s, t) == le(t.inverse, s.inverse)
            if le(s, t) and le(t, s):
                assert s == t
            assert is_nested(s, t) == is_nested(t, s)
        for s in seps:
            assert is_nested(s, s)


def test_transitivity_on_samples():
    rng = random.Random(8)
    g = random_graph(rng, 6, 6)
    seps = sort_separations(enumerate_separations(g, 3))
    for s, t, u in itertools.islice(itertools.product(seps, repeat=3), 20000):
        if le(s, t) and le(t, u):
            assert le(s, u)


def test_json_encoding_sorted(p3):
    seps = enumerate_separations(p3, 2, proper_only=True)
    assert separations_to_json(seps) == [{"A": [0, 1], "B": [1, 2]}, {"A": [1, 2], "B": [0, 1]}]
    assert separations_to_json(seps, p3)[0] == {"A": ["a", "b"], "B": ["b", "c"]}


def test_empty_graph_enumeration():
    g = Graph.from_edges(0, [])
    assert enumerate_separations(g, 1) == {Separation(0, 0)}
