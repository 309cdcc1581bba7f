"""Small named graphs used in the documentation, tests and CLI examples."""

from __future__ import annotations

from itertools import combinations

from .graph import Graph


def _build(names: list[str], edges: list[tuple[str, str]]) -> Graph:
    idx = {x: i for i, x in enumerate(names)}
    return Graph.from_edges(len(names), [(idx[u], idx[v]) for u, v in edges], names)


def _clique(vs: list[str]) -> list[tuple[str, str]]:
    return list(combinations(vs, 2))


def path3() -> Graph:
    return _build(["a", "b", "c"], [("a", "b"), ("b", "c")])


def k4() -> Graph:
    vs = ["w", "x", "y", "z"]
    return _build(vs, _clique(vs))


def c4() -> Graph:
    return _build(["w", "x", "y", "z"], [("w", "x"), ("x", "y"), ("y", "z"), ("z", "w")])


def three_blobs() -> Graph:
    """Three K5's threaded on a path: X1 -x1-p-x2- X2 -y2-q-x3- X3."""
    x1 = ["a1", "a2", "a3", "a4", "x1"]
    x2 = ["x2", "b1", "b2", "b3", "y2"]
    x3 = ["x3", "c1", "c2", "c3", "c4"]
    names = x1 + ["p"] + x2 + ["q"] + x3
    edges = _clique(x1) + _clique(x2) + _clique(x3)
    edges += [("x1", "p"), ("p", "x2"), ("y2", "q"), ("q", "x3")]
    return _build(names, edges)


def triangle_glued_k6(copies: int) -> Graph:
    """``copies`` K6's pairwise sharing one triangle {t1, t2, t3}."""
    tri = ["t1", "t2", "t3"]
    names = list(tri)
    edges = _clique(tri)
    for i in range(1, copies + 1):
        own = [f"y{i}_{j}" for j in range(1, 4)]
        names += own
        edges += [e for e in _clique(tri + own) if e not in edges]
    return _build(names, edges)


def two_triangles() -> Graph:
    return _build(["a", "b", "c", "d", "e", "f"],
                  _clique(["a", "b", "c"]) + _clique(["d", "e", "f"]))


def grid(rows: int, cols: int) -> Graph:
    names = [f"{r},{c}" for r in range(rows) for c in range(cols)]
    edges = []
    for r in range(rows):
        for c in range(cols):
            if c + 1 < cols:
                edges.append((f"{r},{c}", f"{r},{c + 1}"))
            if r + 1 < rows:
                edges.append((f"{r},{c}", f"{r + 1},{c}"))
    return _build(names, edges)


def star_of_components(leaves: int = 4, hub: int = 2) -> Graph:
    """``leaves`` single vertices each joined to all of a hub set Z of size ``hub``."""
    z = [f"z{i}" for i in range(1, hub + 1)]
    ls = [f"l{i}" for i in range(1, leaves + 1)]
    return _build(z + ls, [(u, v) for u in ls for v in z])


FIXTURES = {
    "P3": path3,
    "K4": k4,
    "C4": c4,
    "TB": three_blobs,
    "TG3": lambda: triangle_glued_k6(3),
    "TG4": lambda: triangle_glued_k6(4),
    "2T": two_triangles,
}
