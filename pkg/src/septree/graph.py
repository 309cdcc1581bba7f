"""Graphs on vertices 0..n-1 with bitmask vertex sets.

A vertex set is a plain ``int`` whose bit ``i`` marks vertex ``i``.  All
higher-level modules use this representation, so set algebra is ``&``, ``|``
and ``& ~`` and cardinality is ``int.bit_count``.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Iterator, Sequence

from .errors import GraphParseError, ResourceLimitError

MAX_AUTOMORPHISM_VERTICES = 40


def mask_of(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def bits(mask: int) -> Iterator[int]:
    """Yield the members of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@lru_cache(maxsize=1 << 18)
def members(mask: int) -> tuple[int, ...]:
    return tuple(bits(mask))


def permute_mask(mask: int, perm: Sequence[int]) -> int:
    out = 0
    for v in bits(mask):
        out |= 1 << perm[v]
    return out


@dataclass(frozen=True)
class Graph:
    """A finite simple undirected graph.

    ``adj[v]`` is the neighbourhood of ``v`` as a bitmask.  Construct through
    :meth:`from_edges` (or :func:`parse_graph`), which validates the edge list.
    """

    n: int
    adj: tuple[int, ...]
    names: tuple[str, ...] = field(compare=False)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]],
                   names: Sequence[str] | None = None) -> "Graph":
        adj = [0] * n
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                raise ValueError(f"loop at vertex {u}")
            if adj[u] >> v & 1:
                raise ValueError(f"duplicate edge ({u}, {v})")
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        if names is None:
            names = [str(i) for i in range(n)]
        elif len(names) != n:
            raise ValueError(f"expected {n} names, got {len(names)}")
        elif len(set(names)) != n:
            raise ValueError("vertex names must be distinct")
        return cls(n, tuple(adj), tuple(names))

    @property
    def full(self) -> int:
        return (1 << self.n) - 1

    @property
    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in bits(self.adj[u]) if u < v]

    @property
    def m(self) -> int:
        return sum(a.bit_count() for a in self.adj) // 2

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    def vertex(self, name: str) -> int:
        return self.names.index(name)

    def mask(self, names: Iterable[str]) -> int:
        """Bitmask of the vertices with the given names."""
        return mask_of(self.vertex(x) for x in names)

    def label(self, mask: int) -> list[str]:
        return [self.names[v] for v in bits(mask)]

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def relabel(self, perm: Sequence[int]) -> "Graph":
        """The isomorphic copy in which vertex ``v`` becomes ``perm[v]``."""
        names = [""] * self.n
        for v in range(self.n):
            names[perm[v]] = self.names[v]
        return Graph.from_edges(self.n, ((perm[u], perm[v]) for u, v in self.edges), names)

    def to_json(self) -> dict:
        return {"n": self.n, "edges": [list(e) for e in self.edges], "names": list(self.names)}


def parse_graph(text: str, fmt: str = "edge-list") -> Graph:
    """Parse a graph in ``edge-list`` or ``adjacency-json`` format."""
    if fmt == "edge-list":
        return _parse_edge_list(text)
    if fmt == "adjacency-json":
        return _parse_json(text)
    raise GraphParseError(f"unknown graph format {fmt!r}")


def _parse_edge_list(text: str) -> Graph:
    header = None
    edges: list[tuple[int, int]] = []
    seen: set[tuple[int, int]] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        try:
            a, b = (int(x) for x in fields)
        except ValueError:
            raise GraphParseError(f"expected two integers, got {line!r}", lineno) from None
        if header is None:
            if a < 0 or b < 0:
                raise GraphParseError("negative vertex or edge count", lineno)
            header = (a, b)
            continue
        n = header[0]
        if a == b:
            raise GraphParseError(f"loop at vertex {a}", lineno)
        if not (0 <= a < n and 0 <= b < n):
            raise GraphParseError(f"vertex index out of range 0..{n - 1}", lineno)
        if a > b:
            raise GraphParseError(f"expected u < v, got {a} {b}", lineno)
        if (a, b) in seen:
            raise GraphParseError(f"duplicate edge {a} {b}", lineno)
        seen.add((a, b))
        edges.append((a, b))
    if header is None:
        raise GraphParseError("missing 'n m' header line")
    if len(edges) != header[1]:
        raise GraphParseError(f"header announces {header[1]} edges, found {len(edges)}")
    return Graph.from_edges(header[0], edges)


def _parse_json(text: str) -> Graph:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphParseError(f"invalid JSON: {exc.msg}", exc.lineno) from None
    if not isinstance(doc, dict) or "n" not in doc or "edges" not in doc:
        raise GraphParseError("adjacency JSON needs an object with 'n' and 'edges'")
    n = doc["n"]
    if not isinstance(n, int) or n < 0:
        raise GraphParseError("'n' must be a non-negative integer")
    edges = []
    for i, e in enumerate(doc["edges"]):
        if not (isinstance(e, list) and len(e) == 2 and all(isinstance(x, int) for x in e)):
            raise GraphParseError(f"edge #{i} is not a pair of integers")
        edges.append((e[0], e[1]))
    names = doc.get("names")
    if names is not None and not (isinstance(names, list) and all(isinstance(x, str) for x in names)):
        raise GraphParseError("'names' must be an array of strings")
    try:
        return Graph.from_edges(n, edges, names)
    except ValueError as exc:
        raise GraphParseError(str(exc)) from None


def component_of(g: Graph, start: int, allowed: int) -> int:
    """Vertices reachable from ``start`` inside ``allowed`` (start included)."""
    comp = frontier = 1 << start
    while frontier:
        nxt = 0
        for v in bits(frontier):
            nxt |= g.adj[v]
        frontier = nxt & allowed & ~comp
        comp |= frontier
    return comp


def components(g: Graph, removed: int = 0) -> list[int]:
    """Connected components of ``g - removed``, ordered by least vertex."""
    rest = g.full & ~removed
    out = []
    while rest:
        low = (rest & -rest).bit_length() - 1
        comp = component_of(g, low, rest)
        out.append(comp)
        rest &= ~comp
    return out


def is_connected(g: Graph, removed: int = 0) -> bool:
    return len(components(g, removed)) <= 1


def is_l_connected(g: Graph, l: int) -> bool:
    """True iff |V| > l and no set of fewer than l vertices disconnects g."""
    if g.n <= l:
        return False
    for size in range(l):
        for xs in combinations(range(g.n), size):
            if not is_connected(g, mask_of(xs)):
                return False
    return True


def _refined_colours(g: Graph) -> list[tuple]:
    deg = [g.degree(v) for v in range(g.n)]
    return [(deg[v], tuple(sorted(deg[u] for u in bits(g.adj[v])))) for v in range(g.n)]


def iter_automorphisms(g: Graph, max_vertices: int = MAX_AUTOMORPHISM_VERTICES) -> Iterator[tuple[int, ...]]:
    """Backtracking search over adjacency-preserving permutations.

    Vertices are matched in BFS order so each new vertex usually has an
    already-mapped neighbour; candidates must share the refined degree colour.
    """
    if g.n > max_vertices:
        raise ResourceLimitError(f"automorphism search refused: {g.n} vertices > {max_vertices}")
    colour = _refined_colours(g)
    order: list[int] = []
    seen = 0
    for root in range(g.n):
        if seen >> root & 1:
            continue
        queue = deque([root])
        seen |= 1 << root
        while queue:
            v = queue.popleft()
            order.append(v)
            for u in bits(g.adj[v] & ~seen):
                seen |= 1 << u
                queue.append(u)
    image = [-1] * g.n
    used = 0

    def extend(depth: int) -> Iterator[tuple[int, ...]]:
        nonlocal used
        if depth == g.n:
            yield tuple(image)
            return
        v = order[depth]
        for w in range(g.n):
            if used >> w & 1 or colour[w] != colour[v]:
                continue
            ok = True
            for u in order[:depth]:
                if g.has_edge(u, v) != g.has_edge(image[u], w):
                    ok = False
                    break
            if not ok:
                continue
            image[v] = w
            used |= 1 << w
            yield from extend(depth + 1)
            used &= ~(1 << w)
            image[v] = -1

    yield from extend(0)


def automorphisms(g: Graph, max_vertices: int = MAX_AUTOMORPHISM_VERTICES) -> list[tuple[int, ...]]:
    """The full automorphism group of ``g`` as sorted explicit permutations."""
    return sorted(iter_automorphisms(g, max_vertices))
