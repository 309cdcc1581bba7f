"""Separations, their partial order, nestedness and exhaustive enumeration.

A :class:`Separation` is an ordered pair ``(a, b)`` of vertex bitmasks.  It
does not carry its graph; :func:`make_separation` validates a pair against a
graph, while the enumerators only ever produce valid separations.  Sets of
separations are plain ``frozenset`` objects.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations, product
from typing import Iterable, NamedTuple, Sequence

from .errors import SeparationError
from .graph import Graph, bits, components, mask_of, members, permute_mask


class Separation(NamedTuple):
    a: int
    b: int

    @property
    def separator(self) -> int:
        return self.a & self.b

    @property
    def order(self) -> int:
        return (self.a & self.b).bit_count()

    @property
    def inverse(self) -> "Separation":
        return Separation(self.b, self.a)

    @property
    def is_proper(self) -> bool:
        return bool(self.a & ~self.b) and bool(self.b & ~self.a)

    def key(self) -> tuple[tuple[int, ...], tuple[int, ...]]:
        """Sort key: lexicographic on (sorted A, sorted B)."""
        return members(self.a), members(self.b)

    def permuted(self, perm: Sequence[int]) -> "Separation":
        return Separation(permute_mask(self.a, perm), permute_mask(self.b, perm))

    def to_json(self, g: Graph | None = None):
        if g is None:
            return {"A": list(members(self.a)), "B": list(members(self.b))}
        return {"A": g.label(self.a), "B": g.label(self.b)}


def check_separation(g: Graph, a: int, b: int) -> None:
    if a | b != g.full:
        missing = members(g.full & ~(a | b))
        raise SeparationError(f"sides do not cover V; missing vertices {list(missing)}")
    a_only = a & ~b
    b_only = b & ~a
    for x in bits(a_only):
        hit = g.adj[x] & b_only
        if hit:
            y = (hit & -hit).bit_length() - 1
            raise SeparationError(f"edge {g.names[x]}-{g.names[y]} joins A\\B to B\\A")


def make_separation(g: Graph, a: int | Iterable[int], b: int | Iterable[int]) -> Separation:
    """Validate ``(a, b)`` as a separation of ``g``."""
    if not isinstance(a, int):
        a = mask_of(a)
    if not isinstance(b, int):
        b = mask_of(b)
    if (a | b) & ~g.full:
        raise SeparationError("vertex outside the graph")
    check_separation(g, a, b)
    return Separation(a, b)


def is_separation(g: Graph, a: int, b: int) -> bool:
    try:
        check_separation(g, a, b)
    except SeparationError:
        return False
    return True


def le(s: Separation, t: Separation) -> bool:
    """``s <= t`` iff A(s) is a subset of A(t) and B(s) a superset of B(t)."""
    return not (s.a & ~t.a) and not (t.b & ~s.b)


def is_nested(s: Separation, t: Separation) -> bool:
    return le(s, t) or le(s, t.inverse) or le(t, s) or le(t.inverse, s)


def crosses(s: Separation, t: Separation) -> bool:
    return not is_nested(s, t)


def nested_with_all(s: Separation, seps: Iterable[Separation]) -> bool:
    return all(is_nested(s, t) for t in seps)


def is_nested_set(seps: Iterable[Separation]) -> bool:
    seps = list(seps)
    return all(is_nested(s, t) for i, s in enumerate(seps) for t in seps[i + 1:])


def is_symmetric(seps: frozenset[Separation] | set[Separation]) -> bool:
    return all(s.inverse in seps for s in seps)


def is_antisymmetric(seps: frozenset[Separation] | set[Separation]) -> bool:
    return not any(s.inverse in seps for s in seps)


def symmetrize(seps: Iterable[Separation]) -> frozenset[Separation]:
    out = set()
    for s in seps:
        out.add(s)
        out.add(s.inverse)
    return frozenset(out)


def corner_separations(s: Separation, t: Separation) -> tuple[Separation, Separation, Separation, Separation]:
    """The four corners (A∩C, B∪D), (A∪C, B∩D), (B∩D, A∪C), (B∪D, A∩C)."""
    return (
        Separation(s.a & t.a, s.b | t.b),
        Separation(s.a | t.a, s.b & t.b),
        Separation(s.b & t.b, s.a | t.a),
        Separation(s.b | t.b, s.a & t.a),
    )


def sort_separations(seps: Iterable[Separation]) -> list[Separation]:
    return sorted(seps, key=Separation.key)


def separations_with_separator(g: Graph, x: int) -> list[Separation]:
    """All separations whose separator is exactly ``x``.

    The sides outside ``x`` are unions of components of ``g - x``, so each
    2-colouring of the components gives one separation.
    """
    comps = components(g, x)
    out = []
    for sides in product((0, 1), repeat=len(comps)):
        a = b = x
        for comp, side in zip(comps, sides):
            if side:
                b |= comp
            else:
                a |= comp
        out.append(Separation(a, b))
    return out


def enumerate_separations(g: Graph, k: int, proper_only: bool = False,
                          exact_order: bool = False) -> frozenset[Separation]:
    """All separations of order < k (of order exactly k-1 if ``exact_order``)."""
    return _enumerate(g, k, bool(proper_only), bool(exact_order))


# results are immutable, so repeated calls (blocks, block profiles, tasks) share them
@lru_cache(maxsize=256)
def _enumerate(g: Graph, k: int, proper_only: bool, exact_order: bool) -> frozenset[Separation]:
    if k <= 0:
        return frozenset()
    out = set()
    sizes = [k - 1] if exact_order else range(k)
    for size in sizes:
        if size > g.n:
            continue
        for xs in combinations(range(g.n), size):
            for s in separations_with_separator(g, mask_of(xs)):
                if not proper_only or s.is_proper:
                    out.add(s)
    return frozenset(out)


def separations_to_json(seps: Iterable[Separation], g: Graph | None = None) -> list:
    return [s.to_json(g) for s in sort_separations(seps)]
