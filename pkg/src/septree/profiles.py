"""Consistency, property (P), k-profiles, k-blocks, tangles and orientations."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .errors import InvariantViolation, PreconditionError, ResourceLimitError
from .graph import Graph, bits, members
from .separations import (
    Separation,
    enumerate_separations,
    is_nested_set,
    is_symmetric,
    le,
    nested_with_all,
    sort_separations,
)

DEFAULT_MAX_PAIRS = 20000

BLOCK = "block"
TANGLE = "tangle"
OTHER = "other"
UNCLASSIFIED = "unclassified"


def as_sepset(p) -> frozenset[Separation]:
    if isinstance(p, Profile):
        return p.seps
    if isinstance(p, Orientation):
        return p.choice
    return frozenset(p)


@dataclass(frozen=True)
class Profile:
    """A profile with an optional classification.

    Equality and hashing look at the separations only, so a classified and an
    unclassified copy of the same set compare equal.
    """

    seps: frozenset[Separation]
    kind: str = field(default=UNCLASSIFIED, compare=False)
    block: int | None = field(default=None, compare=False)
    tangle: bool | None = field(default=None, compare=False)

    def __contains__(self, s: Separation) -> bool:
        return s in self.seps

    def __iter__(self) -> Iterator[Separation]:
        return iter(self.seps)

    def __len__(self) -> int:
        return len(self.seps)

    def sort_key(self):
        return tuple(s.key() for s in sort_separations(self.seps))

    def to_json(self, g: Graph | None = None) -> dict:
        doc: dict = {"kind": self.kind}
        if self.block is not None:
            doc["block"] = g.label(self.block) if g is not None else list(members(self.block))
        if self.tangle is not None:
            doc["tangle"] = self.tangle
        doc["separations"] = [s.to_json(g) for s in sort_separations(self.seps)]
        return doc


@dataclass(frozen=True)
class Orientation:
    """``choice`` holds exactly one separation of every inverse pair of ``base``."""

    base: frozenset[Separation]
    choice: frozenset[Separation]

    def __post_init__(self):
        for s in self.base:
            if (s in self.choice) == (s.inverse in self.choice) and s != s.inverse:
                raise PreconditionError(f"orientation must pick exactly one of {s} and its inverse")
        if not self.choice <= self.base:
            raise PreconditionError("orientation picks separations outside its base")

    def __contains__(self, s: Separation) -> bool:
        return s in self.choice

    def __iter__(self) -> Iterator[Separation]:
        return iter(self.choice)

    def __len__(self) -> int:
        return len(self.choice)

    def sort_key(self):
        return tuple(s.key() for s in sort_separations(self.choice))


def is_consistent(p: Iterable[Separation]) -> bool:
    """No (C, D) <= (A, B) in p has its inverse (D, C) in p."""
    p = list(as_sepset(p))
    for x in p:
        for y in p:
            if le(y.inverse, x):
                return False
    return True


def satisfies_P(p: Iterable[Separation]) -> bool:
    """For all (A, B), (C, D) in p, including equal ones, (B∩D, A∪C) is not in p."""
    p = as_sepset(p)
    for x in p:
        for y in p:
            if Separation(x.b & y.b, x.a | y.a) in p:
                return False
    return True


def is_profile(p) -> bool:
    return is_consistent(p) and satisfies_P(p)


def is_k_profile(p, k: int, g: Graph) -> bool:
    p = as_sepset(p)
    if any(s.order >= k for s in p):
        return False
    for s in enumerate_separations(g, k):
        if (s in p) == (s.inverse in p):
            return False
    return is_consistent(p) and satisfies_P(p)


def distinguishes(s: Separation, p, q) -> bool:
    p = as_sepset(p)
    q = as_sepset(q)
    t = s.inverse
    fwd = s in p and s not in q and t in q and t not in p
    bwd = s in q and s not in p and t in p and t not in q
    return fwd or bwd


def separates_set(s: Separation, x: int) -> bool:
    return bool(x & s.a & ~s.b) and bool(x & s.b & ~s.a)


def compute_blocks(g: Graph, seps: Iterable[Separation]) -> list[tuple[int, bool]]:
    """Maximal S-inseparable vertex sets, each flagged large or not.

    Starting from ``{V}``, every separation splits the members it separates
    into their intersections with both sides.  Each S-inseparable set stays
    inside some member, so at the fixpoint the maximal members are the blocks.
    """
    seps = [s for s in seps if s.is_proper]
    family = {g.full} if g.n else set()
    changed = True
    while changed:
        changed = False
        for s in seps:
            nxt = set()
            for x in family:
                if separates_set(s, x):
                    nxt.add(x & s.a)
                    nxt.add(x & s.b)
                    changed = True
                else:
                    nxt.add(x)
            family = _maximal_sets(nxt)
    out = []
    for x in family:
        large = not any(not (x & ~s.separator) for s in seps)
        out.append((x, large))
    return sorted(out, key=lambda item: members(item[0]))


def _maximal_sets(family: set[int]) -> set[int]:
    ordered = sorted(family, key=int.bit_count, reverse=True)
    kept: list[int] = []
    for x in ordered:
        if not any(not (x & ~y) for y in kept):
            kept.append(x)
    return set(kept)


def k_blocks(g: Graph, k: int) -> list[int]:
    """All k-blocks: maximal (<k)-inseparable sets of at least k vertices."""
    if k < 1:
        raise PreconditionError("k-blocks need k >= 1")
    seps = enumerate_separations(g, k, proper_only=True)
    return [x for x, _ in compute_blocks(g, seps) if x.bit_count() >= k]


def block_profile(g: Graph, b: int, k: int, check: bool = True) -> Profile:
    """P_k(b): every separation of order < k with b inside its second side."""
    if check and b not in k_blocks(g, k):
        raise PreconditionError(f"{g.label(b)} is not a {k}-block")
    seps = frozenset(s for s in enumerate_separations(g, k) if not (b & ~s.b))
    return Profile(seps, BLOCK, b)


def _edge_masks(g: Graph) -> tuple[list[tuple[int, int]], int]:
    edges = g.edges
    return edges, (1 << len(edges)) - 1


def _induced_edge_mask(edges: list[tuple[int, int]], a: int) -> int:
    m = 0
    for i, (u, v) in enumerate(edges):
        if a >> u & 1 and a >> v & 1:
            m |= 1 << i
    return m


def is_tangle(p, k: int, g: Graph, check: bool = True) -> bool:
    """No three small sides of p (repetition allowed) cover all of G.

    Covering is monotone in the small side, so only the inclusion-maximal
    first sides need to be tried.
    """
    p = as_sepset(p)
    if check and not is_k_profile(p, k, g):
        raise PreconditionError(f"is_tangle requires a {k}-profile")
    sides = _maximal_sets({s.a for s in p})
    edges, all_edges = _edge_masks(g)
    cand = sorted(((a, _induced_edge_mask(edges, a)) for a in sides),
                  key=lambda t: (-t[0].bit_count(), members(t[0])))
    sizes = [a.bit_count() for a, _ in cand]
    n = g.n
    for i in range(len(cand)):
        a1, e1 = cand[i]
        if 3 * sizes[i] < n:
            break
        for j in range(i, len(cand)):
            if sizes[i] + 2 * sizes[j] < n:
                break
            a2, e2 = cand[j]
            v12, e12 = a1 | a2, e1 | e2
            for l in range(j, len(cand)):
                if sizes[i] + sizes[j] + sizes[l] < n:
                    break
                a3, e3 = cand[l]
                if v12 | a3 == g.full and e12 | e3 == all_edges:
                    return False
    return True


def enumerate_k_profiles(g: Graph, k: int, max_pairs: int = DEFAULT_MAX_PAIRS,
                         time_budget: float | None = None, classify: bool = True) -> list[Profile]:
    """Every k-profile of g, found by propagating backtracking search.

    Every k-profile contains all (X, V) with |X| < k, so only the proper
    inverse pairs are branched on.  A k-profile is closed downward under <=,
    and by (P) plus (5) it contains (A∪C, B∩D) whenever (A, B), (C, D) are
    members and that corner has order < k; both rules are propagated.
    """
    if k < 1:
        raise PreconditionError("k-profiles need k >= 1")
    deadline = None if time_budget is None else time.monotonic() + time_budget
    all_seps = enumerate_separations(g, k)
    proper = sort_separations(s for s in all_seps if s.is_proper)
    if len(proper) // 2 > max_pairs:
        raise ResourceLimitError(f"{len(proper) // 2} separation pairs exceed the limit of {max_pairs}")
    improper = frozenset(s for s in all_seps if not s.is_proper and s.b == g.full)
    if any(s.a == g.full for s in improper):
        # n < k: (V, V) would have to be oriented, which no consistent set can do
        return []
    m = len(proper)
    index = {s: i for i, s in enumerate(proper)}
    inv = [index[s.inverse] for s in proper]
    below: list[int] = [0] * m
    by_b: dict[int, list[int]] = {}
    for i, s in enumerate(proper):
        by_b.setdefault(s.b, []).append(i)
    for i, s in enumerate(proper):
        mask = 0
        for j, t in enumerate(proper):
            if i != j and le(t, s):
                mask |= 1 << j
        below[i] = mask
    a_of = [s.a for s in proper]
    b_of = [s.b for s in proper]
    full = g.full
    # a proper (A, B) with |B| < k forces (V, B) into the profile via (P)
    # with (B \ A, V), which (4) forbids
    impossible = 0
    for i in range(m):
        if b_of[i].bit_count() < k:
            impossible |= 1 << i

    def propagate(chosen: int, todo: list[int]) -> int | None:
        while todo:
            i = todo.pop()
            if chosen >> i & 1:
                continue
            if chosen >> inv[i] & 1 or impossible >> i & 1:
                return None
            chosen |= 1 << i
            forced = below[i] & ~chosen
            ai, bi = a_of[i], b_of[i]
            for j in bits(chosen):
                a = ai | a_of[j]
                b = bi & b_of[j]
                if (a & b).bit_count() >= k:
                    continue
                if b == full:
                    continue
                if a == full:
                    return None
                forced |= 1 << index[Separation(a, b)]
            for j in by_b[bi]:
                if not (ai & ~a_of[j]):
                    forced |= 1 << j
            forced &= ~chosen
            if any(chosen >> inv[j] & 1 for j in bits(forced)):
                return None
            todo.extend(bits(forced))
        return chosen

    results: list[int] = []
    pair_reps = sorted((i for i in range(m) if i < inv[i]), key=lambda i: (proper[i].order, i))

    def search(chosen: int) -> None:
        if deadline is not None and time.monotonic() > deadline:
            raise ResourceLimitError("profile enumeration exceeded its time budget")
        for i in pair_reps:
            if not (chosen >> i & 1 or chosen >> inv[i] & 1):
                break
        else:
            results.append(chosen)
            return
        for choice in (i, inv[i]):
            nxt = propagate(chosen, [choice])
            if nxt is not None:
                search(nxt)

    start = propagate(0, [])
    if start is not None:
        search(start)
    profiles = []
    for chosen in results:
        seps = improper | frozenset(proper[i] for i in bits(chosen))
        profiles.append(Profile(seps))
    if classify:
        profiles = classify_profiles(g, k, profiles)
    return sorted(profiles, key=Profile.sort_key)


def classify_profiles(g: Graph, k: int, profiles: Iterable[Profile]) -> list[Profile]:
    """Tag block profiles with their block; tag every profile with its tangle flag."""
    by_seps = {}
    for b in k_blocks(g, k):
        by_seps[block_profile(g, b, k, check=False).seps] = b
    out = []
    for p in profiles:
        tangle = is_tangle(p, k, g, check=False)
        b = by_seps.get(p.seps)
        if b is not None:
            out.append(Profile(p.seps, BLOCK, b, tangle))
        else:
            out.append(Profile(p.seps, TANGLE if tangle else OTHER, None, tangle))
    return out


def orientation_of(p, seps: Iterable[Separation]) -> Orientation:
    """The orientation P ∩ S of S induced by p."""
    p = as_sepset(p)
    seps = frozenset(seps)
    for s in sort_separations(seps):
        if s not in p and s.inverse not in p:
            raise PreconditionError(f"separation {s.to_json()} is not oriented")
        if s not in p and s.inverse not in seps:
            raise PreconditionError(f"inverse of {s.to_json()} is chosen but missing from S")
    return Orientation(seps, p & seps)


def orients(p, seps: Iterable[Separation]) -> bool:
    p = as_sepset(p)
    return all(s in p or (s.inverse in p and s.inverse in seps) for s in seps)


def orients_towards(o: Orientation, g: Graph) -> int:
    x = g.full
    for s in o.choice:
        x &= s.b
    return x


def splits(s: Separation, o) -> bool:
    c = as_sepset(o)
    return is_consistent(c | {s}) and is_consistent(c | {s.inverse})


def split_orientation(s: Separation, nested: Iterable[Separation], check: bool = True) -> Orientation:
    """The unique consistent orientation of a nested system split by s.

    It is the set of members of the system lying below s or below its inverse.
    """
    nested = frozenset(nested)
    if check:
        if not is_symmetric(nested) or not is_nested_set(nested):
            raise PreconditionError("split_orientation needs a nested symmetric system")
        if not s.is_proper:
            raise PreconditionError("only proper separations split orientations")
        if s in nested:
            raise PreconditionError("separation already belongs to the system")
        if not nested_with_all(s, nested):
            raise PreconditionError("separation crosses the system")
    t = s.inverse
    choice = frozenset(c for c in nested if le(c, s) or le(c, t))
    o = Orientation(nested, choice)
    if check and not (is_consistent(choice) and splits(s, choice)):
        raise InvariantViolation("split orientation is not consistent or not split")
    return o


def greedy_consistent_orientation(seps: Iterable[Separation]) -> Orientation:
    """Greedy down-closed orientation, picking the least unoriented pair first."""
    seps = frozenset(seps)
    if not is_symmetric(seps):
        raise PreconditionError("greedy orientation needs a symmetric system")
    # (V, V) is its own inverse and no consistent set can hold it
    if any(s.a == s.b for s in seps):
        raise PreconditionError("the system contains (V, V), which has no consistent orientation")
    chosen: set[Separation] = set()
    for s in sort_separations(x for x in seps if x.is_proper):
        if s in chosen or s.inverse in chosen:
            continue
        chosen.add(s)
        chosen.update(t for t in seps if le(t, s))
    # improper members: keep the (A, V) side, i.e. the one with the larger B
    for s in seps:
        if not s.is_proper and s not in chosen and s.inverse not in chosen:
            keep = s if not (s.inverse.b & ~s.b) else s.inverse
            chosen.add(keep)
    return Orientation(seps, frozenset(chosen))


def all_orientations(seps: Iterable[Separation]) -> Iterator[frozenset[Separation]]:
    """Every orientation of a symmetric set (brute force; desk scale only)."""
    reps = [s for s in sort_separations(seps) if s.key() <= s.inverse.key()]
    for picks in range(1 << len(reps)):
        yield frozenset(s if picks >> i & 1 else s.inverse for i, s in enumerate(reps))
