"""Tasks, the ext/loc/all selectors, subtask partitions and the strategy recursions.

A task pairs a proper separation system ``seps`` with a set of profiles that
all orient it and are pairwise distinguished by it.  Strategies pick nested
subsystems step by step; k-strategies run one strategy per separation order.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Iterator

from .errors import InvariantViolation, PreconditionError
from .graph import Graph
from .profiles import (
    Orientation,
    Profile,
    as_sepset,
    distinguishes,
    greedy_consistent_orientation,
    is_k_profile,
    orients,
    split_orientation,
)
from .separations import (
    Separation,
    crosses,
    enumerate_separations,
    is_nested_set,
    is_symmetric,
    le,
    nested_with_all,
    sort_separations,
    symmetrize,
)

SELECTORS = ("ext", "loc", "all", "ext_r", "loc_r", "all_r")
REDUCED = frozenset({"ext_r", "loc_r", "all_r"})


def _fmt(s: Separation) -> str:
    return repr(s.to_json())


@dataclass(frozen=True)
class Task:
    seps: frozenset[Separation]
    profiles: frozenset[frozenset[Separation]]

    def sorted_profiles(self) -> list[frozenset[Separation]]:
        return sorted(self.profiles, key=lambda p: tuple(s.key() for s in sort_separations(p)))


def _profile_set(profiles: Iterable) -> frozenset[frozenset[Separation]]:
    return frozenset(as_sepset(p) for p in profiles)


def check_task(seps: Iterable[Separation], profiles: Iterable) -> Task:
    """Validate that every profile orients ``seps`` and ``seps`` distinguishes them."""
    seps = frozenset(seps)
    profiles = _profile_set(profiles)
    if not is_symmetric(seps):
        raise PreconditionError("a task needs a symmetric separation system")
    if any(not s.is_proper for s in seps):
        raise PreconditionError("a task needs proper separations only")
    ordered = sorted(profiles, key=lambda p: tuple(s.key() for s in sort_separations(p)))
    for i, p in enumerate(ordered):
        for s in sort_separations(seps):
            if (s in p) == (s.inverse in p):
                raise PreconditionError(f"profile #{i} does not orient {_fmt(s)}")
    for i, j in combinations(range(len(ordered)), 2):
        p, q = ordered[i], ordered[j]
        if not any(s in p and s.inverse in q for s in seps):
            raise PreconditionError(f"profiles #{i} and #{j} are not distinguished by the system")
    return Task(seps, profiles)


def is_feasible(t: Task) -> bool:
    """Crossing pairs oriented oppositely by two profiles have a corner witness.

    For crossing (A, B), (C, D) lying in a profile P whose inverses both lie in
    some profile P', some (E, F) in P ∩ S must lie above (A∪C, B∩D).
    """
    # A profile never holds both s and its inverse, so only separations
    # distinguishing an ordered pair (P, P') can be involved.
    profiles = sorted(t.profiles, key=lambda p: sorted(s.key() for s in p))
    for p in profiles:
        above = None
        for q in profiles:
            if p is q:
                continue
            split = sort_separations(s for s in p & t.seps if s.inverse in q)
            for x, y in combinations(split, 2):
                if not crosses(x, y):
                    continue
                if above is None:
                    above = list(p & t.seps)
                corner = Separation(x.a | y.a, x.b & y.b)
                if not any(le(corner, e) for e in above):
                    return False
    return True


def relevant(t: Task) -> frozenset[Separation]:
    """Members of S distinguishing some pair of the task's profiles."""
    out = set()
    profiles = list(t.profiles)
    for s in t.seps:
        if s in out:
            continue
        hit_fwd = any(s in p for p in profiles)
        hit_bwd = any(s.inverse in p for p in profiles)
        if hit_fwd and hit_bwd:
            out.add(s)
            out.add(s.inverse)
    return frozenset(out)


def reduce(t: Task) -> Task:
    return Task(relevant(t), t.profiles)


def is_extremal(s: Separation, seps: Iterable[Separation]) -> bool:
    return all(le(c, s) or le(c.inverse, s) for c in seps)


def extremal_set(t: Task) -> frozenset[Separation]:
    """Extremal separations of S together with their inverses."""
    return symmetrize(s for s in t.seps if is_extremal(s, t.seps))


def maximal_elements(seps: Iterable[Separation]) -> list[Separation]:
    seps = list(seps)
    return [s for s in seps if not any(t != s and le(s, t) for t in seps)]


def is_well_separated(p, seps: Iterable[Separation]) -> bool:
    """The maximal members of P ∩ S are pairwise nested."""
    return is_nested_set(maximal_elements(as_sepset(p) & frozenset(seps)))


def maximal_nested_with_all(p, seps: Iterable[Separation]) -> bool:
    seps = frozenset(seps)
    return all(nested_with_all(m, seps) for m in maximal_elements(as_sepset(p) & seps))


def crossing_pairs_have_upper_bound(p, seps: Iterable[Separation]) -> bool:
    inside = as_sepset(p) & frozenset(seps)
    for x, y in combinations(sort_separations(inside), 2):
        if crosses(x, y):
            corner = Separation(x.a | y.a, x.b & y.b)
            if not any(le(corner, e) for e in inside):
                return False
    return True


def loc_set(t: Task) -> frozenset[Separation]:
    """Maximal members of P ∩ S over well-separated P, closed under inverse."""
    picked = set()
    for p in t.profiles:
        inside = p & t.seps
        tops = maximal_elements(inside)
        if is_nested_set(tops):
            picked.update(tops)
    out = symmetrize(picked)
    for s in out:
        if not nested_with_all(s, t.seps):
            raise InvariantViolation(f"locally maximal {_fmt(s)} crosses the system")
    return out


def all_set(t: Task) -> frozenset[Separation]:
    return frozenset(s for s in t.seps if nested_with_all(s, t.seps))


_SELECT = {"ext": extremal_set, "loc": loc_set, "all": all_set}


def select(name: str, t: Task) -> frozenset[Separation]:
    """Apply one of the six selectors; the ``_r`` forms reduce the task first."""
    if name not in SELECTORS:
        raise PreconditionError(f"unknown selector {name!r}")
    if name in REDUCED:
        return _SELECT[name[:-2]](reduce(t))
    return _SELECT[name](t)


def _maximal_in(choice: frozenset[Separation]) -> list[Separation]:
    return [s for s in choice if not any(t != s and le(s, t) for t in choice)]


def consistent_orientations(nested: Iterable[Separation]) -> list[Orientation]:
    """All consistent orientations of a nested proper system.

    Flipping a maximal member of a consistent orientation yields another one,
    and two consistent orientations differing in a single pair are always
    related by such a flip.  Breadth-first flipping from the greedy
    orientation therefore reaches all of them; the flip graph must be a tree.
    """
    nested = frozenset(nested)
    if not is_symmetric(nested):
        raise PreconditionError("consistent_orientations needs a symmetric system")
    if any(not s.is_proper for s in nested):
        raise PreconditionError("consistent_orientations needs proper separations")
    if not is_nested_set(nested):
        raise PreconditionError("consistent_orientations needs a nested system")
    start = greedy_consistent_orientation(nested).choice
    seen = {start}
    edges = set()
    queue = deque([start])
    while queue:
        o = queue.popleft()
        for m in _maximal_in(o):
            flipped = (o - {m}) | {m.inverse}
            edges.add(frozenset((o, flipped)))
            if flipped not in seen:
                seen.add(flipped)
                queue.append(flipped)
    if len(edges) != len(seen) - 1:
        raise InvariantViolation("flip graph of consistent orientations is not a tree")
    out = [Orientation(nested, c) for c in seen]
    return sorted(out, key=Orientation.sort_key)


@dataclass(frozen=True)
class SubtaskPartition:
    """Subtasks (S_O, P_O) indexed by the consistent orientations O of N."""

    nested: frozenset[Separation]
    parts: tuple[tuple[Orientation, Task], ...]

    def __iter__(self) -> Iterator[tuple[Orientation, Task]]:
        return iter(self.parts)

    def __len__(self) -> int:
        return len(self.parts)

    def __getitem__(self, o: Orientation) -> Task:
        for key, t in self.parts:
            if key == o:
                return t
        raise KeyError(o)


def partition_subtasks(t: Task, nested: Iterable[Separation], check: bool = True) -> SubtaskPartition:
    """Split (S, P) along the consistent orientations of a nested system N.

    N need not be a subset of S, but must be nested with it and oriented by
    every profile.  S_O collects the members of S minus N splitting O, and P_O
    the profiles whose trace on N is O.
    """
    nested = frozenset(nested)
    orientations = consistent_orientations(nested)
    for p in t.profiles:
        if not orients(p, nested):
            raise PreconditionError("some profile does not orient N")
    rest = t.seps - nested
    if check:
        for s in sort_separations(rest):
            if not nested_with_all(s, nested):
                raise PreconditionError(f"{_fmt(s)} crosses N")
    seps_by: dict[frozenset, set] = {o.choice: set() for o in orientations}
    profiles_by: dict[frozenset, set] = {o.choice: set() for o in orientations}
    for s in rest:
        key = split_orientation(s, nested, check=False).choice
        if key not in seps_by:
            raise InvariantViolation(f"{_fmt(s)} splits an inconsistent orientation of N")
        seps_by[key].add(s)
    for p in t.profiles:
        key = p & nested
        if key not in profiles_by:
            raise InvariantViolation("a profile induces an inconsistent orientation of N")
        profiles_by[key].add(p)
    parts = []
    for o in orientations:
        parts.append((o, Task(frozenset(seps_by[o.choice]), frozenset(profiles_by[o.choice]))))
    return SubtaskPartition(nested, tuple(parts))


@dataclass(frozen=True)
class Strategy:
    """Selector schedule: ``prefix`` once, then ``cycle`` repeated forever."""

    prefix: tuple[str, ...]
    cycle: tuple[str, ...]

    def __post_init__(self):
        for name in self.prefix + self.cycle:
            if name not in SELECTORS:
                raise PreconditionError(f"unknown selector {name!r}")
        if not self.cycle:
            raise PreconditionError("a strategy needs a non-empty cycle")
        if not any(name in REDUCED for name in self.cycle):
            raise PreconditionError("the cycle must contain a reduced selector")

    @classmethod
    def parse(cls, text: str) -> "Strategy":
        if "|" not in text:
            raise PreconditionError(f"strategy {text!r} lacks the 'prefix|cycle' bar")
        pre, cyc = text.split("|", 1)
        split = lambda part: tuple(x.strip() for x in part.split(",") if x.strip())
        return cls(split(pre), split(cyc))

    def __str__(self) -> str:
        return ",".join(self.prefix) + "|" + ",".join(self.cycle)

    def __getitem__(self, i: int) -> str:
        if i < len(self.prefix):
            return self.prefix[i]
        return self.cycle[(i - len(self.prefix)) % len(self.cycle)]

    @property
    def head(self) -> str:
        return self[0]

    @property
    def tail(self) -> "Strategy":
        if self.prefix:
            return Strategy(self.prefix[1:], self.cycle)
        return Strategy((), self.cycle[1:] + self.cycle[:1])

    @property
    def reduced_index(self) -> int:
        i = 0
        while self[i] not in REDUCED:
            i += 1
        return i


EXT = Strategy((), ("ext_r",))
LOC = Strategy((), ("loc_r",))
ALL = Strategy((), ("all_r",))


@dataclass(frozen=True)
class KStrategy:
    stages: tuple[Strategy, ...]

    def __post_init__(self):
        if not self.stages:
            raise PreconditionError("a k-strategy needs at least one stage")
        for st in self.stages:
            if any(name not in REDUCED for name in st.prefix + st.cycle):
                raise PreconditionError(f"k-strategy stage {st} uses an unreduced selector")

    @classmethod
    def parse(cls, text: str, k: int | None = None) -> "KStrategy":
        """Parse ``s1;s2;...``; a single stage is repeated ``k`` times if k is given."""
        stages = tuple(Strategy.parse(part) for part in text.split(";"))
        if k is not None and len(stages) == 1:
            stages = stages * k
        if k is not None and len(stages) != k:
            raise PreconditionError(f"k-strategy has {len(stages)} stages, expected {k}")
        return cls(stages)

    @property
    def k(self) -> int:
        return len(self.stages)

    def __str__(self) -> str:
        return ";".join(str(s) for s in self.stages)


def distinguishes_all(seps: Iterable[Separation], profiles: Iterable) -> bool:
    seps = list(seps)
    profiles = [as_sepset(p) for p in profiles]
    return all(any(distinguishes(s, p, q) for s in seps) for p, q in combinations(profiles, 2))


def run_strategy(sigma: Strategy, t: Task, check: bool = True) -> frozenset[Separation]:
    """The nested subsystem N_sigma(S, P) of a feasible task."""
    if check and not is_feasible(t):
        raise PreconditionError("run_strategy needs a feasible task")
    out = frozenset(_run(sigma, t, check, None))
    if check:
        if not out <= t.seps:
            raise InvariantViolation("strategy output is not a subset of S")
        if not is_nested_set(out):
            raise InvariantViolation("strategy output is not nested")
        if not distinguishes_all(out, t.profiles):
            raise InvariantViolation("strategy output does not distinguish the profiles")
    return out


def _run(sigma: Strategy, t: Task, check: bool, bound: tuple[int, int] | None) -> set[Separation]:
    size = len(t.seps)
    if size == 0:
        return set()
    measure = (size, sigma.reduced_index)
    if bound is not None and not measure < bound:
        raise InvariantViolation(f"recursion measure {measure} did not drop below {bound}")
    if check and not is_feasible(t):
        raise InvariantViolation("recursion reached an infeasible subtask")
    head = sigma.head
    if head in REDUCED:
        r = reduce(t)
        if r.seps != t.seps:
            return _run(sigma, r, check, measure)
        chosen = _SELECT[head[:-2]](t)
        if not chosen:
            raise InvariantViolation(f"{head} selected nothing on a feasible reduced task")
    else:
        chosen = _SELECT[head](t)
    out = set(chosen)
    for _, sub in partition_subtasks(t, chosen, check=check):
        out |= _run(sigma.tail, sub, check, measure)
    return out


def kappa(p, q, g: Graph | None = None) -> int:
    """Least order of a separation distinguishing two profiles.

    A distinguishing separation lies in one of the two profiles, so scanning
    their members is exhaustive.
    """
    p = as_sepset(p)
    q = as_sepset(q)
    if p == q:
        raise PreconditionError("kappa needs two distinct profiles")
    orders = [s.order for s in p if distinguishes(s, p, q)]
    if not orders:
        raise PreconditionError("the profiles are not distinguished by any separation")
    return min(orders)


def is_essential(s: Separation, profiles: Iterable, g: Graph | None = None) -> bool:
    profiles = [as_sepset(p) for p in profiles]
    for p, q in combinations(profiles, 2):
        if distinguishes(s, p, q) and s.order == kappa(p, q):
            return True
    return False


def induce_profile(p, l: int) -> Profile:
    return Profile(frozenset(s for s in as_sepset(p) if s.order < l))


def _induced(profiles: Iterable[frozenset[Separation]], l: int) -> frozenset[frozenset[Separation]]:
    return frozenset(frozenset(s for s in p if s.order < l) for p in profiles)


def run_k_strategy(sigma: KStrategy, g: Graph, profiles: Iterable, check: bool = True) -> frozenset[Separation]:
    """The nested system N_Sigma distinguishing a set of k-profiles efficiently."""
    k = sigma.k
    profiles = _profile_set(profiles)
    if check:
        for p in profiles:
            if not is_k_profile(p, k, g):
                raise PreconditionError(f"run_k_strategy needs {k}-profiles")
    out = _n_sigma(sigma.stages, g, profiles, check)
    if check:
        verify_efficient(out, g, profiles, k)
    return out


def _n_sigma(stages: tuple[Strategy, ...], g: Graph, profiles: frozenset, check: bool) -> frozenset[Separation]:
    k = len(stages)
    if k == 1:
        seps = enumerate_separations(g, 1, proper_only=True)
        try:
            t = check_task(seps, _induced(profiles, 1))
        except PreconditionError as exc:
            raise InvariantViolation(f"stage 1 is not a task: {exc}") from None
        return run_strategy(stages[0], t, check)
    prev = _n_sigma(stages[:-1], g, _induced(profiles, k - 1), check)
    seps = frozenset(s for s in enumerate_separations(g, k, proper_only=True, exact_order=True)
                     if nested_with_all(s, prev))
    whole = Task(seps, _induced(profiles, k))
    out = set(prev)
    for _, sub in partition_subtasks(whole, prev, check=check):
        try:
            sub = check_task(sub.seps, sub.profiles)
        except PreconditionError as exc:
            raise InvariantViolation(f"stage {k} subtask is not a task: {exc}") from None
        if check and not is_feasible(sub):
            raise InvariantViolation(f"stage {k} subtask is infeasible")
        out |= run_strategy(stages[-1], sub, check)
    return frozenset(out)


def verify_efficient(seps: frozenset[Separation], g: Graph, profiles: Iterable, k: int) -> None:
    """Raise unless ``seps`` is nested, essential, of order < k and efficient."""
    profiles = [as_sepset(p) for p in profiles]
    if not is_nested_set(seps):
        raise InvariantViolation("N_Sigma is not nested")
    if any(s.order >= k or not s.is_proper for s in seps):
        raise InvariantViolation("N_Sigma has a separation of order >= k or an improper one")
    kap = {}
    for i, j in combinations(range(len(profiles)), 2):
        kap[i, j] = kappa(profiles[i], profiles[j])
    for s in seps:
        if not any(distinguishes(s, profiles[i], profiles[j]) and s.order == kap[i, j] for i, j in kap):
            raise InvariantViolation(f"{_fmt(s)} is not essential")
    for (i, j), kv in kap.items():
        if not any(s.order == kv and distinguishes(s, profiles[i], profiles[j]) for s in seps):
            raise InvariantViolation(f"profiles #{i}, #{j} are not distinguished efficiently")
