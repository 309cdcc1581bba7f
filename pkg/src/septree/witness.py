"""Search for graphs on which the Ext, Loc and All strategies disagree badly.

Different strategies need not produce systems that are nested with each
other.  The search looks at 3-connected "capped ladders" (a 3 x m grid whose
end columns are closed off into K4's, plus random diagonal edges), takes S to
be all proper separations of order 3 and P the 4-block profiles, and reports
the first graph on which two of the three outputs contain a crossing pair.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from itertools import combinations

from .graph import Graph, is_l_connected
from .profiles import block_profile, k_blocks
from .separations import Separation, crosses, enumerate_separations, sort_separations
from .strategy import ALL, EXT, LOC, check_task, is_feasible, run_strategy

STRATEGIES = (("Ext", EXT), ("Loc", LOC), ("All", ALL))


@dataclass(frozen=True)
class Witness:
    graph: Graph
    systems: dict[str, frozenset[Separation]]
    crossings: tuple[tuple[str, str, Separation, Separation], ...]
    attempts: int

    def to_json(self) -> dict:
        g = self.graph
        return {
            "graph": g.to_json(),
            "k": 4,
            "systems": {name: [s.to_json(g) for s in sort_separations(n)] for name, n in self.systems.items()},
            "crossings": [{"systems": [a, b], "first": s.to_json(g), "second": t.to_json(g)}
                          for a, b, s, t in self.crossings],
            "attempts": self.attempts,
        }


def capped_ladder(m: int, extra: list[tuple[int, int]]) -> Graph:
    """3 x m grid, each end column made a triangle plus an apex, plus ``extra``."""
    idx = lambda r, c: r * m + c
    n = 3 * m
    edges = set()
    for r in range(3):
        for c in range(m):
            if c + 1 < m:
                edges.add((idx(r, c), idx(r, c + 1)))
            if r + 1 < 3:
                edges.add((idx(r, c), idx(r + 1, c)))
    for c in (0, m - 1):
        col = [idx(r, c) for r in range(3)]
        edges.update(combinations(col, 2))
        edges.update((v, n) for v in col)
        n += 1
    for u, v in extra:
        edges.add((min(u, v), max(u, v)))
    return Graph.from_edges(n, sorted(edges))


def random_capped_ladder(rng: random.Random, m_lo: int = 4, m_hi: int = 8) -> Graph:
    m = rng.randint(m_lo, m_hi)
    extra = []
    for _ in range(rng.randint(0, 2 * m)):
        r, c = rng.randrange(3), rng.randrange(m - 1)
        if rng.random() < 0.5:
            extra.append((r * m + c, ((r + rng.choice((1, 2))) % 3) * m + c + 1))
        else:
            extra.append((r * m + c, ((r + 1) % 3) * m + c))
    return capped_ladder(m, [e for e in extra if e[0] != e[1]])


def crossing_pairs(systems: dict[str, frozenset[Separation]]):
    out = []
    for a, b in combinations(systems, 2):
        for s in sort_separations(systems[a]):
            for t in sort_separations(systems[b]):
                if crosses(s, t):
                    out.append((a, b, s, t))
    return out


def strategy_systems(g: Graph, check: bool = True) -> dict[str, frozenset[Separation]] | None:
    """N_Ext, N_Loc, N_All on (proper 3-separations, 4-block profiles), or None if unusable."""
    if not is_l_connected(g, 3):
        return None
    blocks = k_blocks(g, 4)
    if len(blocks) < 3:
        return None
    profiles = [block_profile(g, b, 4, check=False) for b in blocks]
    t = check_task(enumerate_separations(g, 4, proper_only=True), profiles)
    if not is_feasible(t):
        return None
    return {name: run_strategy(sigma, t, check=check) for name, sigma in STRATEGIES}


def find_crossing_witness(seed: int = 1, max_attempts: int = 2000,
                          time_budget: float | None = None) -> Witness | None:
    rng = random.Random(seed)
    deadline = None if time_budget is None else time.monotonic() + time_budget
    for attempt in range(1, max_attempts + 1):
        if deadline is not None and time.monotonic() > deadline:
            break
        g = random_capped_ladder(rng)
        systems = strategy_systems(g, check=False)
        if systems is None:
            continue
        found = crossing_pairs(systems)
        if found:
            # rerun with every postcondition asserted before reporting
            systems = strategy_systems(g, check=True)
            return Witness(g, systems, tuple(crossing_pairs(systems)), attempt)
    return None
