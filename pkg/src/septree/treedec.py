"""Tree-decompositions induced by nested proper separation systems.

The decomposition tree has one node per consistent orientation of N, with
part equal to the intersection of the second sides of its separations; two
nodes are adjacent when their orientations differ in exactly one inverse
pair.  The construction checks its own output against the tree-decomposition
axioms and against the block/hub structure promised for such decompositions.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import InvariantViolation, PreconditionError
from .graph import Graph, members, permute_mask
from .profiles import Orientation, compute_blocks
from .separations import Separation, is_nested_set, is_symmetric
from .strategy import consistent_orientations


@dataclass(frozen=True)
class TreeDecomposition:
    parts: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]
    orientations: tuple[Orientation, ...] | None = None

    def __len__(self) -> int:
        return len(self.parts)

    def neighbours(self, t: int) -> list[int]:
        return [v if u == t else u for u, v in self.edges if t in (u, v)]

    def to_json(self, g: Graph | None = None) -> dict:
        label = g.label if g is not None else lambda m: list(members(m))
        return {
            "nodes": [{"id": i, "part": label(p)} for i, p in enumerate(self.parts)],
            "edges": [{"u": u, "v": v, "adhesion": label(self.parts[u] & self.parts[v])}
                      for u, v in self.edges],
        }

    @classmethod
    def from_json(cls, doc: dict, g: Graph) -> "TreeDecomposition":
        try:
            nodes = sorted(doc["nodes"], key=lambda nd: nd["id"])
            ids = [nd["id"] for nd in nodes]
            if ids != list(range(len(nodes))):
                raise PreconditionError("node ids must be 0..len(nodes)-1")
            parts = tuple(_mask_from_labels(g, nd["part"]) for nd in nodes)
            edges = tuple(sorted((min(e["u"], e["v"]), max(e["u"], e["v"])) for e in doc["edges"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise PreconditionError(f"malformed decomposition document: {exc}") from None
        for u, v in edges:
            if not (0 <= u < len(parts) and 0 <= v < len(parts)):
                raise PreconditionError(f"edge ({u}, {v}) refers to a missing node")
        return cls(parts, edges)


def _mask_from_labels(g: Graph, labels) -> int:
    m = 0
    for x in labels:
        if isinstance(x, int) and not isinstance(x, bool):
            v = x
        else:
            v = g.vertex(str(x))
        m |= 1 << v
    return m


def _tree_components(td: TreeDecomposition, cut: tuple[int, int] | None = None) -> list[set[int]]:
    adj: dict[int, list[int]] = {t: [] for t in range(len(td))}
    for e in td.edges:
        if e == cut:
            continue
        u, v = e
        adj[u].append(v)
        adj[v].append(u)
    seen: set[int] = set()
    comps = []
    for root in range(len(td)):
        if root in seen:
            continue
        comp = {root}
        stack = [root]
        while stack:
            t = stack.pop()
            for u in adj[t]:
                if u not in comp:
                    comp.add(u)
                    stack.append(u)
        seen |= comp
        comps.append(comp)
    return comps


def is_tree(td: TreeDecomposition) -> bool:
    if len(td) == 0:
        return False
    if len(set(td.edges)) != len(td.edges) or any(u == v for u, v in td.edges):
        return False
    return len(td.edges) == len(td) - 1 and len(_tree_components(td)) == 1


def edge_separation(td: TreeDecomposition, edge: tuple[int, int]) -> Separation:
    """Separation induced by the edge oriented from ``edge[0]`` to ``edge[1]``."""
    u, v = edge
    key = (min(u, v), max(u, v))
    side_u = side_v = 0
    for comp in _tree_components(td, cut=key):
        union = 0
        for t in comp:
            union |= td.parts[t]
        if u in comp:
            side_u = union
        if v in comp:
            side_v = union
    return Separation(side_u, side_v)


def induced_separations(td: TreeDecomposition, g: Graph | None = None) -> frozenset[Separation]:
    out = set()
    for u, v in td.edges:
        out.add(edge_separation(td, (u, v)))
        out.add(edge_separation(td, (v, u)))
    return frozenset(out)


def adhesion(td: TreeDecomposition) -> int:
    return max(((td.parts[u] & td.parts[v]).bit_count() for u, v in td.edges), default=0)


def hub_nodes(td: TreeDecomposition) -> list[int]:
    """Nodes whose part is the separator of a separation induced at that node."""
    hubs = []
    for t in range(len(td)):
        for u in td.neighbours(t):
            if edge_separation(td, (t, u)).separator == td.parts[t]:
                hubs.append(t)
                break
    return hubs


def verify(td: TreeDecomposition, g: Graph, nested: Iterable[Separation] | None = None) -> dict[str, bool]:
    """Per-axiom pass/fail report; the T-axioms are only meaningful on a tree."""
    report: dict[str, bool] = {"tree": is_tree(td)}
    union = 0
    for p in td.parts:
        union |= p
    report["T1"] = union == g.full
    report["T2"] = all(any(p >> u & 1 and p >> v & 1 for p in td.parts) for u, v in g.edges)
    t3 = report["tree"]
    if t3:
        for v in range(g.n):
            holders = {t for t, p in enumerate(td.parts) if p >> v & 1}
            if len(holders) > 1:
                sub = TreeDecomposition(
                    td.parts,
                    tuple(e for e in td.edges if e[0] in holders and e[1] in holders),
                )
                comps = [c for c in _tree_components(sub) if c & holders]
                if len(comps) != 1:
                    t3 = False
                    break
    report["T3"] = t3
    if nested is not None:
        report["induced"] = report["tree"] and induced_separations(td) == frozenset(nested)
    return report


def build_from_nested(nested: Iterable[Separation], g: Graph) -> TreeDecomposition:
    """Tree-decomposition whose edges induce exactly the given nested system."""
    nested = frozenset(nested)
    if not is_symmetric(nested):
        raise PreconditionError("build_from_nested needs a symmetric system")
    if any(not s.is_proper for s in nested):
        raise PreconditionError("build_from_nested needs proper separations")
    if not is_nested_set(nested):
        raise PreconditionError("build_from_nested needs a nested system")
    nodes = consistent_orientations(nested)
    index = {o.choice: i for i, o in enumerate(nodes)}
    parts = []
    for o in nodes:
        x = g.full
        for s in o.choice:
            x &= s.b
        parts.append(x)
    edges = set()
    for i, o in enumerate(nodes):
        for s in o.choice:
            j = index.get((o.choice - {s}) | {s.inverse})
            if j is not None:
                edges.add((min(i, j), max(i, j)))
    td = TreeDecomposition(tuple(parts), tuple(sorted(edges)), tuple(nodes))
    _check_structure(td, g, nested)
    return td


def _check_structure(td: TreeDecomposition, g: Graph, nested: frozenset[Separation]) -> None:
    report = verify(td, g, nested)
    failed = [name for name, ok in report.items() if not ok]
    if failed:
        raise InvariantViolation(f"decomposition fails {', '.join(failed)}")
    blocks = [x for x, _ in compute_blocks(g, nested)]
    parts = set(td.parts)
    for x in blocks:
        if x not in parts:
            raise InvariantViolation(f"N-block {g.label(x)} is not a part")
    hubs = {td.parts[t] for t in hub_nodes(td)}
    for p in parts:
        if p not in blocks and p not in hubs:
            raise InvariantViolation(f"part {g.label(p)} is neither an N-block nor a hub")


def node_map(td: TreeDecomposition, perm: Sequence[int]) -> list[int]:
    """Tree automorphism induced by a graph automorphism.

    Raises if the permuted orientations are not nodes or if edges or parts are
    not carried to edges and parts.
    """
    if td.orientations is None:
        raise PreconditionError("node_map needs a decomposition built from orientations")
    index = {o.choice: i for i, o in enumerate(td.orientations)}
    image = []
    for o in td.orientations:
        moved = frozenset(s.permuted(perm) for s in o.choice)
        if moved not in index:
            raise InvariantViolation("automorphism does not map nodes to nodes")
        image.append(index[moved])
    edges = set(td.edges)
    for u, v in td.edges:
        a, b = image[u], image[v]
        if (min(a, b), max(a, b)) not in edges:
            raise InvariantViolation("automorphism does not map tree edges to tree edges")
    for t, p in enumerate(td.parts):
        if td.parts[image[t]] != permute_mask(p, perm):
            raise InvariantViolation("automorphism does not map parts to parts")
    return image


def to_dot(td: TreeDecomposition, g: Graph) -> str:
    lines = ["graph decomposition {"]
    for i, p in enumerate(td.parts):
        label = ",".join(g.label(p))
        lines.append(f'  n{i} [label="{label}"];')
    for u, v in td.edges:
        label = ",".join(g.label(td.parts[u] & td.parts[v]))
        lines.append(f'  n{u} -- n{v} [label="{label}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def sorted_parts(td: TreeDecomposition) -> list[tuple[int, ...]]:
    return sorted(members(p) for p in td.parts)
