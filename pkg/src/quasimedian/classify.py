"""Hyperbolicity and relative hyperbolicity of graph products, read off the graph."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .errors import DomainError, InvariantError
from .graph import complement_components, is_square_free
from .words import GraphProduct

FULL_JOIN_CAP = 16

Subset = frozenset[str]


def is_narrow(spec: GraphProduct, vs: Iterable[str]) -> bool:
    """Whether ``vs`` generates a finite subgroup: complete with finite groups."""
    vs = list(vs)
    return spec.graph.is_complete(vs) and all(spec.groups[v].is_finite for v in vs)


def _split(spec: GraphProduct, vs: Subset) -> tuple[Subset, Subset] | None:
    """A join splitting of ``vs`` into two vast sides, if one exists.

    Sides are unions of complement components; such a splitting exists iff at
    least two components are vast, since a union of narrow components is
    narrow.
    """
    comps = complement_components(spec.graph, vs)
    vast = [c for c in comps if not is_narrow(spec, c)]
    if len(vast) < 2:
        return None
    first = vast[0]
    return first, frozenset(vs) - first


def _sorted_subsets(spec: GraphProduct, subsets: Iterable[Subset]) -> list[Subset]:
    idx = spec.graph.index
    return sorted(subsets, key=lambda s: (len(s), sorted(idx[v] for v in s)))


def _closed_sides(spec: GraphProduct) -> set[Subset]:
    """All intersections of vertex links (including the empty intersection)."""
    adj = spec.graph.adjacency
    family = {frozenset(spec.vertices)}
    for v in spec.vertices:
        family |= {a & adj[v] for a in family}
    return family


def _common_neighbours(spec: GraphProduct, vs: Subset) -> Subset:
    out = set(spec.vertices)
    for v in vs:
        out &= spec.graph.adjacency[v]
    return frozenset(out)


def large_joins(spec: GraphProduct, maximal_only: bool = False) -> list[tuple[Subset, Subset]]:
    """Subsets that split as a join of two vast parts, with one such splitting each.

    Full mode scans every subset. Maximal mode only looks at pairs
    ``(common neighbours of Y, Y)`` for ``Y`` an intersection of links, which
    contain every maximal large join, and keeps the inclusion-maximal ones.
    """
    if maximal_only:
        candidates = set()
        for side in _closed_sides(spec):
            other = _common_neighbours(spec, side)
            if side and other and not is_narrow(spec, side) and not is_narrow(spec, other):
                candidates.add(side | other)
        maximal = [s for s in candidates if not any(s < t for t in candidates)]
        return [(*_split(spec, s),) for s in _sorted_subsets(spec, maximal)]
    n = len(spec.vertices)
    if n > FULL_JOIN_CAP:
        raise DomainError(f"full large-join scan is capped at {FULL_JOIN_CAP} vertices; use maximal_only")
    out = []
    for mask in range(1, 2**n):
        vs = frozenset(v for i, v in enumerate(spec.vertices) if mask >> i & 1)
        split = _split(spec, vs)
        if split is not None:
            out.append(split)
    order = {s: i for i, s in enumerate(_sorted_subsets(spec, [a | b for a, b in out]))}
    return sorted(out, key=lambda p: order[p[0] | p[1]])


def cp(spec: GraphProduct, vs: Iterable[str]) -> Subset:
    """Add every vertex whose link meets ``vs`` in a vast subset (applied once)."""
    vs = frozenset(vs)
    adj = spec.graph.adjacency
    return vs | {v for v in spec.vertices if not is_narrow(spec, adj[v] & vs)}


def _step(spec: GraphProduct, family: list[Subset], iterate_cp: bool) -> list[Subset]:
    """Merge members with vast intersections, then close each union under cp."""
    parent = list(range(len(family)))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(len(family)):
        for j in range(i + 1, len(family)):
            if not is_narrow(spec, family[i] & family[j]):
                parent[find(i)] = find(j)
    unions: dict[int, set[str]] = {}
    for i, s in enumerate(family):
        unions.setdefault(find(i), set()).update(s)
    out = set()
    for u in unions.values():
        closed = cp(spec, u)
        while iterate_cp and (nxt := cp(spec, closed)) != closed:
            closed = nxt
        out.add(closed)
    return _sorted_subsets(spec, out)


@dataclass(frozen=True)
class RelHypReport:
    j_sequence: tuple[tuple[Subset, ...], ...]
    j_infinity: tuple[Subset, ...]
    j_final: tuple[Subset, ...]
    is_relatively_hyperbolic: bool
    peripherals: tuple[GraphProduct, ...]


def j_sequence(spec: GraphProduct, maximal_only: bool = False, iterate_cp: bool = False) -> RelHypReport:
    """Iterate the merge-and-close step from the large joins until it stabilizes.

    ``iterate_cp`` closes under cp repeatedly instead of once; it is an
    experimental variant and should not be used for verdicts.
    """
    n = len(spec.vertices)
    if n > FULL_JOIN_CAP:
        raise DomainError(f"relative hyperbolicity check is capped at {FULL_JOIN_CAP} vertices")
    current = _sorted_subsets(spec, {a | b for a, b in large_joins(spec, maximal_only)})
    seq = [tuple(current)]
    steps = 0
    while True:
        nxt = _step(spec, current, iterate_cp)
        seq.append(tuple(nxt))
        if nxt == current:
            break
        steps += 1
        if steps > 2**n:
            raise InvariantError("subgraph sequence did not stabilize")
        current = nxt
    covered = set().union(*current) if current else set()
    final = list(current) + [frozenset([v]) for v in spec.vertices if v not in covered]
    final = _sorted_subsets(spec, final)
    verdict = final != [frozenset(spec.vertices)]
    peripherals = tuple(spec.induced(s) for s in final)
    return RelHypReport(tuple(seq), tuple(current), tuple(final), verdict, peripherals)


@dataclass(frozen=True)
class MeierVerdict:
    verdict: bool
    failed_condition: int | None
    reason: str | None


MEIER_CONDITIONS = {
    1: "vertex groups hyperbolic",
    2: "no two infinite vertex-groups are adjacent",
    3: "vertices adjacent to a common infinite vertex-group are adjacent",
    4: "square-free",
}


def meier(spec: GraphProduct) -> MeierVerdict:
    """Hyperbolicity of the graph product itself; reports the first failing condition."""
    graph = spec.graph
    infinite = [v for v in spec.vertices if not spec.groups[v].is_finite]
    checks = {
        1: all(g.is_hyperbolic for g in spec.groups.values()),
        2: not any(graph.adjacent(a, b) for a in infinite for b in infinite if a != b),
        3: all(graph.is_complete(graph.adjacency[v]) for v in infinite),
        4: is_square_free(graph)[0],
    }
    for k, ok in checks.items():
        if not ok:
            return MeierVerdict(False, k, MEIER_CONDITIONS[k])
    return MeierVerdict(True, None, None)


def x_hyperbolic(spec: GraphProduct) -> bool:
    """Hyperbolicity of the quasi-median Cayley graph."""
    return is_square_free(spec.graph)[0]


def report(spec: GraphProduct, maximal_only: bool = False) -> dict:
    m = meier(spec)
    rel = j_sequence(spec, maximal_only)

    def names(vs: Iterable[str]) -> list[str]:
        return list(spec.graph.sorted(vs))

    return {
        "schema": 1,
        "meier": {"verdict": m.verdict, "failed_condition": m.failed_condition, "reason": m.reason},
        "x_hyperbolic": x_hyperbolic(spec),
        "rel_hyp": {
            "verdict": rel.is_relatively_hyperbolic,
            "j_sequence": [[names(s) for s in step] for step in rel.j_sequence],
            "j_final": [names(s) for s in rel.j_final],
            "peripherals": [
                {
                    "vertices": list(p.vertices),
                    "groups": {v: p.groups[v].descriptor() for v in p.vertices},
                    "edges": sorted(names(e) for e in p.graph.edges),
                }
                for p in rel.peripherals
            ],
        },
    }
