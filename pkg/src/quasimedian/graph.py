"""Finite simplicial graphs and the exact predicates used by the classifier."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Iterable

from .errors import DomainError

CLIQUE_CAP = 24
CHROMATIC_CAP = 16


@dataclass(frozen=True)
class SimplicialGraph:
    """Simple undirected graph on named vertices.

    Declaration order of ``vertices`` is the tie-breaker used everywhere else.
    """

    vertices: tuple[str, ...]
    edges: frozenset[frozenset[str]] = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "edges", frozenset(frozenset(e) for e in self.edges))
        if len(set(self.vertices)) != len(self.vertices):
            raise DomainError("duplicate vertex identifier")
        known = set(self.vertices)
        for e in self.edges:
            if len(e) != 2:
                raise DomainError(f"loop edge {sorted(e)}")
            for v in e:
                if v not in known:
                    raise DomainError(f"no such vertex: {v}")

    @classmethod
    def from_edges(cls, vertices: Iterable[str], edges: Iterable[tuple[str, str]] = ()) -> "SimplicialGraph":
        return cls(tuple(vertices), frozenset(frozenset(e) for e in edges))

    @cached_property
    def index(self) -> dict[str, int]:
        return {v: i for i, v in enumerate(self.vertices)}

    @cached_property
    def adjacency(self) -> dict[str, frozenset[str]]:
        adj: dict[str, set[str]] = {v: set() for v in self.vertices}
        for e in self.edges:
            a, b = tuple(e)
            adj[a].add(b)
            adj[b].add(a)
        return {v: frozenset(n) for v, n in adj.items()}

    def __contains__(self, v: object) -> bool:
        return v in self.index

    def __len__(self) -> int:
        return len(self.vertices)

    def adjacent(self, a: str, b: str) -> bool:
        return b in self.adjacency[a]

    def sorted(self, vs: Iterable[str]) -> tuple[str, ...]:
        """Vertices of ``vs`` in declaration order."""
        return tuple(sorted(vs, key=self.index.__getitem__))

    def induced(self, vs: Iterable[str]) -> "SimplicialGraph":
        keep = set(vs)
        for v in keep:
            _check_vertex(self, v)
        return SimplicialGraph(
            tuple(v for v in self.vertices if v in keep),
            frozenset(e for e in self.edges if e <= keep),
        )

    def is_complete(self, vs: Iterable[str] | None = None) -> bool:
        vs = list(self.vertices if vs is None else vs)
        return all(self.adjacent(a, b) for a, b in combinations(vs, 2))


def _check_vertex(g: SimplicialGraph, v: str) -> None:
    if v not in g.index:
        raise DomainError(f"no such vertex: {v}")


def link(g: SimplicialGraph, v: str) -> frozenset[str]:
    _check_vertex(g, v)
    return g.adjacency[v]


def star(g: SimplicialGraph, v: str) -> frozenset[str]:
    return link(g, v) | {v}


def find_induced_square(g: SimplicialGraph) -> tuple[str, str, str, str] | None:
    """Return an induced 4-cycle ``(a, b, c, d)`` or None."""
    adj = g.adjacency
    for a, c in combinations(g.vertices, 2):
        if g.adjacent(a, c):
            continue
        common = g.sorted(adj[a] & adj[c])
        for b, d in combinations(common, 2):
            if not g.adjacent(b, d):
                return (a, b, c, d)
    return None


def is_square_free(g: SimplicialGraph) -> tuple[bool, tuple[str, str, str, str] | None]:
    witness = find_induced_square(g)
    return witness is None, witness


def max_clique(g: SimplicialGraph, vs: Iterable[str] | None = None) -> tuple[str, ...]:
    """A maximum clique by branch and bound (exact)."""
    pool = list(g.vertices if vs is None else g.sorted(vs))
    if len(pool) > CLIQUE_CAP:
        raise DomainError("graph too large for exact clique")
    adj = g.adjacency
    best: list[str] = []

    def expand(current: list[str], candidates: list[str]) -> None:
        nonlocal best
        if len(current) > len(best):
            best = list(current)
        for i, v in enumerate(candidates):
            if len(current) + len(candidates) - i <= len(best):
                return
            expand(current + [v], [w for w in candidates[i + 1:] if w in adj[v]])

    expand([], pool)
    return tuple(best)


def clique_number(g: SimplicialGraph) -> int:
    return len(max_clique(g))


def is_proper_coloring(g: SimplicialGraph, coloring: dict[str, int]) -> bool:
    if set(coloring) != set(g.vertices):
        return False
    return all(coloring[a] != coloring[b] for a, b in (tuple(e) for e in g.edges))


def chromatic_number(g: SimplicialGraph) -> tuple[int, dict[str, int]]:
    """Exact chromatic number with a witness coloring (colors 0..k-1)."""
    n = len(g)
    if n > CHROMATIC_CAP:
        raise DomainError("graph too large for exact chromatic number")
    if n == 0:
        return 0, {}
    adj = g.adjacency
    # highest degree first keeps the search tree small
    order = sorted(g.vertices, key=lambda v: (-len(adj[v]), g.index[v]))

    def try_colors(k: int) -> dict[str, int] | None:
        colors: dict[str, int] = {}

        def place(i: int, used: int) -> bool:
            if i == n:
                return True
            v = order[i]
            taken = {colors[w] for w in adj[v] if w in colors}
            # a fresh color is only tried once (symmetry breaking)
            for c in range(min(used + 1, k)):
                if c in taken:
                    continue
                colors[v] = c
                if place(i + 1, max(used, c + 1)):
                    return True
                del colors[v]
            return False

        return dict(colors) if place(0, 0) else None

    for k in range(max(1, clique_number(g)), n + 1):
        found = try_colors(k)
        if found is not None:
            return k, found
    raise AssertionError("unreachable: n colors always suffice")


def complement_components(g: SimplicialGraph, vs: Iterable[str]) -> list[frozenset[str]]:
    """Connected components of the complement of the subgraph induced on ``vs``."""
    remaining = list(g.sorted(set(vs)))
    left = set(remaining)
    comps = []
    for start in remaining:
        if start not in left:
            continue
        left.discard(start)
        comp = {start}
        stack = [start]
        while stack:
            v = stack.pop()
            for w in [w for w in left if not g.adjacent(v, w)]:
                left.discard(w)
                comp.add(w)
                stack.append(w)
        comps.append(frozenset(comp))
    return comps


def join_decompositions(g: SimplicialGraph, vs: Iterable[str]) -> list[tuple[frozenset[str], frozenset[str]]]:
    """All unordered splittings of ``vs`` into two nonempty, fully joined parts.

    Each part is a union of complement components; the part holding the first
    component (in declaration order) is listed first.
    """
    comps = complement_components(g, vs)
    if len(comps) < 2:
        return []
    first, rest = comps[0], comps[1:]
    out = []
    for mask in range(2 ** len(rest) - 1):
        left = set(first)
        right = set()
        for i, c in enumerate(rest):
            (left if mask >> i & 1 else right).update(c)
        out.append((frozenset(left), frozenset(right)))
    return out
