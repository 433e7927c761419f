"""Finite pieces of the quasi-median Cayley graph of a graph product.

Vertices are group elements; ``g`` and ``h`` are adjacent when ``g^-1 h`` is a
single syllable. Balls are built by BFS; integer vertex groups are truncated
to syllable values in ``[-bound, bound]``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Mapping

from .errors import DomainError, InvariantError
from .graph import find_induced_square, star
from .groups import generates, integer_word_length, word_lengths
from .qmcheck import AxiomReport, FiniteGraph, check_axioms, gated_closure
from .words import GraphProduct, NormalWord, Syllable, canonicalize, quotient_head_value, reduce, strip_head, strip_tail

BALL_CAP = 200_000


@dataclass(frozen=True, eq=False)
class Ball:
    """Induced subgraph of the Cayley graph on the truncated ball around ``center``."""

    spec: GraphProduct
    center: NormalWord
    radius: int
    bound: int
    words: tuple[NormalWord, ...]
    depth: tuple[int, ...]
    edges: tuple[tuple[int, int, str, int], ...]
    truncated_labels: frozenset[str]

    @cached_property
    def index(self) -> dict[NormalWord, int]:
        return {w: i for i, w in enumerate(self.words)}

    @cached_property
    def graph(self) -> FiniteGraph:
        return FiniteGraph(
            len(self.words), [(a, b) for a, b, _, _ in self.edges], [str(w) for w in self.words]
        )

    def __len__(self) -> int:
        return len(self.words)

    @property
    def truncated_flags(self) -> list[bool]:
        """Every vertex meets an integer clique, so all or none are flagged."""
        return [bool(self.truncated_labels)] * len(self.words)

    def interior(self, margin: int = 1) -> frozenset[int]:
        """Vertices at distance at most ``radius - margin`` from the center."""
        return frozenset(i for i, d in enumerate(self.depth) if d <= self.radius - margin)

    def vertex(self, w: NormalWord | str) -> int:
        if isinstance(w, str):
            w = self.spec.word(w)
        try:
            return self.index[w]
        except KeyError:
            raise DomainError(f"{w} is not in the ball") from None

    def check_axioms(self) -> AxiomReport:
        return check_axioms(self.graph, self.interior(1), self.interior(2))


def _allowed(spec: GraphProduct, bound: int) -> dict[str, list[int]]:
    return {v: spec.groups[v].enumerate(bound) for v in spec.vertices}


def _in_range(spec: GraphProduct, w: tuple[Syllable, ...], bound: int) -> bool:
    return all(spec.groups[v].is_finite or abs(k) <= bound for v, k in w)


def _clique_base(spec: GraphProduct, w: tuple[Syllable, ...], u: str) -> tuple[tuple[Syllable, ...], int]:
    """Split off the tail syllable at ``u``: ``w = base * (u, value)``."""
    adj = spec.graph.adjacency[u]
    for i in range(len(w) - 1, -1, -1):
        v, k = w[i]
        if v == u:
            return canonicalize(spec, w[:i] + w[i + 1 :]), k
        if v not in adj:
            break
    return w, spec.groups[u].identity


def ball(
    spec: GraphProduct,
    radius: int,
    bound: int = 1,
    center: NormalWord | None = None,
    cap: int = BALL_CAP,
) -> Ball:
    if radius < 0:
        raise DomainError("radius must be non-negative")
    infinite = frozenset(v for v in spec.vertices if not spec.groups[v].is_finite)
    if infinite and bound < 1:
        raise DomainError("enumeration bound must be at least 1")
    center = spec.identity if center is None else center
    allowed = _allowed(spec, max(bound, 1))

    # BFS over words relative to the center
    rel: list[tuple[Syllable, ...]] = [()]
    depth = [0]
    seen = {(): 0}
    layer = [()]
    for d in range(radius):
        nxt = []
        for w in layer:
            for u in spec.vertices:
                for k in allowed[u]:
                    cand = reduce(spec, w + ((u, k),)).syllables
                    if len(cand) != d + 1 or cand in seen or not _in_range(spec, cand, bound):
                        continue
                    seen[cand] = len(rel)
                    rel.append(cand)
                    depth.append(d + 1)
                    nxt.append(cand)
                    if len(rel) > cap:
                        raise DomainError(f"ball exceeds {cap} vertices")
        layer = nxt

    edges = []
    for i, w in enumerate(rel):
        for u in spec.vertices:
            base, mine = _clique_base(spec, w, u)
            group = spec.groups[u]
            for k in [group.identity] + allowed[u]:
                if k == mine:
                    continue
                other = base if k == group.identity else reduce(spec, base + ((u, k),)).syllables
                j = seen.get(other)
                if j is not None and i < j:
                    edges.append((i, j, u, group.multiply(group.inverse(mine), k)))
    words = tuple(center * NormalWord(w, spec) for w in rel)
    return Ball(spec, center, radius, bound, words, tuple(depth), tuple(sorted(edges)), infinite)


# ------------------------------------------------------------- metric


def distance(g: NormalWord, h: NormalWord) -> int:
    return len(g.inverse() * h)


def geodesic(g: NormalWord, h: NormalWord) -> list[NormalWord]:
    """Vertices of the geodesic read off the canonical word of ``g^-1 h``."""
    spec = g.spec
    path = [g]
    for s in (g.inverse() * h).syllables:
        path.append(path[-1] * NormalWord((s,), spec))
    return path


# -------------------------------------------------------- hyperplanes


@dataclass(frozen=True)
class HyperplaneKey:
    """Hyperplane ``base * J_label``; ``base`` is the shortest element of its coset."""

    label: str
    base: NormalWord

    def __str__(self) -> str:
        return f"({self.label}, {self.base})"


def edge_syllable(g: NormalWord, h: NormalWord) -> Syllable:
    s = (g.inverse() * h).syllables
    if len(s) != 1:
        raise DomainError(f"{g} and {h} are not adjacent")
    return s[0]


def hyperplane_key(spec: GraphProduct, label: str, g: NormalWord) -> HyperplaneKey:
    return HyperplaneKey(label, strip_tail(spec, g, star(spec.graph, label)))


def hyperplane_of_edge(g: NormalWord, h: NormalWord) -> HyperplaneKey:
    u, _ = edge_syllable(g, h)
    return hyperplane_key(g.spec, u, g)


def separating_hyperplanes(g: NormalWord, h: NormalWord) -> frozenset[HyperplaneKey]:
    path = geodesic(g, h)
    keys = frozenset(hyperplane_of_edge(a, b) for a, b in zip(path, path[1:]))
    if len(keys) != len(path) - 1:
        raise InvariantError("a geodesic crossed a hyperplane twice")
    return keys


def transverse(k1: HyperplaneKey, k2: HyperplaneKey) -> bool:
    """Whether two hyperplanes cross.

    They cross exactly when their labels are adjacent and their carriers
    ``base * <star(label)>`` meet, i.e. ``base1^-1 base2`` lies in
    ``<star(u)> <star(v)>``.
    """
    spec = k1.base.spec
    u, v = k1.label, k2.label
    if u == v or not spec.graph.adjacent(u, v):
        return False
    rest = strip_head(spec, k1.base.inverse() * k2.base, star(spec.graph, u))
    return rest.support <= star(spec.graph, v)


def sector_value(key: HyperplaneKey, x: NormalWord) -> int:
    """Which sector of the hyperplane holds ``x``, as an element of the label's group."""
    return quotient_head_value(key.base, x, key.label)


def gate_in_clique(g: NormalWord, base: NormalWord, u: str) -> NormalWord:
    """Gate of ``g`` in the clique ``base * G_u``."""
    spec = g.spec
    base = NormalWord(_clique_base(spec, base.syllables, u)[0], spec)
    value = quotient_head_value(base, g, u)
    return base * reduce(spec, [(u, value)])


# --------------------------------------------------------- quasi-medians


@dataclass(frozen=True)
class QuasiMedian:
    vertices: tuple[int, int, int]
    size: int
    hull: frozenset[int]


def quasi_median(b: Ball, x: int, y: int, z: int) -> QuasiMedian:
    """Minimal equilateral median triangle of three ball vertices, by exhaustive search.

    The gated hull is grown inside the ball and must stay at distance at most
    ``radius - 1`` from the center, where every clique and square of the full
    graph through a hull vertex is visible.
    """
    g = b.graph
    limit = b.radius - 1
    hull = gated_closure(g, {x, y, z}, lambda v: b.depth[v] <= limit)
    sub = g.induced(hull)
    pos = {v: i for i, v in enumerate(sub.labels)}
    d = sub.distances
    xi, yi, zi = pos[x], pos[y], pos[z]

    def between(a: int, c: int) -> set[int]:
        return {v for v in range(sub.n) if d[a, v] + d[v, c] == d[a, c]}

    cand_x = between(xi, yi) & between(xi, zi)
    cand_y = between(yi, xi) & between(yi, zi)
    cand_z = between(zi, xi) & between(zi, yi)
    best: list[tuple[int, int, int]] = []
    best_size = None
    for a in sorted(cand_x):
        for c in sorted(cand_y):
            k = d[a, c]
            if best_size is not None and k > best_size:
                continue
            if d[xi, a] + k + d[c, yi] != d[xi, yi]:
                continue
            for e in sorted(cand_z):
                if d[a, e] != k or d[c, e] != k:
                    continue
                if d[xi, a] + k + d[e, zi] != d[xi, zi] or d[yi, c] + k + d[e, zi] != d[yi, zi]:
                    continue
                if best_size is None or k < best_size:
                    best, best_size = [], int(k)
                best.append((a, c, e))
    if len(best) != 1:
        raise InvariantError(f"expected one minimal median triangle, found {len(best)}")
    a, c, e = best[0]
    labels = sub.labels
    return QuasiMedian((labels[a], labels[c], labels[e]), best_size, hull)


# ------------------------------------------------------ weighted metric


class GeneratingSets:
    """A generating set for every vertex group and the induced word lengths."""

    def __init__(self, spec: GraphProduct, overrides: Mapping[str, tuple[int, ...]] | None = None):
        self.spec = spec
        self.gens: dict[str, tuple[int, ...]] = {}
        for v in spec.vertices:
            group = spec.groups[v]
            gens = tuple(group.normalize(k) for k in (overrides or {}).get(v, group.default_generators()))
            if not generates(group, gens):
                raise DomainError(f"generators {list(gens)} do not generate the group at {v}")
            self.gens[v] = gens
        self._lengths = {
            v: word_lengths(spec.groups[v], gens) for v, gens in self.gens.items() if spec.groups[v].is_finite
        }

    def syllable_length(self, s: Syllable) -> int:
        v, k = s
        if v in self._lengths:
            return self._lengths[v][k]
        return integer_word_length(k, self.gens[v])


def weighted_distance(gens: GeneratingSets, g: NormalWord, h: NormalWord) -> int:
    """Word length of ``g^-1 h`` over the union of the vertex generating sets."""
    return sum(gens.syllable_length(s) for s in (g.inverse() * h).syllables)


# --------------------------------------------------------- flat squares


def flat_square_witness(
    spec: GraphProduct, n: int, square: tuple[str, str, str, str] | None = None
) -> list[list[NormalWord]]:
    """An ``(n+1) x (n+1)`` grid of elements whose distances are the L1 distances of indices.

    For an induced square ``a-b-c-d`` the rows alternate syllables of ``a`` and
    ``c`` and the columns alternate syllables of ``b`` and ``d``; the two
    alternating subgroups commute and are free products.
    """
    if square is None:
        square = find_induced_square(spec.graph)
        if square is None:
            raise DomainError("no induced square in the graph")
    a, b, c, d = square
    if spec.graph.adjacent(a, c) or spec.graph.adjacent(b, d) or not all(
        spec.graph.adjacent(p, q) for p, q in ((a, b), (b, c), (c, d), (d, a))
    ):
        raise DomainError("not an induced square")
    # residue 1, integer 1 and table index 1 are the canonical nontrivial elements
    first = {v: spec.groups[v].normalize(1) for v in square}
    rows = [(a if i % 2 == 0 else c) for i in range(n)]
    cols = [(b if j % 2 == 0 else d) for j in range(n)]
    grid = []
    for i in range(n + 1):
        left = [(v, first[v]) for v in rows[:i]]
        grid.append([reduce(spec, left + [(v, first[v]) for v in cols[:j]]) for j in range(n + 1)])
    return grid
