"""Verification toolkit for finite graphs.

Quasi-median axioms, hyperplanes and sectors, gates, gated and convex hulls,
intervals, prisms and projections. Everything works on :class:`FiniteGraph`,
whose vertices are ``0..n-1`` with optional labels.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from math import prod
from typing import Callable, Hashable, Iterable, Sequence

import networkx as nx
import numpy as np
from scipy.cluster.hierarchy import DisjointSet
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components, shortest_path

from .errors import DomainError, InvariantError

UNREACHABLE = 1 << 20
PRISM_CAP = 1 << 14
# cap on |rows| x |columns| handled by one vectorized block
_BLOCK = 1 << 22


class FiniteGraph:
    """Simple undirected graph on ``0..n-1``.

    ``interior`` optionally marks the vertices on which the quasi-median axioms
    are expected to hold (used for balls, which are not gated).
    """

    def __init__(
        self,
        n: int,
        edges: Iterable[tuple[int, int]],
        labels: Sequence[Hashable] | None = None,
        interior: Iterable[int] | None = None,
    ):
        self.n = n
        adj: list[set[int]] = [set() for _ in range(n)]
        for a, b in edges:
            if a == b:
                raise DomainError("loops are not allowed")
            adj[a].add(b)
            adj[b].add(a)
        self.adj: list[frozenset[int]] = [frozenset(s) for s in adj]
        self.labels = list(labels) if labels is not None else list(range(n))
        if len(self.labels) != n:
            raise DomainError("label count does not match vertex count")
        self.interior = frozenset(interior) if interior is not None else None

    @classmethod
    def from_adjacency(cls, labels: Sequence[Hashable], adjacent: Callable[[Hashable, Hashable], bool]) -> "FiniteGraph":
        labels = list(labels)
        edges = [(i, j) for i, j in combinations(range(len(labels)), 2) if adjacent(labels[i], labels[j])]
        return cls(len(labels), edges, labels)

    @classmethod
    def from_networkx(cls, g: nx.Graph) -> "FiniteGraph":
        nodes = list(g.nodes)
        pos = {v: i for i, v in enumerate(nodes)}
        return cls(len(nodes), [(pos[a], pos[b]) for a, b in g.edges], nodes)

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(range(self.n))
        g.add_edges_from(self.edges)
        return g

    @cached_property
    def edges(self) -> list[tuple[int, int]]:
        return [(a, b) for a in range(self.n) for b in sorted(self.adj[a]) if a < b]

    def has_edge(self, a: int, b: int) -> bool:
        return b in self.adj[a]

    @cached_property
    def _csr(self):
        e = np.array(self.edges, dtype=np.int64).reshape(-1, 2)
        data = np.ones(2 * len(e), dtype=np.int8)
        rows = np.concatenate([e[:, 0], e[:, 1]])
        cols = np.concatenate([e[:, 1], e[:, 0]])
        return coo_matrix((data, (rows, cols)), shape=(self.n, self.n)).tocsr()

    def distances_from(self, sources: Sequence[int]) -> np.ndarray:
        """BFS distance rows for ``sources`` (unreachable = ``UNREACHABLE``)."""
        if self.n == 0 or len(sources) == 0:
            return np.zeros((len(sources), self.n), dtype=np.int32)
        d = shortest_path(self._csr, unweighted=True, indices=list(sources))
        d = np.atleast_2d(d)
        d[np.isinf(d)] = UNREACHABLE
        return d.astype(np.int32)

    @cached_property
    def distances(self) -> np.ndarray:
        return self.distances_from(range(self.n))

    def distance(self, a: int, b: int) -> int:
        return int(self.distances[a, b])

    def is_connected(self) -> bool:
        if self.n == 0:
            return True
        return connected_components(self._csr, directed=False)[0] == 1

    def induced(self, vs: Iterable[int]) -> "FiniteGraph":
        """Induced subgraph; its labels are the original vertex indices."""
        keep = sorted(set(vs))
        pos = {v: i for i, v in enumerate(keep)}
        edges = [(pos[a], pos[b]) for a in keep for b in self.adj[a] if b in pos and a < b]
        return FiniteGraph(len(keep), edges, keep)

    @cached_property
    def axioms(self) -> "AxiomReport":
        return check_axioms(self)

    @property
    def is_quasi_median(self) -> bool:
        return self.axioms.ok

    @cached_property
    def hyperplanes(self) -> "HyperplaneSystem":
        return hyperplanes(self)


# ---------------------------------------------------------------- axioms


@dataclass
class AxiomReport:
    triangle_ok: bool = True
    quadrangle_ok: bool = True
    k4minus_witness: tuple[int, ...] | None = None
    k32_witness: tuple[int, ...] | None = None
    triangle_witness: tuple[int, ...] | None = None
    quadrangle_witness: tuple[int, ...] | None = None

    @property
    def ok(self) -> bool:
        return self.triangle_ok and self.quadrangle_ok and self.k4minus_witness is None and self.k32_witness is None

    def to_json(self) -> dict:
        return {
            "triangle_ok": self.triangle_ok,
            "quadrangle_ok": self.quadrangle_ok,
            "k4minus_witness": list(self.k4minus_witness) if self.k4minus_witness else None,
            "k32_witness": list(self.k32_witness) if self.k32_witness else None,
        }


def _pairs_at_distance_two(g: FiniteGraph, mask: frozenset[int]) -> dict[tuple[int, int], list[int]]:
    """Non-adjacent pairs in ``mask`` with their common neighbours (anywhere)."""
    out: dict[tuple[int, int], list[int]] = {}
    for z in range(g.n):
        nbrs = sorted(v for v in g.adj[z] if v in mask)
        for v, w in combinations(nbrs, 2):
            if w not in g.adj[v]:
                out.setdefault((v, w), []).append(z)
    return out


def _padded(lists: Sequence[Sequence[int]], fill: int) -> np.ndarray:
    width = max((len(x) for x in lists), default=0)
    arr = np.full((len(lists), max(width, 1)), fill, dtype=np.int64)
    for i, x in enumerate(lists):
        arr[i, : len(x)] = x
    return arr


def _column_min(dext: np.ndarray, cols: np.ndarray) -> np.ndarray:
    """``min_l dext[:, cols[:, l]]`` for a padded column-index table."""
    out = dext[:, cols[:, 0]]
    for l in range(1, cols.shape[1]):
        np.minimum(out, dext[:, cols[:, l]], out=out)
    return out


def check_axioms(
    g: FiniteGraph,
    interior: Iterable[int] | None = None,
    quad_interior: Iterable[int] | None = None,
) -> AxiomReport:
    """Triangle and quadrangle conditions plus forbidden K4-minus and K3,2.

    A configuration is checked only when every quantified vertex lies in the
    relevant mask; the vertex whose existence is asserted may lie anywhere.
    Masks default to ``g.interior`` and then to all vertices.
    """
    if interior is None:
        interior = g.interior if g.interior is not None else range(g.n)
    tri_mask = frozenset(interior)
    quad_mask = frozenset(quad_interior) if quad_interior is not None else tri_mask
    report = AxiomReport()
    if g.n == 0:
        return report
    rows = sorted(tri_mask | quad_mask)
    row_of = {u: i for i, u in enumerate(rows)}
    dist = g.distances_from(rows)
    dext = np.hstack([dist, np.full((len(rows), 1), UNREACHABLE, dtype=np.int32)])
    sentinel = g.n

    # triangle: d(u,v) = d(u,w) = k >= 1 for an edge vw needs a common neighbour at k-1
    tri_rows = np.array([row_of[u] for u in sorted(tri_mask)], dtype=np.int64)
    tri_edges = [(a, b) for a, b in g.edges if a in tri_mask and b in tri_mask]
    step = max(1, _BLOCK // max(1, len(tri_rows)))
    for start in range(0, len(tri_edges), step):
        chunk = tri_edges[start : start + step]
        ev = np.array([a for a, _ in chunk])
        ew = np.array([b for _, b in chunk])
        common = _padded([sorted(g.adj[a] & g.adj[b]) for a, b in chunk], sentinel)
        sub = dext[tri_rows]
        dv, dw = sub[:, ev], sub[:, ew]
        best = _column_min(sub, common)
        bad = (dv == dw) & (dv >= 1) & (dv < UNREACHABLE) & (best != dv - 1)
        if bad.any():
            r, c = map(int, np.argwhere(bad)[0])
            report.triangle_ok = False
            report.triangle_witness = (rows[tri_rows[r]], chunk[c][0], chunk[c][1])
            break

    # quadrangle: z at k, neighbours v,w at k-1 with d(v,w)=2 need a common neighbour at k-2
    pairs = _pairs_at_distance_two(g, quad_mask)
    keyed = [(vw, [z for z in zs if z in quad_mask]) for vw, zs in pairs.items()]
    keyed = [(vw, zs) for vw, zs in keyed if zs]
    quad_rows = np.array([row_of[u] for u in sorted(quad_mask)], dtype=np.int64)
    step = max(1, _BLOCK // max(1, len(quad_rows)))
    for start in range(0, len(keyed), step):
        chunk = keyed[start : start + step]
        pv = np.array([v for (v, _), _ in chunk])
        pw = np.array([w for (_, w), _ in chunk])
        allc = _padded([sorted(g.adj[v] & g.adj[w]) for (v, w), _ in chunk], sentinel)
        inner = _padded([zs for _, zs in chunk], sentinel)
        sub = dext[quad_rows]
        dv, dw = sub[:, pv], sub[:, pw]
        best = _column_min(sub, allc)
        far = -_column_min(-np.where(sub >= UNREACHABLE, -1, sub), inner)
        bad = (dv == dw) & (dv < UNREACHABLE) & (far == dv + 1) & (best != dv - 1)
        if bad.any():
            r, c = map(int, np.argwhere(bad)[0])
            report.quadrangle_ok = False
            (v, w), zs = chunk[c]
            report.quadrangle_witness = (rows[quad_rows[r]], v, w)
            break

    # forbidden induced subgraphs, all four or five vertices in the mask
    for a, b in g.edges:
        if a not in tri_mask or b not in tri_mask:
            continue
        common = sorted(c for c in g.adj[a] & g.adj[b] if c in tri_mask)
        for c, d in combinations(common, 2):
            if d not in g.adj[c]:
                report.k4minus_witness = (a, b, c, d)
                break
        if report.k4minus_witness:
            break
    for (p, q), zs in sorted(_pairs_at_distance_two(g, tri_mask).items()):
        zs = sorted(z for z in zs if z in tri_mask)
        if len(zs) < 3:
            continue
        for trio in combinations(zs, 3):
            if all(y not in g.adj[x] for x, y in combinations(trio, 2)):
                report.k32_witness = (p, q, *trio)
                break
        if report.k32_witness:
            break
    return report


def is_triangle_free(g: FiniteGraph) -> bool:
    return all(not (g.adj[a] & g.adj[b]) for a, b in g.edges)


def is_median(g: FiniteGraph) -> bool:
    return g.is_connected() and is_triangle_free(g) and check_axioms(g).ok


# ----------------------------------------------------------- hyperplanes


@dataclass
class EdgeClass:
    """One hyperplane: an equivalence class of edges with its sectors."""

    index: int
    edges: frozenset[tuple[int, int]]
    graph: FiniteGraph = field(repr=False)

    @property
    def representative(self) -> tuple[int, int]:
        return min(self.edges)

    @cached_property
    def sector_of(self) -> np.ndarray:
        g = self.graph
        keep = [e for e in g.edges if e not in self.edges]
        if keep:
            e = np.array(keep)
            m = coo_matrix((np.ones(len(e)), (e[:, 0], e[:, 1])), shape=(g.n, g.n))
        else:
            m = coo_matrix((g.n, g.n))
        _, labels = connected_components(m, directed=False)
        # renumber by first occurrence so sector ids are deterministic
        seen: dict[int, int] = {}
        return np.array([seen.setdefault(int(x), len(seen)) for x in labels])

    @cached_property
    def sectors(self) -> list[frozenset[int]]:
        out: list[set[int]] = [set() for _ in range(int(self.sector_of.max()) + 1)]
        for v, s in enumerate(self.sector_of):
            out[s].add(v)
        return [frozenset(s) for s in out]

    @cached_property
    def carrier(self) -> frozenset[int]:
        return frozenset(v for e in self.edges for v in e)

    def separates(self, x: int, y: int) -> bool:
        return self.sector_of[x] != self.sector_of[y]


@dataclass
class HyperplaneSystem:
    classes: list[EdgeClass]
    class_of: dict[tuple[int, int], int]
    transverse: frozenset[tuple[int, int]]

    def __len__(self) -> int:
        return len(self.classes)

    def of_edge(self, a: int, b: int) -> EdgeClass:
        return self.classes[self.class_of[(min(a, b), max(a, b))]]

    def are_transverse(self, i: int, j: int) -> bool:
        return (min(i, j), max(i, j)) in self.transverse

    def separating(self, x: int, y: int) -> list[int]:
        return [c.index for c in self.classes if c.separates(x, y)]


def induced_squares(g: FiniteGraph) -> Iterable[tuple[int, int, int, int]]:
    """Induced 4-cycles ``(a, b, c, d)``, each listed once with ``b`` its smallest vertex."""
    for (b, d), common in sorted(_pairs_at_distance_two(g, frozenset(range(g.n))).items()):
        for a, c in combinations(sorted(common), 2):
            if c not in g.adj[a] and b < a:
                yield (a, b, c, d)


def hyperplanes(g: FiniteGraph) -> HyperplaneSystem:
    """Edge classes under "two sides of a triangle" and "opposite sides of an induced square"."""
    edges = g.edges
    ds = DisjointSet(edges)

    def key(a: int, b: int) -> tuple[int, int]:
        return (a, b) if a < b else (b, a)

    for a, b in edges:
        for c in g.adj[a] & g.adj[b]:
            ds.merge((a, b), key(a, c))
    crossings = []
    for (b, d), common in _pairs_at_distance_two(g, frozenset(range(g.n))).items():
        for a, c in combinations(common, 2):
            if c in g.adj[a]:
                continue
            ds.merge(key(a, b), key(c, d))
            ds.merge(key(a, d), key(c, b))
            crossings.append((key(a, b), key(a, d)))
    roots = sorted({min(s) for s in ds.subsets()})
    classes = []
    class_of: dict[tuple[int, int], int] = {}
    for i, root in enumerate(roots):
        members = frozenset(ds.subset(root))
        classes.append(EdgeClass(i, members, g))
        for e in members:
            class_of[e] = i
    transverse = frozenset(
        (min(class_of[e], class_of[f]), max(class_of[e], class_of[f])) for e, f in crossings
    )
    return HyperplaneSystem(classes, class_of, transverse)


# ----------------------------------------------------------------- gates


def gate(g: FiniteGraph, ys: Iterable[int], x: int) -> int | None:
    """The vertex p of ``ys`` with d(x,y) = d(x,p) + d(p,y) for all y, if any."""
    ys = sorted(set(ys))
    if x in ys:
        return x
    d = g.distances
    dx = d[x, ys]
    for p in (ys[i] for i in np.flatnonzero(dx == dx.min())):
        if np.all(dx == d[x, p] + d[p, ys]):
            return p
    return None


def _locally_gated(g: FiniteGraph, ys: frozenset[int]) -> bool:
    """Connected, contains its triangles and is locally convex."""
    if not ys:
        return False
    if not g.induced(ys).is_connected():
        return False
    for a in ys:
        for b in g.adj[a]:
            if b in ys and a < b and not (g.adj[a] & g.adj[b]) <= ys:
                return False
    for a, b in combinations(sorted(ys), 2):
        if b in g.adj[a]:
            continue
        common = g.adj[a] & g.adj[b]
        if common & ys and not common <= ys:
            return False
    return True


def is_gated(g: FiniteGraph, ys: Iterable[int]) -> bool:
    """Gatedness via gate existence, cross-checked on quasi-median graphs."""
    ys = frozenset(ys)
    by_gates = bool(ys) and all(gate(g, ys, x) is not None for x in range(g.n))
    if g.is_quasi_median and by_gates != _locally_gated(g, ys):
        raise InvariantError(f"gatedness routes disagree on {sorted(ys)}")
    return by_gates


def gated_hull(g: FiniteGraph, s: Iterable[int]) -> frozenset[int]:
    """Intersection of all sectors containing ``s``."""
    s = frozenset(s)
    if not s:
        return frozenset()
    hull = set(range(g.n))
    for c in g.hyperplanes.classes:
        ids = {int(c.sector_of[v]) for v in s}
        if len(ids) == 1:
            hull &= c.sectors[ids.pop()]
    hull = frozenset(hull)
    if g.is_quasi_median and not is_gated(g, hull):
        raise InvariantError("sector intersection is not gated")
    return hull


def gated_closure(
    g: FiniteGraph, s: Iterable[int], allowed: Callable[[int], bool] = lambda v: True
) -> frozenset[int]:
    """Smallest connected superset of ``s`` holding its triangles and locally convex.

    In a weakly modular graph this is the gated hull. ``allowed`` guards every
    vertex of the result; a vertex it rejects raises :class:`DomainError`.
    """
    pts = sorted(set(s))
    if not pts:
        return frozenset()
    hull = set(pts)
    row = g.distances_from([pts[0]])[0]
    for y in pts[1:]:
        if row[y] >= UNREACHABLE:
            raise DomainError("points lie in different components")
        v = y
        while v != pts[0]:
            v = min(w for w in g.adj[v] if row[w] == row[v] - 1)
            hull.add(v)
    queue = sorted(hull)
    for v in queue:
        if not allowed(v):
            raise DomainError("increase radius: hull leaves the trusted region")
    while queue:
        v = queue.pop()
        near = g.adj[v] & hull
        found: set[int] = set()
        for w in near:
            found |= g.adj[v] & g.adj[w]
            for x in g.adj[w] & hull:
                if x != v and x not in g.adj[v]:
                    found |= g.adj[v] & g.adj[x]
        for a, b in combinations(sorted(near), 2):
            if b not in g.adj[a]:
                found |= g.adj[a] & g.adj[b]
        for w in sorted(found - hull):
            if not allowed(w):
                raise DomainError("increase radius: hull leaves the trusted region")
            hull.add(w)
            queue.append(w)
    return frozenset(hull)


# ---------------------------------------------------------- convexity


def interval(g: FiniteGraph, x: int, y: int) -> frozenset[int]:
    d = g.distances_from([x, y])
    return frozenset(int(v) for v in np.flatnonzero(d[0] + d[1] == d[0, y]))


def is_interval_median(g: FiniteGraph, x: int, y: int) -> bool:
    return is_median(g.induced(interval(g, x, y)))


def _interval_closure(g: FiniteGraph, s: frozenset[int]) -> frozenset[int]:
    hull = set(s)
    changed = True
    while changed:
        changed = False
        pts = sorted(hull)
        d = g.distances_from(pts)
        for i, j in combinations(range(len(pts)), 2):
            between = np.flatnonzero(d[i] + d[j] == d[i, pts[j]])
            new = set(map(int, between)) - hull
            if new:
                hull |= new
                changed = True
                break
    return frozenset(hull)


def convex_hull(g: FiniteGraph, s: Iterable[int]) -> frozenset[int]:
    """Interval-closure fixpoint, cross-checked against the multisector description."""
    s = frozenset(s)
    if not s:
        return frozenset()
    hull = _interval_closure(g, s)
    if g.is_quasi_median:
        other = set(range(g.n))
        for c in g.hyperplanes.classes:
            meet = {int(c.sector_of[v]) for v in s}
            other &= set().union(*(c.sectors[i] for i in meet))
        if hull != other:
            raise InvariantError("convex hull routes disagree")
    return hull


# --------------------------------------------------------------- prisms


@dataclass(frozen=True)
class Prism:
    hyperplanes: frozenset[int]
    vertices: frozenset[int]


def maximal_prisms(g: FiniteGraph, classes: Iterable[int] | None = None) -> list[Prism]:
    """Maximal pairwise-transverse families of hyperplanes and their carrier intersections."""
    system = g.hyperplanes
    pool = sorted(range(len(system)) if classes is None else set(classes))
    if not pool:
        return [Prism(frozenset(), frozenset([v])) for v in range(g.n) if not g.adj[v]]
    tg = nx.Graph()
    tg.add_nodes_from(pool)
    tg.add_edges_from((i, j) for i, j in system.transverse if i in tg and j in tg)
    out = []
    for family in sorted(sorted(c) for c in nx.find_cliques(tg)):
        verts = frozenset.intersection(*(system.classes[i].carrier for i in family))
        out.append(Prism(frozenset(family), verts))
    return out


def cubical_dimension(g: FiniteGraph, classes: Iterable[int] | None = None) -> int:
    return max((len(p.hyperplanes) for p in maximal_prisms(g, classes)), default=0)


def prism_factors(g: FiniteGraph) -> list[int] | None:
    """Clique sizes if ``g`` is a Cartesian product of cliques, else None.

    Each vertex is sent to its tuple of sectors; ``g`` is a prism exactly when
    this map is a bijection onto the product that turns adjacency into
    "differ in one coordinate".
    """
    if g.n > PRISM_CAP:
        raise DomainError("graph too large for prism factorization")
    if g.n == 0:
        return None
    if g.n == 1:
        return []
    system = hyperplanes(g)
    sizes = [len(c.sectors) for c in system.classes]
    if prod(sizes) != g.n:
        return None
    coords = [tuple(int(c.sector_of[v]) for c in system.classes) for v in range(g.n)]
    if len(set(coords)) != g.n:
        return None
    for a, b in combinations(range(g.n), 2):
        differ = sum(x != y for x, y in zip(coords[a], coords[b]))
        if (differ == 1) != g.has_edge(a, b):
            return None
    return sizes


def is_prism(g: FiniteGraph, vs: Iterable[int] | None = None) -> bool:
    sub = g if vs is None else g.induced(vs)
    return prism_factors(sub) is not None


# ---------------------------------------------------------- projections


def projection_checks(g: FiniteGraph, ys: Iterable[int]) -> list[str]:
    """Gate-map properties onto a gated set; returns a list of failures."""
    ys = frozenset(ys)
    proj = {x: gate(g, ys, x) for x in range(g.n)}
    missing = [x for x, p in proj.items() if p is None]
    if missing:
        return [f"no gate for vertex {missing[0]}"]
    failures = []
    d = g.distances
    system = g.hyperplanes
    crossing = {
        c.index for c in system.classes if any(a in ys and b in ys for a, b in c.edges)
    }
    for x, y in combinations(range(g.n), 2):
        px, py = proj[x], proj[y]
        if d[px, py] > d[x, y]:
            failures.append(f"projection expands distance between {x} and {y}")
        lhs = set(system.separating(px, py))
        rhs = set(system.separating(x, y)) & crossing
        if lhs != rhs:
            failures.append(f"separating hyperplanes of projections differ for {x}, {y}")
    return failures


def helly_check(g: FiniteGraph, family: Sequence[Iterable[int]]) -> bool:
    sets = [frozenset(s) for s in family]
    if any(not (a & b) for a, b in combinations(sets, 2)):
        return True
    return bool(frozenset.intersection(*sets)) if sets else True


def axiom_failures(ax: AxiomReport, name: Callable[[int], Hashable] = int) -> list[dict]:
    """Failed conditions of an axiom report, witnesses renamed by ``name``."""
    found = [
        ("triangle", None if ax.triangle_ok else ax.triangle_witness),
        ("quadrangle", None if ax.quadrangle_ok else ax.quadrangle_witness),
        ("k4minus", ax.k4minus_witness),
        ("k32", ax.k32_witness),
    ]
    return [{"condition": c, "witness": [name(v) for v in w]} for c, w in found if w]


def report(g: FiniteGraph) -> dict:
    """Summary used by the ``check`` command."""
    ax = check_axioms(g)
    return {
        "axioms": ax.to_json(),
        "hyperplane_count": len(g.hyperplanes),
        "dimension": cubical_dimension(g),
        "failures": axiom_failures(ax),
    }
