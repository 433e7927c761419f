"""Finite spaces with partitions, their orientations and quasi-cubulations.

Also sector-walls of finite quasi-median graphs and the embedding of a ball of
a graph product into a product of trees, one tree per colour of a proper
colouring of the underlying graph.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from functools import cached_property
from itertools import product
from typing import Hashable, Iterable, Mapping, Sequence

from .cayley import Ball, HyperplaneKey, hyperplane_of_edge, sector_value
from .errors import DomainError, InvariantError, SpecParseError
from .graph import chromatic_number, is_proper_coloring
from .isomorphism import find_isomorphism
from .qmcheck import FiniteGraph

ORIENTATION_CAP = 1_000_000

Orientation = tuple[int, ...]
"""Sector index chosen on each wall, in wall order."""


@dataclass(frozen=True, eq=False)
class SpaceWithPartitions:
    """A finite set with a list of walls, each a partition into at least two sectors."""

    points: tuple[Hashable, ...]
    walls: tuple[tuple[frozenset, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(self.points))
        object.__setattr__(self, "walls", tuple(tuple(frozenset(s) for s in w) for w in self.walls))
        ground = set(self.points)
        if len(ground) != len(self.points):
            raise DomainError("duplicate point")
        for w in self.walls:
            if len(w) < 2 or any(not s for s in w):
                raise DomainError("a wall needs at least two nonempty sectors")
            if sum(len(s) for s in w) != len(ground) or set().union(*w) != ground:
                raise DomainError("a wall must partition the points")
        bad = self.check_nesting()
        if bad is not None:
            raise DomainError(f"walls {bad[0]} and {bad[1]} share a sector inclusion but are not nested")

    @cached_property
    def _partitions(self) -> list[frozenset[frozenset]]:
        return [frozenset(w) for w in self.walls]

    def distinguishable(self, i: int, j: int) -> bool:
        return self._partitions[i] != self._partitions[j]

    @cached_property
    def implications(self) -> dict[tuple[int, int], list[tuple[int, int]]]:
        """``(i, a) -> [(j, b)]`` whenever sector a of wall i lies in sector b of wall j."""
        out: dict[tuple[int, int], list[tuple[int, int]]] = defaultdict(list)
        for i, j in product(range(len(self.walls)), repeat=2):
            if i == j or not self.distinguishable(i, j):
                continue
            for a, sa in enumerate(self.walls[i]):
                for b, sb in enumerate(self.walls[j]):
                    if sa <= sb:
                        out[(i, a)].append((j, b))
        return dict(out)

    @cached_property
    def _incoming(self) -> dict[int, list[tuple[int, int, int]]]:
        """For wall j, the triples ``(i, a, b)`` meaning sector a of i forces sector b of j."""
        out: dict[int, list[tuple[int, int, int]]] = defaultdict(list)
        for (i, a), targets in self.implications.items():
            for j, b in targets:
                out[j].append((i, a, b))
        return dict(out)

    def nested(self, i: int, j: int) -> bool:
        """Some sector of each wall holds every sector of the other but one."""
        p, q = self.walls[i], self.walls[j]
        for b1 in p:
            for b2 in q:
                if all(d <= b1 for d in q if d != b2) and all(d <= b2 for d in p if d != b1):
                    return True
        return False

    def check_nesting(self) -> tuple[int, int] | None:
        """First pair of walls violating the nesting condition, if any.

        Whenever a sector ``a`` of wall i lies in a sector ``b`` of wall j, some
        sector ``c`` of wall i must hold every sector of j but ``b``, while ``b``
        holds every sector of i but ``c``. Two binary walls always pass.
        """
        n = len(self.walls)
        for i, j in product(range(n), repeat=2):
            p, q = self.walls[i], self.walls[j]
            if i == j or (len(p) == 2 and len(q) == 2) or not self.distinguishable(i, j):
                continue
            for a, b in product(p, q):
                if a <= b and not any(
                    all(x <= b for x in p if x is not c) and all(y <= c for y in q if y is not b) for c in p
                ):
                    return (min(i, j), max(i, j))
        return None

    def sector_of(self, wall: int, x: Hashable) -> int:
        for a, s in enumerate(self.walls[wall]):
            if x in s:
                return a
        raise DomainError(f"no such point: {x}")

    def is_valid(self, sigma: Orientation) -> bool:
        return all(
            sigma[j] == b for (i, a), targets in self.implications.items() if sigma[i] == a for j, b in targets
        )

    def _valid_after_change(self, sigma: Orientation, i: int, a: int) -> bool:
        """Validity of ``sigma`` with wall i switched to sector a, given ``sigma`` valid."""
        for j, b in self.implications.get((i, a), ()):
            if j != i and sigma[j] != b:
                return False
        for k, c, b in self._incoming.get(i, ()):
            if sigma[k] == c and b != a:
                return False
        return True


def principal_orientation(space: SpaceWithPartitions, x: Hashable) -> Orientation:
    return tuple(space.sector_of(i, x) for i in range(len(space.walls)))


def wall_distance(s: Orientation, t: Orientation) -> int:
    return sum(a != b for a, b in zip(s, t))


@dataclass(frozen=True, eq=False)
class Cubulation:
    """Orientation graph plus the position of every principal orientation."""

    space: SpaceWithPartitions
    orientations: tuple[Orientation, ...]
    graph: FiniteGraph
    embedding: Mapping[Hashable, int]


def quasi_cubulate(space: SpaceWithPartitions, cap: int = ORIENTATION_CAP) -> Cubulation:
    """Valid orientations reachable from the principal ones by single-wall changes.

    Adjacent orientations differ on exactly one wall.
    """
    principal = {x: principal_orientation(space, x) for x in space.points}
    for sigma in set(principal.values()):
        if not space.is_valid(sigma):
            raise InvariantError("a principal orientation is invalid")
    found: dict[Orientation, int] = {}
    order: list[Orientation] = []
    queue = sorted(set(principal.values()))
    for sigma in queue:
        found[sigma] = len(order)
        order.append(sigma)
    edges = []
    head = 0
    while head < len(order):
        sigma = order[head]
        head += 1
        for i, wall in enumerate(space.walls):
            for a in range(len(wall)):
                if a == sigma[i] or not space._valid_after_change(sigma, i, a):
                    continue
                tau = sigma[:i] + (a,) + sigma[i + 1 :]
                j = found.get(tau)
                if j is None:
                    j = found[tau] = len(order)
                    order.append(tau)
                    if len(order) > cap:
                        raise DomainError(f"more than {cap} orientations")
                i0 = found[sigma]
                if i0 < j:
                    edges.append((i0, j))
    graph = FiniteGraph(len(order), edges, order)
    return Cubulation(space, tuple(order), graph, {x: found[s] for x, s in principal.items()})


def all_valid_orientations(space: SpaceWithPartitions, cap: int = ORIENTATION_CAP) -> list[Orientation]:
    """Every valid orientation, by filtering the product of sector choices."""
    total = 1
    for w in space.walls:
        total *= len(w)
    if total > cap:
        raise DomainError(f"{total} orientations exceed the cap of {cap}")
    return [s for s in product(*(range(len(w)) for w in space.walls)) if space.is_valid(s)]


# ------------------------------------------------------------ sector walls


def sector_partitions(g: FiniteGraph) -> SpaceWithPartitions:
    """Each hyperplane's full sector partition as one wall."""
    return SpaceWithPartitions(tuple(range(g.n)), tuple(tuple(c.sectors) for c in g.hyperplanes.classes))


def _binary_walls(sectors: Sequence[frozenset], ground: frozenset) -> list[tuple[frozenset, frozenset]]:
    if len(sectors) == 2:
        return [(sectors[0], sectors[1])]
    return [(s, ground - s) for s in sectors]


def sector_walls(g: FiniteGraph) -> SpaceWithPartitions:
    """Walls ``{D, complement}`` for every sector D; two-sector hyperplanes give one wall."""
    ground = frozenset(range(g.n))
    walls = []
    for c in g.hyperplanes.classes:
        walls.extend(_binary_walls(c.sectors, ground))
    return SpaceWithPartitions(tuple(range(g.n)), tuple(walls))


def cubulate_sector_walls(g: FiniteGraph) -> Cubulation:
    return quasi_cubulate(sector_walls(g))


def self_cubulation_check(g: FiniteGraph) -> dict[int, int] | None:
    """Isomorphism from ``g`` to the quasi-cubulation of its own sector partitions."""
    cub = quasi_cubulate(sector_partitions(g))
    return find_isomorphism(g, cub.graph)


# ----------------------------------------------------------- tree embedding


@dataclass(frozen=True, eq=False)
class TreeEmbedding:
    coloring: Mapping[str, int]
    factors: tuple[Cubulation, ...]

    def image(self, x: int) -> tuple[int, ...]:
        return tuple(f.embedding[x] for f in self.factors)

    def distance(self, x: int, y: int) -> int:
        return sum(f.graph.distance(f.embedding[x], f.embedding[y]) for f in self.factors)


def ball_hyperplanes(b: Ball) -> list[HyperplaneKey]:
    """Hyperplanes crossing an edge of the ball, in a deterministic order."""
    idx = b.spec.graph.index
    keys = {hyperplane_of_edge(b.words[i], b.words[j]) for i, j, _, _ in b.edges}
    return sorted(keys, key=lambda k: (idx[k.label], len(k.base), str(k.base)))


def hyperplane_sectors(b: Ball, key: HyperplaneKey) -> list[frozenset[int]]:
    """Sectors of the hyperplane restricted to the ball, ordered by group element."""
    parts: dict[int, set[int]] = defaultdict(set)
    for i, w in enumerate(b.words):
        parts[sector_value(key, w)].add(i)
    return [frozenset(parts[v]) for v in sorted(parts)]


def ball_sector_walls(b: Ball, keys: Iterable[HyperplaneKey] | None = None) -> SpaceWithPartitions:
    """Sector-walls of the Cayley graph restricted to the ball."""
    ground = frozenset(range(len(b)))
    walls = []
    for key in ball_hyperplanes(b) if keys is None else keys:
        walls.extend(_binary_walls(hyperplane_sectors(b, key), ground))
    return SpaceWithPartitions(tuple(range(len(b))), tuple(walls))


def tree_embedding(b: Ball, coloring: Mapping[str, int] | None = None) -> TreeEmbedding:
    """One factor per colour, built from the sector-walls of that colour's hyperplanes.

    Hyperplanes of one colour never cross, so each factor is a tree.
    """
    spec = b.spec
    if coloring is None:
        coloring = chromatic_number(spec.graph)[1]
    if not is_proper_coloring(spec.graph, dict(coloring)):
        raise DomainError("improper coloring")
    by_color: dict[int, list[HyperplaneKey]] = {c: [] for c in sorted(set(coloring.values()))}
    for key in ball_hyperplanes(b):
        by_color[coloring[key.label]].append(key)
    factors = []
    for color, keys in by_color.items():
        cub = quasi_cubulate(ball_sector_walls(b, keys))
        if len(cub.graph.edges) != cub.graph.n - 1 or not cub.graph.is_connected():
            raise InvariantError(f"factor for colour {color} is not a tree")
        factors.append(cub)
    return TreeEmbedding(dict(coloring), tuple(factors))


# --------------------------------------------------------------- file format


def parse_walls(text: str) -> SpaceWithPartitions:
    """``point <id>`` lines followed by ``wall a,b|c|d,e`` lines; ``#`` starts a comment."""
    points: list[str] = []
    walls = []
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        word, _, rest = line.partition(" ")
        rest = rest.strip()
        if word == "point" and rest and " " not in rest:
            if walls:
                raise SpecParseError("points must precede walls", n)
            points.append(rest)
        elif word == "wall" and rest:
            sectors = [frozenset(p.strip() for p in s.split(",") if p.strip()) for s in rest.split("|")]
            unknown = set().union(*sectors) - set(points)
            if unknown:
                raise SpecParseError(f"unknown point {sorted(unknown)[0]}", n)
            walls.append(tuple(sectors))
        else:
            raise SpecParseError(f"cannot parse {line!r}", n)
    try:
        return SpaceWithPartitions(tuple(points), tuple(walls))
    except DomainError as exc:
        raise SpecParseError(str(exc)) from exc


def format_walls(space: SpaceWithPartitions) -> str:
    order = {p: i for i, p in enumerate(space.points)}
    lines = [f"point {p}" for p in space.points]
    for w in space.walls:
        lines.append("wall " + "|".join(",".join(str(p) for p in sorted(s, key=order.get)) for s in w))
    return "\n".join(lines) + "\n"
