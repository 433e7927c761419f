"""Vertex groups with decidable arithmetic: cyclic, integers, and finite tables."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import product
from math import gcd, inf
from pathlib import Path

from .errors import DomainError, SpecParseError


class VertexGroup:
    """Common interface; elements are plain ints with identity 0."""

    identity = 0
    is_hyperbolic = True

    @property
    def order(self) -> float:
        raise NotImplementedError

    @property
    def is_finite(self) -> bool:
        return self.order != inf

    def normalize(self, a: int) -> int:
        raise NotImplementedError

    def multiply(self, a: int, b: int) -> int:
        raise NotImplementedError

    def inverse(self, a: int) -> int:
        raise NotImplementedError

    def enumerate(self, bound: int = 1) -> list[int]:
        """Non-identity elements; ``bound`` only matters for infinite groups."""
        raise NotImplementedError

    def default_generators(self) -> tuple[int, ...]:
        raise NotImplementedError

    def descriptor(self) -> str:
        raise NotImplementedError


@dataclass(frozen=True)
class CyclicGroup(VertexGroup):
    n: int

    def __post_init__(self):
        if self.n < 2:
            raise DomainError("trivial vertex group")

    @property
    def order(self) -> float:
        return self.n

    def normalize(self, a: int) -> int:
        return a % self.n

    def multiply(self, a: int, b: int) -> int:
        return (a + b) % self.n

    def inverse(self, a: int) -> int:
        return -a % self.n

    def enumerate(self, bound: int = 1) -> list[int]:
        return list(range(1, self.n))

    def default_generators(self) -> tuple[int, ...]:
        return (1,)

    def descriptor(self) -> str:
        return f"C{self.n}"


@dataclass(frozen=True)
class Integers(VertexGroup):
    @property
    def order(self) -> float:
        return inf

    def normalize(self, a: int) -> int:
        return int(a)

    def multiply(self, a: int, b: int) -> int:
        return a + b

    def inverse(self, a: int) -> int:
        return -a

    def enumerate(self, bound: int = 1) -> list[int]:
        if bound < 1:
            raise DomainError("enumeration bound must be at least 1")
        return list(range(-bound, 0)) + list(range(1, bound + 1))

    def default_generators(self) -> tuple[int, ...]:
        return (1,)

    def descriptor(self) -> str:
        return "Z"


@dataclass(frozen=True, eq=False)
class TableGroup(VertexGroup):
    """Finite group given by its multiplication table; index 0 is the identity.

    ``table[a][b]`` is the product ``a*b`` (row is the left factor).
    """

    table: tuple[tuple[int, ...], ...]
    source: str = ""

    def __post_init__(self):
        t = tuple(tuple(int(x) for x in row) for row in self.table)
        object.__setattr__(self, "table", t)
        n = len(t)
        if n < 2:
            raise DomainError("trivial vertex group")
        if any(len(row) != n for row in t):
            raise DomainError("multiplication table is not square")
        if any(not 0 <= x < n for row in t for x in row):
            raise DomainError("table entry out of range")
        if any(t[0][a] != a or t[a][0] != a for a in range(n)):
            raise DomainError("index 0 is not a two-sided identity")
        for a in range(n):
            if 0 not in t[a]:
                raise DomainError(f"element {a} has no inverse")
        for a, b, c in product(range(n), repeat=3):
            if t[t[a][b]][c] != t[a][t[b][c]]:
                raise DomainError(f"table is not associative at ({a},{b},{c})")

    def __eq__(self, other):
        return isinstance(other, TableGroup) and self.table == other.table

    def __hash__(self):
        return hash(self.table)

    @cached_property
    def inverses(self) -> tuple[int, ...]:
        return tuple(row.index(0) for row in self.table)

    @property
    def order(self) -> float:
        return len(self.table)

    def normalize(self, a: int) -> int:
        if not 0 <= a < len(self.table):
            raise DomainError(f"table index {a} out of range")
        return a

    def multiply(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inverse(self, a: int) -> int:
        return self.inverses[a]

    def enumerate(self, bound: int = 1) -> list[int]:
        return list(range(1, len(self.table)))

    def default_generators(self) -> tuple[int, ...]:
        return tuple(range(1, len(self.table)))

    def descriptor(self) -> str:
        return f"table:{self.source}"


def load_table(path: str | Path, source: str | None = None) -> TableGroup:
    text = Path(path).read_text()
    try:
        rows = [tuple(int(x) for x in line.split()) for line in text.splitlines() if line.strip()]
    except ValueError as exc:
        raise SpecParseError(f"table {path}: non-integer entry") from exc
    return TableGroup(tuple(rows), source if source is not None else str(path))


def parse_descriptor(text: str, base_dir: Path | None = None) -> VertexGroup:
    """Parse ``C<n>``, ``Z`` or ``table:<path>``."""
    if text == "Z":
        return Integers()
    if text.startswith("C") and text[1:].isdigit():
        return CyclicGroup(int(text[1:]))
    if text.startswith("table:") and len(text) > 6:
        rel = text[6:]
        path = Path(rel) if base_dir is None else base_dir / rel
        return load_table(path, rel)
    raise SpecParseError(f"unknown group descriptor {text!r}")


def generates(group: VertexGroup, gens: tuple[int, ...]) -> bool:
    """Whether ``gens`` generates the whole group."""
    if not gens:
        return False
    if not group.is_finite:
        g = 0
        for k in gens:
            g = gcd(g, k)
        return g == 1
    seen = {0}
    frontier = [0]
    while frontier:
        nxt = []
        for a in frontier:
            for s in gens:
                for b in (group.multiply(a, s), group.multiply(a, group.inverse(s))):
                    if b not in seen:
                        seen.add(b)
                        nxt.append(b)
        frontier = nxt
    return len(seen) == group.order


def word_lengths(group: VertexGroup, gens: tuple[int, ...]) -> dict[int, int]:
    """Word length of every element of a finite group w.r.t. ``gens`` (symmetrized)."""
    if not group.is_finite:
        raise DomainError("word_lengths needs a finite group")
    dist = {0: 0}
    frontier = [0]
    while frontier:
        nxt = []
        for a in frontier:
            for s in gens:
                for b in (group.multiply(a, s), group.multiply(a, group.inverse(s))):
                    if b not in dist:
                        dist[b] = dist[a] + 1
                        nxt.append(b)
        frontier = nxt
    return dist


def integer_word_length(x: int, gens: tuple[int, ...]) -> int:
    """Word length of ``x`` in Z w.r.t. ``gens`` and their negatives.

    Any shortest word can be reordered so partial sums stay within
    ``[min(0,x) - K, max(0,x) + K]`` with ``K = max |g|``, so a BFS confined to
    that window is exact.
    """
    steps = {abs(g) for g in gens if g != 0}
    if not steps:
        raise DomainError("empty generating set")
    k = max(steps)
    lo, hi = min(0, x) - k, max(0, x) + k
    dist = {0: 0}
    frontier = [0]
    while frontier:
        nxt = []
        for a in frontier:
            if a == x:
                return dist[a]
            for s in steps:
                for b in (a + s, a - s):
                    if lo <= b <= hi and b not in dist:
                        dist[b] = dist[a] + 1
                        nxt.append(b)
        frontier = nxt
    raise DomainError(f"{x} is not generated by {sorted(steps)}")
