"""Normal forms and the word problem in graph products of groups.

An element is stored as a canonical reduced word: a tuple of syllables
``(vertex, value)`` with no identity values, reduced (no two syllables of the
same vertex can be shuffled next to each other) and in the canonical shuffle
order chosen by :func:`canonicalize`.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from .errors import DomainError, SpecParseError
from .graph import SimplicialGraph
from .groups import VertexGroup

Syllable = tuple[str, int]


@dataclass(frozen=True, eq=False)
class GraphProduct:
    """A simplicial graph with a nontrivial group on every vertex."""

    graph: SimplicialGraph
    groups: Mapping[str, VertexGroup]

    def __post_init__(self):
        object.__setattr__(self, "groups", dict(self.groups))
        missing = [v for v in self.graph.vertices if v not in self.groups]
        if missing:
            raise DomainError(f"no group for vertex {missing[0]}")
        extra = [v for v in self.groups if v not in self.graph.index]
        if extra:
            raise DomainError(f"no such vertex: {extra[0]}")
        for g in self.groups.values():
            if g.order < 2:
                raise DomainError("trivial vertex group")

    @property
    def vertices(self) -> tuple[str, ...]:
        return self.graph.vertices

    @cached_property
    def identity(self) -> "NormalWord":
        return NormalWord((), self)

    def group(self, v: str) -> VertexGroup:
        try:
            return self.groups[v]
        except KeyError:
            raise DomainError(f"no such vertex: {v}") from None

    def induced(self, vs: Iterable[str]) -> "GraphProduct":
        sub = self.graph.induced(vs)
        return GraphProduct(sub, {v: self.groups[v] for v in sub.vertices})

    def word(self, text: str) -> "NormalWord":
        return reduce(self, parse_syllables(self, text))

    def syllable(self, v: str, value: int = 1) -> "NormalWord":
        return reduce(self, [(v, value)])

    def is_finite(self) -> bool:
        return self.graph.is_complete() and all(g.is_finite for g in self.groups.values())


@dataclass(frozen=True)
class NormalWord:
    """Canonical reduced word; equality and hashing use the syllables only."""

    syllables: tuple[Syllable, ...]
    spec: GraphProduct = field(compare=False, repr=False)

    def __len__(self) -> int:
        return len(self.syllables)

    def __mul__(self, other: "NormalWord") -> "NormalWord":
        return multiply(self, other)

    def inverse(self) -> "NormalWord":
        return inverse(self)

    def __str__(self) -> str:
        return format_word(self.syllables)

    @property
    def support(self) -> frozenset[str]:
        return frozenset(v for v, _ in self.syllables)

    @property
    def head(self) -> frozenset[Syllable]:
        return frozenset(self.syllables[i] for i in _front_movable(self.spec.graph, self.syllables))

    @property
    def tail(self) -> frozenset[Syllable]:
        return frozenset(self.syllables[i] for i in _back_movable(self.spec.graph, self.syllables))


def format_word(syllables: Sequence[Syllable]) -> str:
    return "*".join(f"{v}:{k}" for v, k in syllables) if syllables else "e"


def parse_syllables(spec: GraphProduct, text: str) -> list[Syllable]:
    """Parse ``u:1*v:-2`` (or ``e``) into raw syllables, values normalized."""
    text = text.strip()
    if text == "e":
        return []
    out = []
    for part in text.split("*"):
        vertex, sep, value = part.strip().rpartition(":")
        if not sep or not vertex:
            raise SpecParseError(f"malformed syllable {part!r}")
        try:
            k = int(value)
        except ValueError:
            raise SpecParseError(f"malformed syllable {part!r}") from None
        if vertex not in spec.graph.index:
            raise SpecParseError(f"no such vertex: {vertex}")
        out.append((vertex, spec.groups[vertex].normalize(k)))
    return out


def _front_movable(g: SimplicialGraph, syl: Sequence[Syllable]) -> list[int]:
    """Positions whose syllable can be shuffled to the front."""
    adj = g.adjacency
    out = []
    blockers: list[str] = []
    for i, (v, _) in enumerate(syl):
        if all(b in adj[v] for b in blockers):
            out.append(i)
        blockers.append(v)
    return out


def _back_movable(g: SimplicialGraph, syl: Sequence[Syllable]) -> list[int]:
    n = len(syl)
    rev = _front_movable(g, syl[::-1])
    return sorted(n - 1 - i for i in rev)


def _append(spec: GraphProduct, syl: list[Syllable], h: Syllable) -> None:
    """Right-multiply the reduced word ``syl`` in place by one syllable."""
    u, value = h
    group = spec.groups[u]
    if value == group.identity:
        return
    adj = spec.graph.adjacency[u]
    for i in range(len(syl) - 1, -1, -1):
        v, a = syl[i]
        if v == u:
            merged = group.multiply(a, value)
            del syl[i]
            if merged != group.identity:
                syl.append((u, merged))
            return
        if v not in adj:
            break
    syl.append(h)


def canonicalize(spec: GraphProduct, syllables: Sequence[Syllable]) -> tuple[Syllable, ...]:
    """Canonical shuffle order of a reduced word.

    Repeatedly move to the front the front-movable syllable whose vertex comes
    first in declaration order. Implemented as a smallest-first topological
    sort of the "must stay before" order between non-commuting syllables.
    """
    order = spec.graph.index
    adj = spec.graph.adjacency
    n = len(syllables)
    later: list[list[int]] = [[] for _ in range(n)]
    waiting = [0] * n
    for i in range(n):
        vi = syllables[i][0]
        for j in range(i + 1, n):
            if syllables[j][0] not in adj[vi]:
                later[i].append(j)
                waiting[j] += 1
    ready = [(order[syllables[i][0]], i) for i in range(n) if not waiting[i]]
    heapq.heapify(ready)
    out = []
    while ready:
        _, i = heapq.heappop(ready)
        out.append(syllables[i])
        for j in later[i]:
            waiting[j] -= 1
            if not waiting[j]:
                heapq.heappush(ready, (order[syllables[j][0]], j))
    return tuple(out)


def reduce(spec: GraphProduct, syllables: Iterable[Syllable]) -> NormalWord:
    syl: list[Syllable] = []
    for v, k in syllables:
        if v not in spec.graph.index:
            raise DomainError(f"no such vertex: {v}")
        _append(spec, syl, (v, spec.groups[v].normalize(k)))
    return NormalWord(canonicalize(spec, syl), spec)


def _same_spec(a: NormalWord, b: NormalWord) -> None:
    if a.spec is not b.spec:
        raise DomainError("words belong to different graph products")


def multiply(a: NormalWord, b: NormalWord) -> NormalWord:
    _same_spec(a, b)
    spec = a.spec
    syl = list(a.syllables)
    for h in b.syllables:
        _append(spec, syl, h)
    return NormalWord(canonicalize(spec, syl), spec)


def inverse(a: NormalWord) -> NormalWord:
    spec = a.spec
    syl = tuple((v, spec.groups[v].inverse(k)) for v, k in reversed(a.syllables))
    return NormalWord(canonicalize(spec, syl), spec)


def equal(a: NormalWord, b: NormalWord) -> bool:
    _same_spec(a, b)
    return a.syllables == b.syllables


def is_reduced(spec: GraphProduct, syllables: Sequence[Syllable]) -> bool:
    """No identity syllable and no same-vertex pair that can be shuffled together."""
    adj = spec.graph.adjacency
    for i, (v, k) in enumerate(syllables):
        if k == spec.groups[v].identity:
            return False
        for j in range(i + 1, len(syllables)):
            w = syllables[j][0]
            if w == v:
                return False
            if w not in adj[v]:
                break
    return True


def strip_tail(spec: GraphProduct, word: NormalWord, allowed: frozenset[str]) -> NormalWord:
    """Remove the largest suffix (up to shuffling) supported on ``allowed``.

    The result is the shortest element of the coset ``word * <allowed>``.
    """
    adj = spec.graph.adjacency
    kept: list[Syllable] = []
    for v, k in reversed(word.syllables):
        if v in allowed and all(w in adj[v] for w, _ in kept):
            continue
        kept.append((v, k))
    return NormalWord(canonicalize(spec, kept[::-1]), spec)


def strip_head(spec: GraphProduct, word: NormalWord, allowed: frozenset[str]) -> NormalWord:
    """Remove the largest prefix (up to shuffling) supported on ``allowed``."""
    return inverse(strip_tail(spec, inverse(word), allowed))


def head_value(word: NormalWord, vertex: str) -> int:
    """Value of the head syllable at ``vertex``, or the identity if there is none."""
    for v, k in word.head:
        if v == vertex:
            return k
    return word.spec.groups[vertex].identity


def quotient_head_value(a: NormalWord, b: NormalWord, vertex: str) -> int:
    """``head_value(a^-1 * b, vertex)`` without building the canonical form.

    The head does not depend on the shuffle order, so the reduced product is
    scanned as it comes out of the append rule.
    """
    _same_spec(a, b)
    spec = a.spec
    syl = [(v, spec.groups[v].inverse(k)) for v, k in reversed(a.syllables)]
    for h in b.syllables:
        _append(spec, syl, h)
    adj = spec.graph.adjacency[vertex]
    for v, k in syl:
        if v == vertex:
            return k
        if v not in adj:
            break
    return spec.groups[vertex].identity
