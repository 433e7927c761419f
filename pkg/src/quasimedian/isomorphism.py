"""Graph isomorphism by colour refinement with individualization and backtracking."""

from __future__ import annotations

from collections import Counter

from .errors import DomainError
from .qmcheck import FiniteGraph

ISOMORPHISM_CAP = 200


def _refine(g: FiniteGraph, h: FiniteGraph, cg: list[int], ch: list[int]) -> tuple[list[int], list[int]]:
    """Refine two colourings jointly so colour names mean the same in both graphs."""
    while True:
        sig_g = [(cg[v], tuple(sorted(cg[w] for w in g.adj[v]))) for v in range(g.n)]
        sig_h = [(ch[v], tuple(sorted(ch[w] for w in h.adj[v]))) for v in range(h.n)]
        names = {s: i for i, s in enumerate(sorted(set(sig_g) | set(sig_h)))}
        ng = [names[s] for s in sig_g]
        nh = [names[s] for s in sig_h]
        if len(set(ng)) == len(set(cg)) and len(set(nh)) == len(set(ch)):
            return ng, nh
        cg, ch = ng, nh


def find_isomorphism(g: FiniteGraph, h: FiniteGraph, cap: int = ISOMORPHISM_CAP) -> dict[int, int] | None:
    """A vertex bijection g -> h preserving adjacency, or None."""
    if max(g.n, h.n) > cap:
        raise DomainError(f"isomorphism search is capped at {cap} vertices")
    if g.n != h.n or len(g.edges) != len(h.edges):
        return None
    start_g = [len(g.adj[v]) for v in range(g.n)]
    start_h = [len(h.adj[v]) for v in range(h.n)]

    def search(cg: list[int], ch: list[int]) -> dict[int, int] | None:
        cg, ch = _refine(g, h, cg, ch)
        if Counter(cg) != Counter(ch):
            return None
        sizes = Counter(cg)
        if all(k == 1 for k in sizes.values()):
            where = {c: w for w, c in enumerate(ch)}
            mapping = {v: where[c] for v, c in enumerate(cg)}
            ok = all(h.has_edge(mapping[a], mapping[b]) for a, b in g.edges)
            return mapping if ok else None
        target = min((k, c) for c, k in sizes.items() if k > 1)[1]
        v = min(u for u in range(g.n) if cg[u] == target)
        fresh = max(max(cg), max(ch)) + 1
        for w in (u for u in range(h.n) if ch[u] == target):
            ng = list(cg)
            nh = list(ch)
            ng[v] = fresh
            nh[w] = fresh
            found = search(ng, nh)
            if found is not None:
                return found
        return None

    if g.n == 0:
        return {}
    return search(start_g, start_h)


def are_isomorphic(g: FiniteGraph, h: FiniteGraph, cap: int = ISOMORPHISM_CAP) -> bool:
    return find_isomorphism(g, h, cap) is not None
