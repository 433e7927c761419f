import itertools

import networkx as nx
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import simplicial_from_nx
from quasimedian.errors import DomainError
from quasimedian.graph import (
    SimplicialGraph,
    chromatic_number,
    clique_number,
    complement_components,
    find_induced_square,
    is_proper_coloring,
    is_square_free,
    join_decompositions,
    link,
    max_clique,
    star,
)


@st.composite
def graphs(draw, max_n=10):
    n = draw(st.integers(1, max_n))
    vs = [f"v{i}" for i in range(n)]
    pairs = list(itertools.combinations(vs, 2))
    mask = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return SimplicialGraph.from_edges(vs, [p for p, keep in zip(pairs, mask) if keep])


def cycle(n):
    vs = [f"v{i}" for i in range(n)]
    return SimplicialGraph.from_edges(vs, [(vs[i], vs[(i + 1) % n]) for i in range(n)])


def test_link_and_star():
    g = SimplicialGraph.from_edges("abc", [("a", "b"), ("b", "c")])
    assert link(g, "b") == {"a", "c"}
    assert star(g, "a") == {"a", "b"}
    with pytest.raises(DomainError, match="no such vertex: z"):
        link(g, "z")


def test_rejects_malformed_graphs():
    with pytest.raises(DomainError):
        SimplicialGraph(("a", "a"))
    with pytest.raises(DomainError):
        SimplicialGraph.from_edges("ab", [("a", "z")])


def test_four_cycle_is_a_square():
    sq = find_induced_square(cycle(4))
    assert sq is not None and set(sq) == {"v0", "v1", "v2", "v3"}
    assert is_square_free(cycle(5)) == (True, None)


@given(graphs())
def test_square_free_matches_brute_force(g):
    def induced_square(quad):
        sub = g.induced(quad)
        degrees = [len(sub.adjacency[v]) for v in quad]
        return len(sub.edges) == 4 and all(d == 2 for d in degrees)

    brute = any(induced_square(q) for q in itertools.combinations(g.vertices, 4))
    ok, witness = is_square_free(g)
    assert ok == (not brute)
    if witness:
        a, b, c, d = witness
        assert g.adjacent(a, b) and g.adjacent(b, c) and g.adjacent(c, d) and g.adjacent(d, a)
        assert not g.adjacent(a, c) and not g.adjacent(b, d)


@given(graphs())
def test_clique_at_most_chromatic(g):
    k, coloring = chromatic_number(g)
    assert clique_number(g) <= k
    assert is_proper_coloring(g, coloring)
    assert len(set(coloring.values())) == k
    h = nx.Graph(list(map(tuple, g.edges)))
    h.add_nodes_from(g.vertices)
    assert clique_number(g) == max(len(c) for c in nx.find_cliques(h))
    assert g.is_complete(max_clique(g))


def test_coloring_validator():
    g = cycle(3)
    assert not is_proper_coloring(g, {"v0": 0, "v1": 0, "v2": 1})
    assert not is_proper_coloring(g, {"v0": 0, "v1": 1})
    assert chromatic_number(cycle(5))[0] == 3
    assert chromatic_number(cycle(6))[0] == 2


def test_exact_caps():
    big = simplicial_from_nx(nx.empty_graph(17))
    with pytest.raises(DomainError):
        chromatic_number(big)


@given(graphs(max_n=8), st.data())
def test_join_decompositions_match_brute_force(g, data):
    sub = data.draw(st.sets(st.sampled_from(g.vertices), min_size=1))
    vs = g.sorted(sub)
    brute = set()
    for r in range(1, len(vs)):
        for left in itertools.combinations(vs, r):
            right = set(vs) - set(left)
            if all(g.adjacent(a, b) for a in left for b in right):
                brute.add(frozenset([frozenset(left), frozenset(right)]))
    found = join_decompositions(g, vs)
    assert {frozenset(p) for p in found} == brute
    assert len(found) == len(brute)
    comps = complement_components(g, vs)
    for left, _ in found:
        assert comps[0] <= left


def test_complement_components_of_a_join():
    g = SimplicialGraph.from_edges("abcd", [("a", "c"), ("a", "d"), ("b", "c"), ("b", "d")])
    assert complement_components(g, "abcd") == [frozenset("ab"), frozenset("cd")]
