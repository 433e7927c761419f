import itertools

import networkx as nx
import numpy as np
import pytest

from oracles import finite_from_nx, make_spec, median_closure, quasi_median_zoo, random_spec
from quasimedian.cayley import ball
from quasimedian.errors import DomainError, SpecParseError
from quasimedian.graph import chromatic_number
from quasimedian.isomorphism import are_isomorphic
from quasimedian.qmcheck import check_axioms, is_median
from quasimedian.walls import (
    SpaceWithPartitions,
    all_valid_orientations,
    ball_hyperplanes,
    ball_sector_walls,
    cubulate_sector_walls,
    format_walls,
    hyperplane_sectors,
    parse_walls,
    principal_orientation,
    quasi_cubulate,
    sector_partitions,
    sector_walls,
    self_cubulation_check,
    tree_embedding,
    wall_distance,
)

ZOO = quasi_median_zoo()


def random_space(rng, max_points=6, max_walls=5, max_sectors=3):
    """A random space with partitions; draws violating the nesting condition are redrawn."""
    while True:
        try:
            return _random_space(rng, max_points, max_walls, max_sectors)
        except DomainError:
            continue


def _random_space(rng, max_points, max_walls, max_sectors):
    n = rng.randint(2, max_points)
    pts = list(range(n))
    walls = []
    for _ in range(rng.randint(1, max_walls)):
        k = rng.randint(2, min(max_sectors, n))
        while True:
            lab = [rng.randrange(k) for _ in pts]
            if len(set(lab)) == k:
                break
        walls.append(tuple(frozenset(p for p in pts if lab[p] == i) for i in range(k)))
    return SpaceWithPartitions(pts, walls)


def test_orientation_distance_formula(rng):
    for _ in range(150):
        cub = quasi_cubulate(random_space(rng))
        d = cub.graph.distances
        for (i, s), (j, t) in itertools.combinations(enumerate(cub.orientations), 2):
            assert d[i, j] == wall_distance(s, t)


def test_output_is_quasi_median(rng):
    for _ in range(150):
        cub = quasi_cubulate(random_space(rng))
        assert check_axioms(cub.graph).ok


def test_search_matches_filtered_product(rng):
    for _ in range(150):
        space = random_space(rng)
        assert set(quasi_cubulate(space).orientations) == set(all_valid_orientations(space))


def test_principal_orientations_are_embedded():
    space = SpaceWithPartitions("abc", [({"a"}, {"b", "c"}), ({"a", "b"}, {"c"})])
    cub = quasi_cubulate(space)
    assert principal_orientation(space, "b") == (1, 0)
    assert cub.orientations[cub.embedding["b"]] == (1, 0)
    assert cub.graph.n == 3 and is_median(cub.graph)


def test_implications_and_nesting():
    space = SpaceWithPartitions(range(4), [({0}, {1, 2, 3}), ({0, 1}, {2, 3}), ({0, 2}, {1, 3})])
    assert (1, 0) in space.implications[(0, 0)]
    assert space.nested(0, 1)
    assert space.check_nesting() is None
    assert not space.is_valid((0, 1, 0))
    assert space.is_valid((1, 1, 0))


def test_duplicate_walls_are_kept():
    space = SpaceWithPartitions(range(2), [({0}, {1}), ({0}, {1})])
    assert not space.distinguishable(0, 1)
    assert quasi_cubulate(space).graph.n == 4


@pytest.mark.parametrize("name", sorted(ZOO))
def test_sector_wall_cubulation(name):
    g = ZOO[name]
    cub = cubulate_sector_walls(g)
    assert is_median(cub.graph)
    emb = np.array([cub.embedding[i] for i in range(g.n)])
    dsw = cub.graph.distances_from(emb)[:, emb]
    d = g.distances
    assert np.all(d <= dsw) and np.all(dsw <= 2 * d)
    two_sided = all(len(c.sectors) == 2 for c in g.hyperplanes.classes)
    assert np.array_equal(d, dsw) == two_sided


def test_two_sector_hyperplanes_give_one_wall():
    assert len(sector_walls(ZOO["C4"]).walls) == 2
    assert len(sector_walls(ZOO["K3"]).walls) == 3


@pytest.mark.parametrize("name", sorted(ZOO))
def test_self_cubulation(name):
    iso = self_cubulation_check(ZOO[name])
    assert iso is not None


def test_self_cubulation_of_a_path():
    g = finite_from_nx(nx.path_graph(5))
    assert len(sector_partitions(g).walls) == 4
    assert self_cubulation_check(g) is not None


def test_coxeter_ball_walls_give_the_median_hull(rng):
    for _ in range(8):
        spec = random_spec(rng, max_vertices=4, kinds=("C2",))
        b, big = ball(spec, 3), ball(spec, 6)
        keys = ball_hyperplanes(b)
        assert all(len(hyperplane_sectors(b, k)) == 2 for k in keys)
        hull = median_closure(big.graph, [big.vertex(w) for w in b.words])
        assert max(big.depth[v] for v in hull) < big.radius
        cub = quasi_cubulate(ball_sector_walls(b, keys))
        assert are_isomorphic(cub.graph, big.graph.induced(sorted(hull)))


def test_coxeter_ball_interior_when_median(rng):
    checked = 0
    for _ in range(10):
        spec = random_spec(rng, max_vertices=4, kinds=("C2",))
        b = ball(spec, 4)
        inner = b.graph.induced(sorted(b.interior(1)))
        if is_median(inner):
            checked += 1
            assert are_isomorphic(cubulate_sector_walls(inner).graph, inner)
    assert checked


def test_walls_file_round_trip():
    text = "point a\npoint b\npoint c\nwall a|b,c\nwall a,b|c  # comment\n"
    space = parse_walls(text)
    assert space.points == ("a", "b", "c")
    assert parse_walls(format_walls(space)).walls == space.walls
    bad_files = (
        "wall a|b\n",
        "point a\npoint b\nwall a|z\n",
        "point a\nwall a\n",
        "point a b\n",
        "point a\npoint b\nwall a|b\npoint c\n",
    )
    for bad in bad_files:
        with pytest.raises(SpecParseError):
            parse_walls(bad)


def test_space_validation():
    with pytest.raises(DomainError):
        SpaceWithPartitions("ab", [({"a", "b"},)])
    with pytest.raises(DomainError):
        SpaceWithPartitions("ab", [({"a"}, {"a", "b"})])
    with pytest.raises(DomainError, match="not nested"):
        SpaceWithPartitions("abc", [({"a"}, {"b"}, {"c"}), ({"a"}, {"b", "c"})])
    nested = SpaceWithPartitions("abcd", [({"a"}, {"b"}, {"c", "d"}), ({"a", "b"}, {"c"}, {"d"})])
    assert nested.nested(0, 1)


@pytest.mark.parametrize(
    "edges",
    [
        [("a", "b"), ("b", "c"), ("c", "d"), ("d", "e"), ("e", "a")],
        [("a", "b"), ("b", "c"), ("c", "d")],
        [("a", "b"), ("b", "c"), ("a", "c")],
    ],
)
def test_tree_embedding(edges):
    vs = sorted({v for e in edges for v in e})
    spec = make_spec(vs, edges, "C2")
    b = ball(spec, 4)
    te = tree_embedding(b)
    assert len(te.factors) == chromatic_number(spec.graph)[0]
    for f in te.factors:
        assert nx.is_tree(f.graph.to_networkx())
    inner = sorted(b.interior(1))
    for x, y in itertools.combinations(inner, 2):
        assert te.distance(x, y) == b.graph.distance(x, y)
    assert len(te.image(0)) == len(te.factors)


def test_tree_embedding_with_larger_groups():
    spec = make_spec("abc", [("a", "b"), ("b", "c")], {"a": "C3", "b": "Z", "c": "C2"})
    b = ball(spec, 3, bound=1)
    te = tree_embedding(b)
    inner = sorted(b.interior(1))
    for x, y in itertools.combinations(inner, 2):
        d = b.graph.distance(x, y)
        assert d <= te.distance(x, y) <= 2 * d


def test_improper_coloring_rejected():
    spec = make_spec("ab", [("a", "b")], "C2")
    with pytest.raises(DomainError, match="improper coloring"):
        tree_embedding(ball(spec, 2), {"a": 0, "b": 0})


def test_one_colour_suffices_for_a_free_product():
    spec = make_spec("ab", [], "C2")
    b = ball(spec, 3)
    te = tree_embedding(b, {"a": 0, "b": 0})
    assert len(te.factors) == 1
    assert are_isomorphic(te.factors[0].graph, b.graph)
