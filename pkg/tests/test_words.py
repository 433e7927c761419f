import itertools
from pathlib import Path

import numpy as np
import pytest

from oracles import (
    brute_canonical,
    direct_product_value,
    make_spec,
    random_spec,
    random_syllables,
    rewrite_randomly,
    shuffle_class,
    sympy_element_map,
    tits_matrix,
)
from quasimedian.errors import DomainError, SpecParseError
from quasimedian.groups import load_table
from quasimedian.words import (
    canonicalize,
    equal,
    head_value,
    is_reduced,
    parse_syllables,
    quotient_head_value,
    reduce,
    strip_head,
    strip_tail,
)


def square():
    return make_spec("abcd", [("a", "b"), ("b", "c"), ("c", "d"), ("d", "a")], "C2")


def test_parse_and_format_round_trip():
    s = make_spec("uv", [("u", "v")], {"u": "C3", "v": "Z"})
    w = s.word("u:1*v:-2*u:1")
    assert str(w) == "u:2*v:-2"
    assert str(s.word("e")) == "e"
    assert s.word(str(w)) == w
    assert parse_syllables(s, "u:4") == [("u", 1)]


@pytest.mark.parametrize("text", ["u", "u:x", ":1", "w:1", "u:1**v:1"])
def test_malformed_words(text):
    s = make_spec("uv", [], "C2")
    with pytest.raises(SpecParseError):
        s.word(text)


def test_identity_syllables_are_dropped():
    s = make_spec("uv", [], {"u": "C3", "v": "Z"})
    assert s.word("u:3*v:0*u:0") == s.identity


def test_free_and_commuting_products():
    free = make_spec("ab", [], "Z")
    assert str(free.word("a:1*b:1*a:-1")) == "a:1*b:1*a:-1"
    comm = make_spec("ab", [("a", "b")], "Z")
    assert str(comm.word("b:1*a:1*b:-1")) == "a:1"
    assert str(comm.word("b:2*a:3")) == "a:3*b:2"


def test_shuffle_then_amalgamate():
    s = make_spec("abc", [("a", "b")], {"a": "C3", "b": "Z", "c": "C2"})
    assert str(s.word("a:1*b:1*a:1")) == "a:2*b:1"
    assert str(s.word("a:1*c:1*b:1*a:1")) == "a:1*c:1*a:1*b:1"


def test_canonical_form_is_lexicographically_least(rng):
    for _ in range(100):
        spec = random_spec(rng, max_vertices=5, kinds=("C2", "C3", "Z"))
        raw = random_syllables(rng, spec, rng.randint(0, 7))
        w = reduce(spec, raw)
        assert w.syllables == brute_canonical(spec, w.syllables)


def test_confluence_under_random_rule_orders(rng):
    for _ in range(200):
        spec = random_spec(rng, max_vertices=4)
        raw = random_syllables(rng, spec, rng.randint(0, 10))
        expected = reduce(spec, raw).syllables
        for _ in range(10):
            out = rewrite_randomly(spec, raw, rng)
            assert is_reduced(spec, out)
            assert canonicalize(spec, out) == expected


def test_reduce_never_lengthens(rng):
    for _ in range(300):
        spec = random_spec(rng)
        raw = random_syllables(rng, spec, rng.randint(0, 10))
        w = reduce(spec, raw)
        assert len(w) <= len(raw)
        assert (len(w) == len(raw)) == is_reduced(spec, [(v, spec.groups[v].normalize(k)) for v, k in raw])


def test_group_laws(rng):
    for _ in range(100):
        spec = random_spec(rng)
        a, b, c = (reduce(spec, random_syllables(rng, spec, rng.randint(0, 6))) for _ in range(3))
        assert (a * b) * c == a * (b * c)
        assert a * a.inverse() == spec.identity == a.inverse() * a
        assert a * spec.identity == a
        assert (a * b).inverse() == b.inverse() * a.inverse()


FINITE_SPECS = [
    ("C2xC3", "ab", [("a", "b")], {"a": "C2", "b": "C3"}),
    ("C3xC4", "ab", [("a", "b")], {"a": "C3", "b": "C4"}),
    ("C2^3", "abc", [("a", "b"), ("b", "c"), ("a", "c")], "C2"),
    ("C3xC3xC4", "abc", [("a", "b"), ("b", "c"), ("a", "c")], {"a": "C3", "b": "C3", "c": "C4"}),
    ("C2^4xC3", "abcde", list(itertools.combinations("abcde", 2)), {"a": "C2", "b": "C2", "c": "C2", "d": "C2", "e": "C3"}),
]


@pytest.mark.parametrize("name, vs, edges, groups", FINITE_SPECS, ids=[s[0] for s in FINITE_SPECS])
def test_equal_matches_coset_enumeration(name, vs, edges, groups, rng):
    spec = make_spec(vs, edges, groups)
    element, order = sympy_element_map(spec)
    assert order <= 200
    words = [random_syllables(rng, spec, rng.randint(0, 8)) for _ in range(150)]
    reduced = [reduce(spec, w) for w in words]
    seen = set()
    for w, r in zip(words, reduced):
        seen.add(r)
        assert element(w) == element(r.syllables)
        assert direct_product_value(spec, w) == direct_product_value(spec, r.syllables)
    for (w1, r1), (w2, r2) in itertools.combinations(list(zip(words, reduced))[:60], 2):
        assert equal(r1, r2) == (element(w1) == element(w2))
    assert len(seen) <= order


def test_equal_with_table_group(rng):
    s3 = load_table(Path(__file__).parent / "data" / "s3.txt")
    spec = make_spec("ab", [("a", "b")], {"a": s3, "b": "C2"})
    for _ in range(200):
        w1 = random_syllables(rng, spec, rng.randint(0, 8))
        w2 = random_syllables(rng, spec, rng.randint(0, 8))
        truth = direct_product_value(spec, w1) == direct_product_value(spec, w2)
        assert equal(reduce(spec, w1), reduce(spec, w2)) == truth


def test_right_angled_coxeter_word_problem(rng):
    for _ in range(40):
        spec = random_spec(rng, max_vertices=5, kinds=("C2",))
        for _ in range(10):
            w = random_syllables(rng, spec, rng.randint(0, 12))
            r = reduce(spec, w)
            assert np.array_equal(tits_matrix(spec, w), tits_matrix(spec, r.syllables))
            assert (len(r) == 0) == np.array_equal(tits_matrix(spec, w), np.eye(len(spec.vertices), dtype=np.int64))


def test_head_and_tail_are_shuffle_invariant(rng):
    for _ in range(60):
        spec = random_spec(rng, max_vertices=5)
        w = reduce(spec, random_syllables(rng, spec, rng.randint(0, 7)))
        variants = sorted(shuffle_class(spec, w.syllables))
        for alt in rng.sample(variants, min(5, len(variants))):
            assert reduce(spec, alt) == w
            first = {alt[i] for i in range(len(alt)) if all(alt[j][0] in spec.graph.adjacency[alt[i][0]] for j in range(i))}
            assert first <= w.head
        heads = {alt[0] for alt in variants if alt}
        tails = {alt[-1] for alt in variants if alt}
        assert heads == set(w.head)
        assert tails == set(w.tail)


def test_strip_tail_gives_shortest_coset_element(rng):
    for _ in range(60):
        spec = random_spec(rng, max_vertices=4, kinds=("C2", "C3"))
        w = reduce(spec, random_syllables(rng, spec, rng.randint(0, 6)))
        allowed = frozenset(rng.sample(spec.vertices, rng.randint(1, len(spec.vertices))))
        short = strip_tail(spec, w, allowed)
        # every element of the coset within a few syllables is at least as long
        extra = [reduce(spec, random_syllables(rng, spec.induced(allowed), rng.randint(0, 4))) for _ in range(20)]
        assert all(len(short) <= len(short * reduce(spec, x.syllables)) for x in extra)
        assert (short.inverse() * w).support <= allowed
        assert (w * strip_head(spec, w, allowed).inverse()).support <= allowed


def test_quotient_head_value_matches_head_value(rng):
    for _ in range(200):
        spec = random_spec(rng)
        a, b = (reduce(spec, random_syllables(rng, spec, rng.randint(0, 6))) for _ in range(2))
        for v in spec.vertices:
            assert quotient_head_value(a, b, v) == head_value(a.inverse() * b, v)


def test_mixing_specs_is_an_error():
    s1, s2 = square(), square()
    with pytest.raises(DomainError):
        s1.word("a:1") * s2.word("a:1")
