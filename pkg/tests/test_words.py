import random

import pytest

from topraag import words as W
from topraag.errors import NotAJoinFactor, UnknownGenerator, WordLengthCap
from topraag.graphs import (
    complete_graph,
    cycle_graph,
    edge_graph,
    edgeless_graph,
    path_graph,
)

EDGE = edge_graph()
C4 = cycle_graph("abcd")

GRAPH_ZOO = [
    EDGE,
    C4,
    complete_graph("xyz"),
    path_graph("pqr"),
    edgeless_graph("uv"),
    complete_graph("wxyz"),
]


def test_parse_format_roundtrip():
    w = W.parse_word("s t^-1 s")
    assert w == (("s", 1), ("t", -1), ("s", 1))
    assert W.format_word(w) == "s t^-1 s"
    assert W.parse_word("s^2 t^-2") == (("s", 1), ("s", 1), ("t", -1), ("t", -1))


def test_normal_form_edge_examples():
    # commuting letters sort: t s -> s t
    assert W.normal_form(EDGE, W.parse_word("t s")) == W.parse_word("s t")
    # defining relator dies
    assert W.normal_form(EDGE, W.parse_word("s t s^-1 t^-1")) == ()
    # free group: only free reduction
    free = edgeless_graph("st")
    w = W.parse_word("s t s^-1")
    assert W.normal_form(free, w) == w


def test_normal_form_idempotent_and_oracle():
    rng = random.Random(1)
    for _ in range(500):
        g = rng.choice(GRAPH_ZOO)
        n = rng.randint(0, 6)
        w = tuple((rng.choice(g.vertices), rng.choice((1, -1))) for _ in range(n))
        nf = W.normal_form(g, w)
        assert W.normal_form(g, nf) == nf
        assert nf == W.normal_form_bruteforce(g, w)


def test_normal_form_exhaustive_short_words():
    # every word of length <= 6 over the edge graph and <= 4 over two
    # larger graphs, against the full shuffle-class oracle
    from itertools import product

    letters = [(v, e) for v in EDGE.vertices for e in (1, -1)]
    for n in range(7):
        for w in product(letters, repeat=n):
            assert W.normal_form(EDGE, w) == W.normal_form_bruteforce(EDGE, w)
    for g in [path_graph("pqr"), cycle_graph("abcd")]:
        letters = [(v, e) for v in g.vertices for e in (1, -1)]
        for n in range(5):
            for w in product(letters, repeat=n):
                assert W.normal_form(g, w) == W.normal_form_bruteforce(g, w)


def test_equality_iff_same_normal_form():
    # two spellings of the same element agree; distinct elements do not
    g = C4
    w1 = W.parse_word("a b c")
    w2 = W.parse_word("b a c")
    assert W.normal_form(g, w1) == W.normal_form(g, w2)
    assert W.normal_form(g, W.parse_word("a c")) != W.normal_form(g, W.parse_word("c a"))


def test_multiply_invert():
    assert W.multiply(EDGE, W.parse_word("s"), W.parse_word("s^-1")) == ()
    assert W.multiply(EDGE, W.parse_word("s"), W.parse_word("t")) == W.parse_word("s t")
    assert W.multiply(EDGE, W.parse_word("t"), W.parse_word("s")) == W.parse_word("s t")
    w = W.parse_word("s t")
    assert W.invert(EDGE, w) == W.normal_form(EDGE, W.free_invert(w))
    rng = random.Random(2)
    for _ in range(200):
        g = rng.choice(GRAPH_ZOO)
        n = rng.randint(0, 5)
        w = W.normal_form(g, tuple((rng.choice(g.vertices), rng.choice((1, -1))) for _ in range(n)))
        assert W.multiply(g, w, W.invert(g, w)) == ()


def test_exponent():
    assert W.exponent(W.parse_word("s t^-1")) == 0
    assert W.exponent(W.parse_word("s s t")) == 3
    assert W.exponent(W.parse_word("s t s^-1 t^-1")) == 0
    rng = random.Random(3)
    for _ in range(100):
        g = rng.choice(GRAPH_ZOO)
        w1 = tuple((rng.choice(g.vertices), rng.choice((1, -1))) for _ in range(rng.randint(0, 5)))
        w2 = tuple((rng.choice(g.vertices), rng.choice((1, -1))) for _ in range(rng.randint(0, 5)))
        assert W.exponent(W.multiply(g, w1, w2)) == W.exponent(w1) + W.exponent(w2)


def test_is_balanced():
    assert W.is_balanced([W.parse_word("s t s^-1 t^-1")])
    assert not W.is_balanced([W.parse_word("x x")])
    surface = W.parse_word("a1 b1 a1^-1 b1^-1 a2 b2 a2^-1 b2^-1")
    assert W.is_balanced([surface])


def test_parabolic_project():
    # C4 = {a,c} join {b,d}
    w = W.parse_word("a b c")
    proj = W.parabolic_project(C4, ["a", "c"], w)
    assert proj == W.normal_form(C4.induced(["a", "c"]), W.parse_word("a c"))
    assert W.parabolic_project(EDGE, ["s", "t"], W.parse_word("s t")) == W.parse_word("s t")
    assert W.parabolic_project(EDGE, ["s"], W.parse_word("s t")) == W.parse_word("s")
    with pytest.raises(NotAJoinFactor):
        W.parabolic_project(C4, ["a", "b"], w)


def test_parabolic_project_is_retraction():
    # project after inclusion is the identity on the factor
    rng = random.Random(4)
    sub = C4.induced(["a", "c"])
    for _ in range(100):
        w = W.normal_form(sub, tuple((rng.choice("ac"), rng.choice((1, -1))) for _ in range(rng.randint(0, 5))))
        assert W.parabolic_project(C4, ["a", "c"], w) == w


def test_parabolic_project_is_homomorphism():
    rng = random.Random(5)
    for _ in range(100):
        w1 = tuple((rng.choice("abcd"), rng.choice((1, -1))) for _ in range(rng.randint(0, 4)))
        w2 = tuple((rng.choice("abcd"), rng.choice((1, -1))) for _ in range(rng.randint(0, 4)))
        lhs = W.parabolic_project(C4, ["a", "c"], W.multiply(C4, w1, w2))
        sub = C4.induced(["a", "c"])
        rhs = W.multiply(sub, W.parabolic_project(C4, ["a", "c"], w1), W.parabolic_project(C4, ["a", "c"], w2))
        assert lhs == rhs


def test_complete_graph_abelianisation():
    g = complete_graph("xyz")
    rng = random.Random(6)
    for _ in range(100):
        w = tuple((rng.choice("xyz"), rng.choice((1, -1))) for _ in range(rng.randint(0, 6)))
        nf = W.normal_form(g, w)
        counts = {}
        for gen, e in w:
            counts[gen] = counts.get(gen, 0) + e
        expect = []
        for gen in g.vertices:
            c = counts.get(gen, 0)
            expect.extend([(gen, 1 if c > 0 else -1)] * abs(c))
        assert nf == tuple(expect)


def test_unknown_generator_and_cap():
    with pytest.raises(UnknownGenerator):
        W.normal_form(EDGE, W.parse_word("x"))
    with pytest.raises(WordLengthCap):
        W.normal_form(EDGE, (("s", 1),) * (W.WORD_LENGTH_CAP + 1))
