"""Canonical elements over a shift model with a connected graph.

With O = U = Z and phi multiplication by m, the normal closure N of U is the
ascending union of the conjugates s^-k U s^k.  Reduced pairs (k, u) stand for
s^-k u s^k and are identified with Z[1/m] via (k, u) |-> u / m^k.  Every
element splits uniquely as n * a with n in N and a an Artin word, and every
Artin generator conjugates N by one shift:

    a * (k, u) * a^-1  =  (k, u) scaled by m^e(a).

That law is derived, not displayed, so it ships with two oracles: the
conjugation-agreement test across generator pairs and the Britton cross-check
against the one-letter HNN of U (see ``britton`` and the test suite).
"""

from __future__ import annotations

from dataclasses import dataclass

from . import words as W
from .errors import DisconnectedGraph, RegimeMismatch
from .graphs import Graph
from .models import INFINITE, NPair, ShiftModel
from .elements import Engine, gen_token, u_token


@dataclass(frozen=True)
class SemidirectElement:
    """n * a with n a reduced pair in the normal closure and a canonical."""

    n: NPair
    a: W.Word


class SemidirectEngine(Engine):
    regime = "semidirect"

    def __init__(self, model: ShiftModel, graph: Graph):
        if not model.is_shrinking:
            raise RegimeMismatch("semidirect engine needs O = U with phi shrinking")
        if not graph.is_connected():
            raise DisconnectedGraph("semidirect engine needs a connected graph")
        super().__init__(model, graph)

    def identity(self):
        return SemidirectElement(NPair(0, 0), ())

    def make(self, n: NPair, a: W.Word) -> SemidirectElement:
        return SemidirectElement(self.model.reduce_pair(n.k, n.u), W.normal_form(self.graph, a))

    def from_tokens(self, tokens):
        out = self.identity()
        for tok in tokens:
            out = self.mul_token(out, tok)
        return out

    def mul_token(self, g, token):
        m = self.model
        if token[0] == "u":
            shifted = m.pair_shift(m.pair_of_u(token[1]), W.exponent(g.a))
            return SemidirectElement(m.pair_mul(g.n, shifted), g.a)
        _, gen, sign = token
        return SemidirectElement(g.n, W.multiply(self.graph, g.a, W.single(gen, sign)))

    def mul(self, g, h):
        m = self.model
        conj = m.pair_shift(h.n, W.exponent(g.a))
        return SemidirectElement(m.pair_mul(g.n, conj), W.multiply(self.graph, g.a, h.a))

    def inv(self, g):
        m = self.model
        n_inv = m.pair_shift(m.pair_inv(g.n), -W.exponent(g.a))
        return SemidirectElement(n_inv, W.invert(self.graph, g.a))

    def key(self, g):
        return ((g.n.k, g.n.u), g.a)

    def tokens_of(self, g):
        s = self.graph.vertices[0]
        toks = []
        toks.extend([gen_token(s, -1)] * g.n.k)
        if g.n.u:
            toks.append(u_token(g.n.u))
        toks.extend([gen_token(s, 1)] * g.n.k)
        toks.extend(gen_token(gen, e) for gen, e in g.a)
        return tuple(toks)

    def is_in_U(self, g):
        return not g.a and g.n.k == 0

    def u_value(self, g):
        if not self.is_in_U(g):
            raise ValueError("element is not in U")
        return g.n.u

    def exponent(self, g):
        return W.exponent(g.a)

    def a_part(self, g):
        return g.a

    def n_part(self, g):
        return SemidirectElement(g.n, ())

    def coset_rep(self, g):
        # gU = g'U iff the Artin parts agree and the n-parts agree modulo
        # s^e U s^-e with e the common exponent
        e = W.exponent(g.a)
        return SemidirectElement(self.model.pair_mod(g.n, e), g.a)

    def apartment_key(self, n):
        # the pointwise stabiliser of the base apartment is trivial here
        if n.a:
            raise ValueError("apartment keys take elements of the normal closure")
        return (n.n.k, n.n.u)

    def latitude(self, g):
        """Latitude of an element of the normal closure."""
        if g.a:
            raise ValueError("latitude takes elements of the normal closure")
        return self.model.pair_latitude(g.n)

    def format(self, g):
        n_str = f"({self.model.format_u(g.n.u)}/{self.model.m}^{g.n.k})"
        a_str = W.format_word(g.a) or "1"
        return f"{n_str} * {a_str}"


def epsilon_latitude(model: ShiftModel, n: NPair):
    """Largest e with n inside s^e O s^-e; +inf only for the identity."""
    if not isinstance(model, ShiftModel):
        raise RegimeMismatch("latitude is defined over shift models")
    return model.pair_latitude(model.reduce_pair(n.k, n.u))


def semi_of_word(model: ShiftModel, graph: Graph, tokens) -> SemidirectElement:
    return SemidirectEngine(model, graph).from_tokens(tokens)


def random_semidirect_tokens(model: ShiftModel, graph: Graph, rng, length: int):
    """Random token word over U and the generators, for sampling tests."""
    toks = []
    for _ in range(length):
        if rng.random() < 0.4:
            toks.append(u_token(rng.randint(-3 * model.m, 3 * model.m)))
        else:
            toks.append(gen_token(rng.choice(graph.vertices), rng.choice((1, -1))))
    return tuple(toks)


__all__ = [
    "SemidirectElement",
    "SemidirectEngine",
    "epsilon_latitude",
    "semi_of_word",
    "random_semidirect_tokens",
    "INFINITE",
]
