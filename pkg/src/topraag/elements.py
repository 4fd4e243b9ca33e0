"""Exact element arithmetic in the group generated by a base model U and the
Artin generators of a graph, in the regimes where a canonical form exists.

Regimes and engines
-------------------
* phi(O) = O ("automorphic"):  elements are normal sequences
  (u0, a1, u1, ..., an, un) with the a_i nontrivial canonical Artin words and
  u1..u_{n-1} nontrivial right-coset representatives; left multiplication by
  a generator letter rewrites the sequence through a three-case rule and
  to_normal_sequence folds a word letter by letter.
* O = U with phi shrinking and the graph connected: see ``semidirect``.
* edgeless graphs over any model: see ``britton``.

``engine_for`` picks the right engine; all engines share the Engine API used
by the cube-complex builder.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import words as W
from .errors import RegimeMismatch, RelationViolation, UnknownGenerator
from .graphs import Graph
from .models import BaseModel

# A token is either ("u", element-of-U) or ("gen", generator, +1/-1).
Token = tuple


def u_token(u) -> Token:
    return ("u", u)


def gen_token(gen: str, e: int) -> Token:
    return ("gen", gen, e)


def parse_tokens(model: BaseModel, g: Graph, text: str) -> tuple[Token, ...]:
    """Parse "s 3 t^-1" / "s perm[1,0,2]" style element words."""
    out = []
    for tok in text.split():
        base = tok.partition("^")[0]
        if base in g._adj:
            if "^" in tok:
                n = int(tok.partition("^")[2])
            else:
                n = 1
            sign = 1 if n > 0 else -1
            out.extend([gen_token(base, sign)] * abs(n))
        else:
            out.append(u_token(model.parse_u(tok)))
    return tuple(out)


def invert_tokens(model: BaseModel, toks) -> tuple[Token, ...]:
    out = []
    for t in reversed(toks):
        if t[0] == "u":
            out.append(u_token(model.inv(t[1])))
        else:
            out.append(gen_token(t[1], -t[2]))
    return tuple(out)


@dataclass(frozen=True)
class NormalSequence:
    """Canonical representative (head, ((a1, u1), ..., (an, un)))."""

    head: object
    tail: tuple

    @property
    def length(self) -> int:
        return len(self.tail)


def validate_normal_sequence(model: BaseModel, g: Graph, seq: NormalSequence) -> None:
    reps = set(model.transversal_R())
    ident = model.identity()
    n = seq.length
    for i, (a, u) in enumerate(seq.tail):
        if not a or W.normal_form(g, a) != a:
            raise ValueError(f"tail word {i} is not a nontrivial canonical word")
        if u not in reps:
            raise ValueError(f"tail entry {i} is not a transversal representative")
        if i < n - 1 and u == ident:
            raise ValueError(f"intermediate entry {i} must be nontrivial")


def base_sequence(model: BaseModel, u=None) -> NormalSequence:
    return NormalSequence(model.identity() if u is None else u, ())


def act_letter(model: BaseModel, g: Graph, token: Token, seq: NormalSequence) -> NormalSequence:
    """Left multiplication of a normal sequence by one letter."""
    if not model.is_automorphic:
        raise RegimeMismatch("normal sequences need phi(O) = O")
    if token[0] == "u":
        return NormalSequence(model.mul(token[1], seq.head), seq.tail)
    _, gen, sign = token
    if gen not in g._adj:
        raise UnknownGenerator(f"{gen!r} is not a vertex of the graph")
    omega, u_hat = model.decompose(seq.head)
    phi_pow = model.phi if sign == 1 else model.phi_inv
    ident = model.identity()
    letter = W.single(gen, sign)
    if seq.length == 0 or u_hat != ident:
        return NormalSequence(phi_pow(omega), ((letter, u_hat),) + seq.tail)
    a1, u1 = seq.tail[0]
    rest = seq.tail[1:]
    if a1 == W.single(gen, -sign):
        return NormalSequence(model.mul(phi_pow(seq.head), u1), rest)
    merged = W.multiply(g, letter, a1)
    return NormalSequence(phi_pow(seq.head), ((merged, u1),) + rest)


def act_word(model: BaseModel, g: Graph, tokens, seq: NormalSequence) -> NormalSequence:
    for token in reversed(tokens):
        seq = act_letter(model, g, token, seq)
    return seq


def to_normal_sequence(model: BaseModel, g: Graph, tokens) -> NormalSequence:
    """Canonical form of the element spelled by the tokens."""
    return act_word(model, g, tokens, base_sequence(model))


def word_of(seq: NormalSequence) -> tuple[Token, ...]:
    toks = [u_token(seq.head)]
    for a, u in seq.tail:
        toks.extend(gen_token(gen, e) for gen, e in a)
        toks.append(u_token(u))
    return tuple(toks)


def sequence_key(model: BaseModel, seq: NormalSequence):
    return (
        model.elem_key(seq.head),
        tuple((a, model.elem_key(u)) for a, u in seq.tail),
    )


class Engine:
    """Shared element API over a fixed (model, graph) pair.

    Elements are opaque canonical values; ``key`` serializes them into
    hashable, sortable data and two elements are equal in the group iff their
    keys agree.  ``coset_rep``/``coset_key`` canonicalize left U-cosets, the
    vertex set of the coset cube complex.
    """

    regime = "abstract"

    def __init__(self, model: BaseModel, graph: Graph):
        self.model = model
        self.graph = graph

    def identity(self):
        raise NotImplementedError

    def from_tokens(self, tokens):
        raise NotImplementedError

    def from_text(self, text):
        return self.from_tokens(parse_tokens(self.model, self.graph, text))

    def mul(self, a, b):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def mul_token(self, a, token):
        """a * token, canonical."""
        raise NotImplementedError

    def key(self, a):
        raise NotImplementedError

    def is_in_U(self, a) -> bool:
        raise NotImplementedError

    def u_value(self, a):
        raise NotImplementedError

    def exponent(self, a) -> int:
        raise NotImplementedError

    def a_part(self, a) -> W.Word:
        raise NotImplementedError

    def n_part(self, a):
        raise NotImplementedError

    def tokens_of(self, a) -> tuple[Token, ...]:
        """A token spelling of the element (not unique, but canonical here)."""
        raise NotImplementedError

    def coset_rep(self, a):
        raise NotImplementedError

    def coset_key(self, a):
        return self.key(self.coset_rep(a))

    def apartment_key(self, n):
        """Canonical key of the apartment containing n * (base apartment)."""
        raise NotImplementedError

    def format(self, a) -> str:
        raise NotImplementedError


class AutomorphicEngine(Engine):
    """Normal-sequence engine; needs phi(O) = O and a finite U."""

    regime = "automorphic"

    def __init__(self, model: BaseModel, graph: Graph):
        if not model.is_automorphic:
            raise RegimeMismatch("automorphic engine needs phi(O) = O")
        super().__init__(model, graph)
        if hasattr(model, "U"):
            self._U = sorted(model.U)
        else:
            # U = O * R, and the trivial model has a one-element U
            reps = model.transversal_R()
            self._U = sorted({model.mul(model.identity(), r) for r in reps})
        self._O = sorted(u for u in self._U if model.in_O(u))

    def identity(self):
        return base_sequence(self.model)

    def from_tokens(self, tokens):
        return to_normal_sequence(self.model, self.graph, tokens)

    def mul(self, a, b):
        return act_word(self.model, self.graph, word_of(a), b)

    def inv(self, a):
        return self.from_tokens(invert_tokens(self.model, word_of(a)))

    def mul_token(self, a, token):
        return act_word(self.model, self.graph, word_of(a), self.from_tokens((token,)))

    def key(self, a):
        return sequence_key(self.model, a)

    def tokens_of(self, a):
        return word_of(a)

    def is_in_U(self, a):
        return a.length == 0

    def u_value(self, a):
        if not self.is_in_U(a):
            raise ValueError("element is not in U")
        return a.head

    def exponent(self, a):
        return sum(W.exponent(word) for word, _ in a.tail)

    def a_part(self, a):
        out: W.Word = ()
        for word, _ in a.tail:
            out = W.multiply(self.graph, out, word)
        return out

    def n_part(self, a):
        inv_word = W.invert(self.graph, self.a_part(a))
        toks = tuple(gen_token(gen, e) for gen, e in inv_word)
        n = self.mul(a, self.from_tokens(toks))
        if self.a_part(n):
            raise AssertionError("n_part failed to cancel the Artin part")
        return n

    def coset_rep(self, a):
        best = None
        for u in self._U:
            cand = self.mul(a, base_sequence(self.model, u))
            k = self.key(cand)
            if best is None or k < best[0]:
                best = (k, cand)
        return best[1]

    def apartment_key(self, n):
        # apartments n*Sigma0 = n'*Sigma0 iff n^-1 n' lies in the pointwise
        # stabiliser of the base apartment, which is O here
        best = None
        for w in self._O:
            k = self.key(self.mul(n, base_sequence(self.model, w)))
            if best is None or k < best:
                best = k
        return best

    def format(self, a):
        m = self.model
        parts = [m.format_u(a.head)]
        for word, u in a.tail:
            parts.append(W.format_word(word))
            parts.append(m.format_u(u))
        return " ".join(parts)


def extended_exponent(engine: Engine, a) -> int:
    """Group homomorphism to Z killing U and sending every generator to 1."""
    return engine.exponent(a)


def verify_relations(model: BaseModel, graph: Graph, samples=None) -> dict:
    """Check the defining relations through whichever engine is in force.

    Beyond t w t^-1 = phi(w) and the edge commutators, this exercises the
    multiplicativity of phi and the letter-inverse identities on arbitrary
    U-heads; a corrupted phi table that survives the direct comparison still
    trips those.  Raises RelationViolation on failure.
    """
    engine = engine_for(model, graph)
    checked = {"conjugation": 0, "multiplicativity": 0, "commutators": 0, "inverses": 0}
    if samples is None:
        if hasattr(model, "U"):
            samples = sorted(model.U)
        elif model.kind == "shift":
            samples = [0, 1, -1, 2, 5, model.m, -3 * model.m]
        else:
            samples = [model.identity()]
    o_samples = [u for u in samples if model.in_O(u)]

    def elem(tokens):
        return engine.from_tokens(tokens)

    def expect(name, lhs, rhs):
        if engine.key(lhs) != engine.key(rhs):
            raise RelationViolation(name)

    for t in graph.vertices:
        for w in o_samples:
            expect(
                f"t w t^-1 != phi(w) for t={t!r}, w={model.format_u(w)}",
                elem((gen_token(t, 1), u_token(w), gen_token(t, -1))),
                elem((u_token(model.phi(w)),)),
            )
            checked["conjugation"] += 1
        for w1 in o_samples[:6]:
            for w2 in o_samples[:6]:
                lhs = elem(
                    (gen_token(t, 1), u_token(model.mul(w1, w2)), gen_token(t, -1))
                )
                rhs = engine.mul(
                    elem((gen_token(t, 1), u_token(w1), gen_token(t, -1))),
                    elem((gen_token(t, 1), u_token(w2), gen_token(t, -1))),
                )
                expect(f"phi not multiplicative through {t!r}", lhs, rhs)
                checked["multiplicativity"] += 1
        for u0 in samples:
            for sign in (1, -1):
                expect(
                    f"{t}^{-sign} {t}^{sign} u != u at u={model.format_u(u0)}",
                    elem((gen_token(t, -sign), gen_token(t, sign), u_token(u0))),
                    elem((u_token(u0),)),
                )
                checked["inverses"] += 1
    for e in graph.edges:
        s, t = sorted(e)
        for u0 in samples[:4]:
            expect(
                f"[{s},{t}] != 1 through the engine",
                elem((gen_token(s, 1), gen_token(t, 1), u_token(u0))),
                elem((gen_token(t, 1), gen_token(s, 1), u_token(u0))),
            )
            checked["commutators"] += 1
    return {"engine": engine.regime, "checked": checked, "ok": True}


def engine_for(model: BaseModel, graph: Graph) -> Engine:
    """Pick the canonical-form engine for this (model, graph) pair."""
    from .britton import TreeEngine
    from .semidirect import SemidirectEngine

    if model.is_automorphic:
        return AutomorphicEngine(model, graph)
    if model.is_shrinking:
        if graph.is_connected():
            return SemidirectEngine(model, graph)
        if not graph.edges:
            return TreeEngine(model, graph)
        raise RegimeMismatch(
            "shift models need a connected graph (or an edgeless one); "
            "split the graph into connected components first"
        )
    if not graph.edges:
        return TreeEngine(model, graph)
    raise RegimeMismatch(
        "no canonical form: model is neither automorphic nor shrinking and "
        "the graph has edges"
    )
