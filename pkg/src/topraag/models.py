"""Computable models of a monomorphism phi: O -> U between a group U and a
subgroup O <= U.

Three families are supported:

* ``FiniteModel``    -- U a permutation group of small degree, O a subgroup,
                        phi given by images of O's generators;
* ``ShiftModel``     -- U = Z under addition, phi = multiplication by m >= 2,
                        so O = U and phi(U) = mZ is proper;
* ``TrivialModel``   -- U = {1}.

All arithmetic is exact.  The regime phi(O) strictly inside O with O != U is
reachable only through ShiftModel: a finite model always has |phi(O)| = |O|.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

from .errors import ModelError, NotInDomain, NotShrinkingModel

INFINITE = math.inf

Perm = tuple[int, ...]


def perm_identity(degree: int) -> Perm:
    return tuple(range(degree))


def perm_mul(p: Perm, q: Perm) -> Perm:
    """(p*q)(i) = p(q(i)): apply q first."""
    return tuple(p[q[i]] for i in range(len(p)))


def perm_inv(p: Perm) -> Perm:
    out = [0] * len(p)
    for i, v in enumerate(p):
        out[v] = i
    return tuple(out)


def perm_from_cycles(degree: int, cycles) -> Perm:
    out = list(range(degree))
    for cyc in cycles:
        for a, b in zip(cyc, cyc[1:] + cyc[:1]):
            out[a] = b
    return tuple(out)


def _closure(generators, mul, identity):
    elems = {identity}
    frontier = [identity]
    while frontier:
        x = frontier.pop()
        for g in generators:
            y = mul(x, g)
            if y not in elems:
                elems.add(y)
                frontier.append(y)
    return elems


class BaseModel:
    """Uniform element interface; subclasses fix the element type."""

    kind = "base"

    # -- group operations ------------------------------------------------
    def identity(self):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    # -- subgroup structure ----------------------------------------------
    def in_O(self, u) -> bool:
        raise NotImplementedError

    def in_phiO(self, u) -> bool:
        raise NotImplementedError

    def phi(self, w):
        raise NotImplementedError

    def phi_inv(self, v):
        raise NotImplementedError

    def transversal_R(self):
        """Representatives of the right cosets O\\U, identity included."""
        raise NotImplementedError

    def decompose(self, u):
        """u = omega * u_hat with omega in O and u_hat in the transversal."""
        raise NotImplementedError

    def left_transversal(self, k: int):
        """Representatives of the left cosets U / phi^k(O); k = 0 gives U/O."""
        raise NotImplementedError

    def index_O(self):
        raise NotImplementedError

    def index_phiO(self):
        raise NotImplementedError

    @property
    def is_automorphic(self) -> bool:
        raise NotImplementedError

    @property
    def is_shrinking(self) -> bool:
        raise NotImplementedError

    def phi_depth(self, u):
        raise NotShrinkingModel(f"phi_depth needs O = U with phi shrinking, not {self.kind}")

    # -- serialization ----------------------------------------------------
    def elem_key(self, u):
        return u

    def format_u(self, u) -> str:
        raise NotImplementedError

    def parse_u(self, token: str):
        raise NotImplementedError

    def to_json(self) -> dict:
        raise NotImplementedError


def index_of(model: BaseModel, which: str):
    """Exact index |U:O| or |U:phi(O)|."""
    if which == "O":
        return model.index_O()
    if which in ("phiO", "phi(O)"):
        return model.index_phiO()
    raise ValueError(f"which must be 'O' or 'phiO', got {which!r}")


class FiniteModel(BaseModel):
    kind = "finite"

    def __init__(self, degree, u_gens, o_gens, phi_images, coset_reps=None):
        self.degree = degree
        ident = perm_identity(degree)
        u_gens = [tuple(g) for g in u_gens]
        o_gens = [tuple(g) for g in o_gens]
        phi_images = [tuple(g) for g in phi_images]
        for p in u_gens + o_gens + phi_images:
            if sorted(p) != list(range(degree)):
                raise ModelError(f"not a permutation of degree {degree}: {p}")
        self.u_gens = u_gens
        self.o_gens = o_gens
        self.phi_images = phi_images
        self.U = frozenset(_closure(u_gens, perm_mul, ident))
        self.O = frozenset(_closure(o_gens, perm_mul, ident))
        if not self.O <= self.U:
            raise ModelError("O is not a subgroup of U")
        if not set(phi_images) <= self.U:
            raise ModelError("phi images must lie in U")
        if len(phi_images) != len(o_gens):
            raise ModelError("need one phi image per O generator")
        self.phi_table = self._extend_phi()
        self.phiO = frozenset(self.phi_table.values())
        if len(self.phiO) != len(self.O):
            raise ModelError("phi is not injective")
        self.phi_inv_table = {v: w for w, v in self.phi_table.items()}
        self._R = self._right_transversal(coset_reps)
        self._left = {}

    def _extend_phi(self):
        # extend gen |-> image multiplicatively over all of O, failing if
        # the assignment is not a well-defined homomorphism
        ident = perm_identity(self.degree)
        table = {ident: ident}
        frontier = [ident]
        while frontier:
            w = frontier.pop()
            for g, img in zip(self.o_gens, self.phi_images):
                x = perm_mul(w, g)
                y = perm_mul(table[w], img)
                if x in table:
                    if table[x] != y:
                        raise ModelError("phi images do not define a homomorphism")
                else:
                    table[x] = y
                    frontier.append(x)
        if len(table) != len(self.O):
            raise ModelError("O generators do not generate O")
        return table

    def _right_transversal(self, coset_reps):
        # right cosets O\U; canonical rep = lexicographically least member
        cosets = {}
        for u in self.U:
            key = frozenset(perm_mul(w, u) for w in self.O)
            cosets.setdefault(key, []).append(u)
        if coset_reps is None:
            reps = sorted(min(members) for members in cosets.values())
        else:
            reps = [tuple(r) for r in coset_reps]
            keys = {frozenset(perm_mul(w, r) for w in self.O) for r in reps}
            if len(keys) != len(cosets) or len(reps) != len(cosets):
                raise ModelError("explicit coset_reps is not a right transversal")
            if perm_identity(self.degree) not in reps:
                raise ModelError("transversal must contain the identity")
        return tuple(reps)

    # -- BaseModel interface ----------------------------------------------
    def identity(self):
        return perm_identity(self.degree)

    def mul(self, a, b):
        return perm_mul(a, b)

    def inv(self, a):
        return perm_inv(a)

    def in_O(self, u):
        return u in self.O

    def in_phiO(self, u):
        return u in self.phiO

    def phi(self, w):
        try:
            return self.phi_table[w]
        except KeyError:
            raise NotInDomain(f"{w} is not in O") from None

    def phi_inv(self, v):
        try:
            return self.phi_inv_table[v]
        except KeyError:
            raise NotInDomain(f"{v} is not in phi(O)") from None

    def transversal_R(self):
        return self._R

    def decompose(self, u):
        if u not in self.U:
            raise NotInDomain(f"{u} is not in U")
        for r in self._R:
            omega = perm_mul(u, perm_inv(r))
            if omega in self.O:
                return omega, r
        raise AssertionError("transversal failed to cover U")

    def phi_k_O(self, k: int) -> frozenset:
        if k <= 0 or self.is_automorphic:
            return self.O
        if k == 1:
            return self.phiO
        # iterating phi needs phi(O) <= O, which a finite model only has
        # when phi(O) = O
        raise NotInDomain("phi^k(O) with k >= 2 needs phi(O) = O on finite models")

    def left_transversal(self, k: int):
        if k not in self._left:
            sub = self.phi_k_O(k)
            cosets = {}
            for u in sorted(self.U):
                key = frozenset(perm_mul(u, w) for w in sub)
                cosets.setdefault(key, u)
            self._left[k] = tuple(sorted(cosets.values()))
        return self._left[k]

    def index_O(self):
        return len(self.U) // len(self.O)

    def index_phiO(self):
        return len(self.U) // len(self.phiO)

    @property
    def is_automorphic(self):
        return self.phiO == self.O

    @property
    def is_shrinking(self):
        return False

    def format_u(self, u):
        return "perm[" + ",".join(str(i) for i in u) + "]"

    def parse_u(self, token):
        if not token.startswith("perm[") or not token.endswith("]"):
            raise ModelError(f"bad permutation token {token!r}")
        body = token[5:-1]
        p = tuple(int(x) for x in body.split(",")) if body else ()
        if sorted(p) != list(range(self.degree)):
            raise ModelError(f"{token!r} is not a permutation of degree {self.degree}")
        return p

    def to_json(self):
        return {
            "kind": "finite",
            "degree": self.degree,
            "U_gens": [list(g) for g in self.u_gens],
            "O_gens": [list(g) for g in self.o_gens],
            "phi_images": [list(g) for g in self.phi_images],
        }


@dataclass(frozen=True)
class NPair:
    """Reduced representative (k, u) of s^-k u s^k in the normal closure of U
    over a ShiftModel: k >= 0 and either k = 0 or m does not divide u.

    The value map (k, u) |-> u / m^k identifies these pairs with Z[1/m].
    """

    k: int
    u: int


class ShiftModel(BaseModel):
    kind = "shift"

    def __init__(self, m: int):
        if m < 2:
            raise ModelError("shift factor m must be >= 2")
        self.m = m

    def identity(self):
        return 0

    def mul(self, a, b):
        return a + b

    def inv(self, a):
        return -a

    def in_O(self, u):
        return True

    def in_phiO(self, u):
        return u % self.m == 0

    def phi(self, w):
        return self.m * w

    def phi_inv(self, v):
        if v % self.m:
            raise NotInDomain(f"{v} is not divisible by {self.m}")
        return v // self.m

    def transversal_R(self):
        return (0,)

    def decompose(self, u):
        return u, 0

    def left_transversal(self, k: int):
        return tuple(range(self.m**k))

    def index_O(self):
        return 1

    def index_phiO(self):
        return self.m

    @property
    def is_automorphic(self):
        return False

    @property
    def is_shrinking(self):
        return True

    def phi_depth(self, u):
        """Largest j with u in phi^j(U); the m-adic valuation of u."""
        if u == 0:
            return INFINITE
        d = 0
        while u % self.m == 0:
            u //= self.m
            d += 1
        return d

    # -- normal-closure pairs ---------------------------------------------
    def reduce_pair(self, k: int, u: int) -> NPair:
        if k < 0:
            raise ModelError("pair depth k must be >= 0")
        while k > 0 and u % self.m == 0:
            k -= 1
            u //= self.m
        if u == 0:
            k = 0
        return NPair(k, u)

    def pair_mul(self, a: NPair, b: NPair) -> NPair:
        k = max(a.k, b.k)
        u = a.u * self.m ** (k - a.k) + b.u * self.m ** (k - b.k)
        return self.reduce_pair(k, u)

    def pair_inv(self, a: NPair) -> NPair:
        return NPair(a.k, -a.u)

    def pair_shift(self, a: NPair, e: int) -> NPair:
        """Conjugation by an Artin element of exponent e: value * m^e."""
        if e >= 0:
            return self.reduce_pair(a.k, a.u * self.m**e)
        return self.reduce_pair(a.k - e, a.u)

    def pair_of_u(self, u: int) -> NPair:
        return self.reduce_pair(0, u)

    def pair_latitude(self, a: NPair):
        """sup{ e : pair lies in s^e U s^-e }; +inf only for the identity."""
        if a.u == 0:
            return INFINITE
        return self.phi_depth(a.u) - a.k

    def pair_mod(self, a: NPair, e: int) -> NPair:
        """Canonical representative of the coset a * (s^e U s^-e)."""
        if a.u == 0:
            return a
        if a.k + e <= 0:
            return NPair(0, 0)
        modulus = self.m ** (a.k + e)
        return self.reduce_pair(a.k, a.u % modulus)

    def format_u(self, u):
        return str(u)

    def parse_u(self, token):
        return int(token)

    def to_json(self):
        return {"kind": "shift", "m": self.m}


class TrivialModel(BaseModel):
    kind = "trivial"

    def identity(self):
        return ()

    def mul(self, a, b):
        return ()

    def inv(self, a):
        return ()

    def in_O(self, u):
        return True

    def in_phiO(self, u):
        return True

    def phi(self, w):
        return ()

    def phi_inv(self, v):
        return ()

    def transversal_R(self):
        return ((),)

    def decompose(self, u):
        return (), ()

    def left_transversal(self, k: int):
        return ((),)

    def index_O(self):
        return 1

    def index_phiO(self):
        return 1

    @property
    def is_automorphic(self):
        return True

    @property
    def is_shrinking(self):
        return False

    def format_u(self, u):
        return "1"

    def parse_u(self, token):
        if token != "1":
            raise ModelError(f"trivial model only has the element '1', got {token!r}")
        return ()

    def to_json(self):
        return {"kind": "trivial"}


def model_from_config(cfg: dict) -> BaseModel:
    kind = cfg.get("kind")
    if kind == "shift":
        return ShiftModel(int(cfg["m"]))
    if kind == "trivial":
        return TrivialModel()
    if kind == "finite":
        return FiniteModel(
            int(cfg["degree"]),
            cfg["U_gens"],
            cfg["O_gens"],
            cfg["phi_images"],
            coset_reps=cfg.get("coset_reps"),
        )
    raise ModelError(f"unknown model kind {kind!r}")


def model_from_json(path) -> BaseModel:
    with open(path, "r", encoding="utf-8") as fh:
        return model_from_config(json.load(fh))


def s3_a3_model() -> FiniteModel:
    """U = S3 as permutations of {0,1,2}, O = A3, phi = identity."""
    s3 = [perm_from_cycles(3, [[0, 1]]), perm_from_cycles(3, [[0, 1, 2]])]
    a3 = [perm_from_cycles(3, [[0, 1, 2]])]
    return FiniteModel(3, s3, a3, a3)
