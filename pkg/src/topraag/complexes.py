"""Finite balls of the coset cube complex of a (model, graph) pair, and the
apartment/valley analysis living on them.

The complex has one vertex per coset gU and one d-cube per pair (g, T) with T
a d-clique of the graph, spanning the corners g t1^e1 ... td^ed U.  A ball of
radius r is the full subcomplex on the vertices at 1-skeleton distance at
most r from the base vertex U: a cube is attached iff all its corners are in.

Apartments are the translates n * (base apartment) of the embedded standard
complex of the Artin group; their pairwise intersections are classified
exactly (empty / vertices only / union of valleys) and cross-checked against
brute-force fixed-cell enumeration by the verification suites.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field

from . import words as W
from .errors import (
    EmptyWindow,
    InfiniteStabiliser,
    NoInteriorVertices,
    RegimeMismatch,
    ResourceCap,
)
from .graphs import Graph, SimplicialComplex, cliques, validate_graph
from .models import INFINITE, BaseModel
from .elements import Engine, engine_for, gen_token, u_token

DEFAULT_VERTEX_CAP = 1_000_000
DEFAULT_CUBE_CAP = 10_000_000


@dataclass(frozen=True)
class Cube:
    dim: int
    ctype: tuple[str, ...]           # sorted clique
    corners: tuple[int, ...]         # vertex ids indexed by subset bitmask of ctype
    key: frozenset = field(compare=False)
    min_corner: int = field(compare=False)
    gelem: object = field(compare=False, default=None)  # defining group element

    def corner_set(self) -> frozenset:
        return frozenset(self.corners)

    def faces(self):
        """Vertex sets of all faces, one per pair A <= B <= ctype."""
        d = self.dim
        out = set()
        for lo in range(1 << d):
            rest = [i for i in range(d) if not (lo >> i) & 1]
            for pick in range(1 << len(rest)):
                hi_bits = lo
                for j, i in enumerate(rest):
                    if (pick >> j) & 1:
                        hi_bits |= 1 << i
                # face spans corners x with lo <= x <= hi_bits (bitwise)
                face = frozenset(
                    self.corners[x]
                    for x in range(1 << d)
                    if (x & lo) == lo and (x | hi_bits) == hi_bits
                )
                out.add(face)
        return out


class CubeBall:
    def __init__(self, model, graph, radius, engine):
        self.model: BaseModel = model
        self.graph: Graph = graph
        self.radius: int = radius
        self.engine: Engine = engine
        self.vertex_reps = []            # canonical coset representatives
        self.vertex_ids = {}             # coset key -> id
        self.dist = []
        self.exponent = []
        self.cubes: list[Cube] = []
        self.cube_ids: dict[frozenset, int] = {}
        self.adjacency: dict[int, set[int]] = {}

    # -- construction helpers ----------------------------------------------
    def _add_vertex(self, rep, d):
        key = self.engine.key(rep)
        vid = len(self.vertex_reps)
        self.vertex_ids[key] = vid
        self.vertex_reps.append(rep)
        self.dist.append(d)
        self.exponent.append(self.engine.exponent(rep))
        self.adjacency[vid] = set()
        return vid

    def vertex_id_of(self, elem) -> int | None:
        """Id of the vertex (coset) containing the element, if in the ball."""
        return self.vertex_ids.get(self.engine.coset_key(elem))

    # -- views ---------------------------------------------------------------
    @property
    def n_vertices(self):
        return len(self.vertex_reps)

    def cubes_of_dim(self, d):
        return [c for c in self.cubes if c.dim == d]

    def degrees(self):
        return {v: len(ns) for v, ns in self.adjacency.items()}

    def interior_vertices(self):
        """Vertices whose whole star (all incident cubes) is inside the ball."""
        margin = max(1, max((len(c) for c in cliques(self.graph).cliques), default=1))
        return [v for v in range(self.n_vertices) if self.dist[v] + margin <= self.radius]

    def cells_for_homology(self):
        return [(c.dim, c.ctype, c.corners) for c in self.cubes]

    def to_json(self) -> dict:
        return {
            "vertices": [
                {
                    "id": v,
                    "rep": self.engine.format(self.vertex_reps[v]),
                    "exp": self.exponent[v],
                    "dist": self.dist[v],
                }
                for v in range(self.n_vertices)
            ],
            "cubes": [
                {
                    "dim": c.dim,
                    "type": list(c.ctype),
                    "verts": sorted(c.key),
                    "min_corner": c.min_corner,
                }
                for c in self.cubes
            ],
            "meta": {
                "model": self.model.to_json(),
                "graph": self.graph.to_json(),
                "radius": self.radius,
                "regime": self.engine.regime,
            },
        }


def cayley_abels_degree(model: BaseModel, graph: Graph):
    """Vertex degree of the 1-skeleton: sum over generators of
    |U:phi(O)| + |U:O|; infinite when either index is."""
    per_gen = model.index_phiO() + model.index_O()
    return len(graph.vertices) * per_gen


def build_ball(
    model: BaseModel,
    graph: Graph,
    radius: int,
    vertex_cap: int = DEFAULT_VERTEX_CAP,
    cube_cap: int = DEFAULT_CUBE_CAP,
) -> CubeBall:
    """BFS the coset 1-skeleton to the given radius, then attach every cube
    all of whose corners landed inside."""
    engine = engine_for(model, graph)
    ball = CubeBall(model, graph, radius, engine)
    base = engine.coset_rep(engine.identity())
    ball._add_vertex(base, 0)
    frontier = [0]
    for d in range(radius):
        nxt = []
        for vid in frontier:
            rep = ball.vertex_reps[vid]
            for t in graph.vertices:
                for sign in (1, -1):
                    for u in model.left_transversal(1 if sign == 1 else 0):
                        nb = engine.mul_token(rep, u_token(u))
                        nb = engine.mul_token(nb, gen_token(t, sign))
                        nb = engine.coset_rep(nb)
                        key = engine.key(nb)
                        wid = ball.vertex_ids.get(key)
                        if wid is None:
                            if ball.n_vertices >= vertex_cap:
                                raise ResourceCap(
                                    f"vertex budget {vertex_cap} exhausted at radius {d + 1}"
                                )
                            wid = ball._add_vertex(nb, d + 1)
                            nxt.append(wid)
        frontier = nxt
    _attach_cubes(ball, cube_cap)
    # the 1-skeleton comes from the attached 1-cubes: BFS expansion alone
    # would miss edges joining two boundary vertices
    for c in ball.cubes:
        if c.dim == 1:
            a, b = c.corners
            ball.adjacency[a].add(b)
            ball.adjacency[b].add(a)
    return ball


def _attach_cubes(ball: CubeBall, cube_cap: int):
    engine = ball.engine
    model = ball.model
    fam = cliques(ball.graph)
    # vertices are the 0-cubes
    for vid in range(ball.n_vertices):
        cube = Cube(0, (), (vid,), frozenset((vid,)), vid, ball.vertex_reps[vid])
        ball.cube_ids[cube.key] = len(ball.cubes)
        ball.cubes.append(cube)
    for nonempty in fam.nonempty():
        ctype = tuple(sorted(nonempty, key=ball.graph.order.get))
        d = len(ctype)
        for vid in range(ball.n_vertices):
            rep = ball.vertex_reps[vid]
            for c in model.left_transversal(d):
                g = engine.mul_token(rep, u_token(c))
                corners = _cube_corners(ball, g, ctype)
                if corners is None:
                    continue
                key = frozenset(corners)
                if key in ball.cube_ids:
                    prev = ball.cubes[ball.cube_ids[key]]
                    if prev.ctype != ctype:
                        raise AssertionError("one vertex set carries two cube types")
                    continue
                if len(ball.cubes) >= cube_cap:
                    raise ResourceCap(f"cube budget {cube_cap} exhausted")
                cube = Cube(d, ctype, corners, key, corners[0], g)
                ball.cube_ids[key] = len(ball.cubes)
                ball.cubes.append(cube)


def _cube_corners(ball: CubeBall, g, ctype):
    """Corner vertex ids of gQ_T indexed by subset bitmask, or None if some
    corner is outside the ball."""
    engine = ball.engine
    corners = []
    for mask in range(1 << len(ctype)):
        x = g
        for i, t in enumerate(ctype):
            if (mask >> i) & 1:
                x = engine.mul_token(x, gen_token(t, 1))
        vid = ball.vertex_ids.get(engine.coset_key(x))
        if vid is None:
            return None
        corners.append(vid)
    if len(set(corners)) != len(corners):
        raise AssertionError("cube corners collapsed; engine inconsistency")
    return tuple(corners)


# -- stabilisers -------------------------------------------------------------

def stabiliser_formula(model: BaseModel, cube_dim: int) -> str:
    """Pointwise stabiliser of a cube gQ_T: g phi^{|T|}(O) g^{-1}."""
    return f"g * phi^{cube_dim}(O) * g^-1"


def stabiliser_formula_set(ball: CubeBall, cube: Cube):
    """The set g phi^{|T|}(O) g^{-1} for finite models, with g the element
    defining the cube (same-coset substitutes would conjugate wrongly)."""
    model = ball.model
    if not hasattr(model, "U"):
        raise InfiniteStabiliser("stabiliser sets need a finite model")
    engine = ball.engine
    g = cube.gelem
    # a vertex is stabilised by all of gUg^-1; positive cubes by g phi^k(O) g^-1
    members = model.U if cube.dim == 0 else model.phi_k_O(cube.dim)
    out = set()
    for w in members:
        elem = engine.mul(engine.mul_token(g, u_token(w)), engine.inv(g))
        out.add(engine.key(elem))
    return out


def stabiliser_bruteforce(ball: CubeBall, cube: Cube):
    """Candidates g u g^{-1} with u in U that fix every corner of the cube."""
    model = ball.model
    if not hasattr(model, "U"):
        raise InfiniteStabiliser("brute-force stabilisers need a finite model")
    engine = ball.engine
    g = cube.gelem
    corner_elems = []
    for mask in range(1 << cube.dim):
        x = g
        for i, t in enumerate(cube.ctype):
            if (mask >> i) & 1:
                x = engine.mul_token(x, gen_token(t, 1))
        corner_elems.append(x)
    out = set()
    for u in sorted(model.U):
        n = engine.mul(engine.mul_token(g, u_token(u)), engine.inv(g))
        if all(
            engine.coset_key(engine.mul(n, ce)) == engine.coset_key(ce)
            for ce in corner_elems
        ):
            out.add(engine.key(n))
    return out


# -- apartments and intersections ---------------------------------------------

def apartment_of_vertex(ball: CubeBall, vid: int):
    """Handle of the canonical apartment through this vertex."""
    rep = ball.vertex_reps[vid]
    n = ball.engine.n_part(rep)
    return ball.engine.apartment_key(n)


def enumerate_apartments(ball: CubeBall):
    """Handles with one witness n-part element each, sorted by handle."""
    engine = ball.engine
    found = {}
    for vid in range(ball.n_vertices):
        n = engine.n_part(ball.vertex_reps[vid])
        found.setdefault(engine.apartment_key(n), n)
    return [found[k] for k in sorted(found)]


@dataclass(frozen=True)
class IntersectionClass:
    """Trichotomy for (base apartment) meet n * (base apartment).

    tag is one of "empty", "vertices", "valleys".  For "vertices" the unique
    vertex is recorded as an Artin word (automorphic regime).  For "valleys"
    the latitude is an integer, or None when the apartments coincide.
    """

    tag: str
    vertex: W.Word | None = None
    latitude: object = None

    def is_empty(self):
        return self.tag == "empty"


def classify_intersection(model: BaseModel, graph: Graph, n) -> IntersectionClass:
    return classify_with_engine(engine_for(model, graph), n)


def classify_with_engine(engine: Engine, n) -> IntersectionClass:
    if engine.regime == "automorphic":
        return _classify_automorphic(engine, n)
    if engine.regime == "semidirect":
        return _classify_semidirect(engine, n)
    raise RegimeMismatch("intersection classification needs phi(O) <= O")


def _classify_automorphic(engine: Engine, n) -> IntersectionClass:
    model = engine.model
    if engine.a_part(n):
        raise ValueError("classification takes elements of the normal closure")
    if n.length == 0:
        if model.in_O(n.head):
            # n fixes the base apartment pointwise
            return IntersectionClass("valleys", latitude=None)
        return IntersectionClass("vertices", vertex=())
    if n.length == 2:
        (a1, u1), (a2, u2) = n.tail
        ident = model.identity()
        if (
            model.in_O(n.head)
            and u2 == ident
            and a2 == W.invert(engine.graph, a1)
            and u1 != ident
        ):
            return IntersectionClass("vertices", vertex=a1)
    return IntersectionClass("empty")


def _classify_semidirect(engine, n) -> IntersectionClass:
    lat = engine.latitude(n)
    if lat is INFINITE:
        return IntersectionClass("valleys", latitude=None)
    return IntersectionClass("valleys", latitude=lat)


def base_apartment_trace(ball: CubeBall):
    """Cells of the base apartment inside the ball, cached on the ball.

    Returns (vertices, cubes) where vertices maps an Artin word b to the ball
    vertex id of bU and cubes lists (b, ctype, cube_id).
    """
    cached = getattr(ball, "_trace", None)
    if cached is not None:
        return cached
    engine = ball.engine
    graph = ball.graph
    seen = {(): engine.from_tokens(())}
    frontier = [()]
    verts = {}
    for _ in range(ball.radius):
        nxt = []
        for b in frontier:
            for t in graph.vertices:
                for sign in (1, -1):
                    word = W.multiply(graph, b, W.single(t, sign))
                    if word not in seen:
                        seen[word] = engine.from_tokens(
                            tuple(gen_token(g, e) for g, e in word)
                        )
                        nxt.append(word)
        frontier = nxt
    for word, elem in seen.items():
        vid = ball.vertex_id_of(elem)
        if vid is not None:
            verts[word] = vid
    cubes = []
    fam = cliques(graph)
    for word, vid in verts.items():
        for nonempty in fam.nonempty():
            ctype = tuple(sorted(nonempty, key=graph.order.get))
            corner_ids = _apartment_cube_ids(ball, verts, word, ctype)
            if corner_ids is None:
                continue
            cid = ball.cube_ids.get(frozenset(corner_ids))
            if cid is not None:
                cubes.append((word, ctype, cid))
    ball._trace = (verts, cubes)
    ball._trace_elems = {w: seen[w] for w in verts}
    return verts, cubes


def _apartment_cube_ids(ball, verts, word, ctype):
    graph = ball.graph
    ids = []
    for mask in range(1 << len(ctype)):
        w = word
        for i, t in enumerate(ctype):
            if (mask >> i) & 1:
                w = W.multiply(graph, w, W.single(t, 1))
        vid = verts.get(w)
        if vid is None:
            return None
        ids.append(vid)
    return ids


def brute_force_fixed_cells(ball: CubeBall, n):
    """Cells of the base apartment trace fixed pointwise by n, by direct
    action on every corner; the oracle side of the trichotomy check."""
    engine = ball.engine
    verts, cubes = base_apartment_trace(ball)
    elems = ball._trace_elems
    cosets = getattr(ball, "_trace_cosets", None)
    if cosets is None:
        cosets = {w: engine.coset_key(elems[w]) for w in verts}
        ball._trace_cosets = cosets
    fixed_vertices = set()
    for word, vid in verts.items():
        moved = engine.mul(n, elems[word])
        if engine.coset_key(moved) == cosets[word]:
            fixed_vertices.add(word)
    fixed_cubes = []
    for word, ctype, cid in cubes:
        ok = True
        for mask in range(1 << len(ctype)):
            w = word
            for i, t in enumerate(ctype):
                if (mask >> i) & 1:
                    w = W.multiply(ball.graph, w, W.single(t, 1))
            if w not in fixed_vertices:
                ok = False
                break
        if ok:
            fixed_cubes.append((word, ctype, cid))
    return fixed_vertices, fixed_cubes


# -- valleys -------------------------------------------------------------------

def valley_cells(graph: Graph, latitude: int, e_range, word_radius: int):
    """Cubes bQ_T of the standard apartment with e(b) + |T| <= latitude,
    windowed to |b| <= word_radius and e(b) inside e_range.

    Returns (vertices, cubes): vertices is a dict word -> id over the window,
    cubes are (dim, ctype, corner-ids) records forming a complex closed under
    faces (a cube enters iff all its corners are window vertices).
    """
    lo, hi = e_range
    if lo > hi or word_radius < 0:
        raise EmptyWindow(f"window e-range {e_range} x radius {word_radius} is empty")
    words = _artin_ball(graph, word_radius)
    verts = {}
    for b in sorted(words, key=lambda w: (len(w), w)):
        e = W.exponent(b)
        if e <= latitude and lo <= e <= hi:
            verts[b] = len(verts)
    cells = []
    fam = cliques(graph)
    for b in verts:
        for nonempty in fam.nonempty():
            ctype = tuple(sorted(nonempty, key=graph.order.get))
            if W.exponent(b) + len(ctype) > latitude:
                continue
            ids = []
            ok = True
            for mask in range(1 << len(ctype)):
                w = b
                for i, t in enumerate(ctype):
                    if (mask >> i) & 1:
                        w = W.multiply(graph, w, W.single(t, 1))
                vid = verts.get(w)
                if vid is None:
                    ok = False
                    break
                ids.append(vid)
            if ok:
                cells.append((len(ctype), ctype, tuple(ids)))
    seen = set()
    cubes = []
    for dim, ctype, ids in cells:
        key = frozenset(ids)
        if key not in seen:
            seen.add(key)
            cubes.append((dim, ctype, ids))
    for word, vid in verts.items():
        cubes.append((0, (), (vid,)))
    return verts, cubes


def _artin_ball(graph: Graph, radius: int):
    seen = {()}
    frontier = [()]
    for _ in range(radius):
        nxt = []
        for b in frontier:
            for t in graph.vertices:
                for sign in (1, -1):
                    w = W.multiply(graph, b, W.single(t, sign))
                    if w not in seen:
                        seen.add(w)
                        nxt.append(w)
        frontier = nxt
    return seen


# -- local geometry -------------------------------------------------------------

def detect_pockets(ball: CubeBall):
    """Unordered pairs of distinct squares sharing exactly two edges that meet
    in a common vertex; each witnesses a pair of distinct geodesics."""
    squares = [c for c in ball.cubes if c.dim == 2]
    edge_sets = []
    for c in squares:
        edges = {f for f in c.faces() if len(f) == 2}
        edge_sets.append(edges)
    pockets = []
    for i, j in itertools.combinations(range(len(squares)), 2):
        shared = edge_sets[i] & edge_sets[j]
        if len(shared) != 2:
            continue
        e1, e2 = shared
        if e1 & e2:
            pockets.append((squares[i], squares[j], tuple(sorted(map(sorted, shared)))))
    return pockets


def check_links(ball: CubeBall):
    """Flagness of interior vertex links plus the global common-face check."""
    interior = ball.interior_vertices()
    if not interior:
        raise NoInteriorVertices(
            f"radius {ball.radius} leaves no vertex with a full star"
        )
    link_reports = []
    for v in interior:
        link = vertex_link(ball, v)
        link_reports.append({"vertex": v, "flag": link.is_flag() if link else True})
    face_ok, face_witness = common_face_check(ball)
    return {
        "links": link_reports,
        "all_links_flag": all(r["flag"] for r in link_reports),
        "face_condition": face_ok,
        "face_witness": face_witness,
    }


def vertex_link(ball: CubeBall, v: int) -> SimplicialComplex | None:
    """Link of a vertex: one (d-1)-simplex per d-cube cornered at v, with the
    incident edges as vertex labels."""
    simplices = set()
    for c in ball.cubes:
        if c.dim == 0 or v not in c.corners:
            continue
        mask_v = c.corners.index(v)
        # edges of the cube at v: flip one coordinate of its corner bitmask
        edge_labels = []
        for i in range(c.dim):
            other = c.corners[mask_v ^ (1 << i)]
            edge_labels.append(frozenset((v, other)))
        for k in range(1, len(edge_labels) + 1):
            for combo in itertools.combinations(edge_labels, k):
                simplices.add(frozenset(combo))
    if not simplices:
        return None
    return SimplicialComplex(frozenset(simplices))


def common_face_check(ball: CubeBall):
    """Every pair of cubes with common vertices must meet in a common face."""
    by_vertex = {}
    for idx, c in enumerate(ball.cubes):
        for v in c.key:
            by_vertex.setdefault(v, set()).add(idx)
    face_cache = {}

    def faces_of(idx):
        if idx not in face_cache:
            face_cache[idx] = ball.cubes[idx].faces()
        return face_cache[idx]

    checked = set()
    for v, incident in by_vertex.items():
        for i, j in itertools.combinations(sorted(incident), 2):
            if (i, j) in checked:
                continue
            checked.add((i, j))
            shared = ball.cubes[i].key & ball.cubes[j].key
            if not shared:
                continue
            if shared not in faces_of(i) or shared not in faces_of(j):
                return False, (sorted(ball.cubes[i].key), sorted(ball.cubes[j].key))
    return True, None


def nerve_graph(ball: CubeBall) -> Graph:
    """Nerve of the apartments meeting the ball: one node per apartment,
    an edge when the pairwise intersection is non-empty."""
    engine = ball.engine
    witnesses = enumerate_apartments(ball)
    labels = [f"a{i}" for i in range(len(witnesses))]
    edges = []
    for i, j in itertools.combinations(range(len(witnesses)), 2):
        diff = engine.mul(engine.inv(witnesses[i]), witnesses[j])
        cls = classify_with_engine(engine, diff)
        if not cls.is_empty():
            edges.append([labels[i], labels[j]])
    return validate_graph({"vertices": labels, "edges": edges})


def export_ball(ball: CubeBall, path):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(ball.to_json(), fh, indent=2, sort_keys=True)
        fh.write("\n")
