"""Smith normal form, chain complexes, reduced homology, persistence."""

import random

import pytest

from topraag.errors import NonClosedComplex
from topraag.graphs import complete_graph, cycle_graph, edge_graph, path_graph
from topraag.models import ShiftModel, TrivialModel, s3_a3_model
from topraag.complexes import build_ball
from topraag.homology import (
    SparseMatrix,
    chain_complex,
    clique_complex_homology,
    euler_characteristic_from_counts,
    euler_characteristic_from_homology,
    homological_connectivity,
    homology_of_cells,
    persistent_reduced_betti,
    rank_mod2,
    rank_over_Q,
    reduced_homology,
    simplicial_chain_complex,
    smith_normal_form,
    sublevel_complex,
    valley_homology_report,
)


def dense_mul(a, b):
    return [
        [sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(len(b[0]))]
        for i in range(len(a))
    ]


def test_snf_examples():
    assert smith_normal_form([[2, 0], [0, 3]]).divisors == [1, 6]
    assert smith_normal_form([[0, 0], [0, 0]]).divisors == []
    assert smith_normal_form([[1, 0], [0, 1]]).divisors == [1, 1]


def test_snf_diag23_bruteforce_2x2():
    # every unimodular S, T (entries in a small window) keeps the divisors
    got = smith_normal_form([[2, 0], [0, 3]])
    assert got.divisors == [1, 6]
    rng = random.Random(0)
    for _ in range(200):
        s = [[rng.randint(-2, 2) for _ in range(2)] for _ in range(2)]
        if s[0][0] * s[1][1] - s[0][1] * s[1][0] not in (1, -1):
            continue
        m = dense_mul(s, [[2, 0], [0, 3]])
        assert smith_normal_form(m).divisors == [1, 6]


def test_snf_transforms():
    rng = random.Random(1)
    for _ in range(60):
        rows, cols = rng.randint(1, 5), rng.randint(1, 5)
        m = [[rng.randint(-9, 9) for _ in range(cols)] for _ in range(rows)]
        res = smith_normal_form(m, with_transforms=True)
        s_mat, t_mat = res.transforms
        d = dense_mul(dense_mul(s_mat, m), t_mat)
        diag = res.diagonal()
        for i in range(rows):
            for j in range(cols):
                assert d[i][j] == (diag[min(i, j)] if i == j else 0)
        for i in range(len(res.divisors) - 1):
            assert res.divisors[i + 1] % res.divisors[i] == 0
        # transform path agrees with the sparse path
        assert res.divisors == smith_normal_form(m).divisors


def test_snf_rank_matches_Q_rank_random():
    rng = random.Random(2)
    for _ in range(120):
        rows, cols = rng.randint(1, 7), rng.randint(1, 7)
        m = [[rng.choice((-2, -1, 0, 0, 0, 1, 1, 2)) for _ in range(cols)] for _ in range(rows)]
        assert smith_normal_form(m).rank == rank_over_Q(m)


def test_rank_mod2():
    assert rank_mod2([[1, 1], [1, 1]]) == 1
    assert rank_mod2([[2, 0], [0, 3]]) == 1  # the even diagonal entry dies
    assert rank_mod2([[1, 0], [0, 1]]) == 2


def test_mod2_betti_detects_torsion():
    # a synthetic complex with Z/2 torsion: one 0-cell, one 1-cell, one
    # 2-cell glued twice (boundary matrix [2]); like a projective plane
    b1 = SparseMatrix(1, 1)
    b2 = SparseMatrix(1, 1)
    b2.set(0, 0, 2)
    from topraag.homology import ChainComplex

    cc = ChainComplex({1: b1, 2: b2}, {0: 1, 1: 1, 2: 1})
    res = reduced_homology(cc)
    assert res.betti[1] == 0 and res.torsion[1] == [2]
    # universal coefficients: dim H_k(F2) = betti_k + t_k(2) + t_{k-1}(2)
    dim_h1_mod2 = 1 - rank_mod2([[0]]) - rank_mod2([[2]])
    assert dim_h1_mod2 == res.betti[1] + 1  # torsion contributes once


def test_chain_complex_squares():
    cells = [(0, (), (i,)) for i in range(4)] + [
        (1, ("x",), (0, 1)),
        (1, ("x",), (1, 2)),
        (1, ("x",), (2, 3)),
        (1, ("x",), (3, 0)),
    ]
    cc = chain_complex(cells)
    assert cc.counts == {0: 4, 1: 4}
    res = reduced_homology(cc)
    assert res.betti == {0: 0, 1: 1}
    filled = cells + [(2, ("x", "y"), (0, 1, 3, 2))]
    res2 = reduced_homology(chain_complex(filled))
    assert all(v == 0 for v in res2.betti.values())


def test_chain_complex_three_cube():
    # solid 3-cube from a trivial-model ball over K3
    ball = build_ball(TrivialModel(), complete_graph("abc"), 3)
    cubes3 = [c for c in ball.cubes if c.dim == 3]
    assert cubes3
    cc = chain_complex(ball)
    assert cc.boundaries[3].cols and all(
        len(cc.boundaries[3].cols[j]) == 6 for j in cc.boundaries[3].cols
    )
    res = reduced_homology(cc)
    assert all(v == 0 for v in res.betti.values())
    assert all(not t for t in res.torsion.values())


def test_missing_face_raises():
    with pytest.raises(NonClosedComplex):
        chain_complex([(0, (), (0,)), (1, ("x",), (0, 1))])


def test_two_points():
    res = homology_of_cells([(0, (), (0,)), (0, (), (1,))])
    assert res.betti[0] == 1
    n, flag = homological_connectivity(res)
    assert n == -1


def test_connectivity_values():
    circle = [(0, (), (i,)) for i in range(4)] + [
        (1, ("x",), (0, 1)),
        (1, ("x",), (1, 2)),
        (1, ("x",), (2, 3)),
        (1, ("x",), (3, 0)),
    ]
    res = homology_of_cells(circle)
    n, flag = homological_connectivity(res)
    assert n == 0 and flag == "exact below computed range"
    ball = build_ball(TrivialModel(), edge_graph(), 2)
    res = homology_of_cells(ball)
    n, flag = homological_connectivity(res)
    assert n == res.computed_through and flag == "within computed range"


def test_euler_characteristic_consistency():
    rng = random.Random(3)
    models = [TrivialModel(), ShiftModel(2), s3_a3_model()]
    graphs = [edge_graph(), complete_graph("abc"), cycle_graph("abcd"), path_graph("pqr")]
    for _ in range(12):
        model = rng.choice(models)
        graph = rng.choice(graphs)
        try:
            ball = build_ball(model, graph, rng.randint(1, 2))
        except Exception:
            continue
        counts = {}
        for c in ball.cubes:
            counts[c.dim] = counts.get(c.dim, 0) + 1
        res = reduced_homology(chain_complex(ball))
        assert euler_characteristic_from_counts(counts) == euler_characteristic_from_homology(res)


def test_simplicial_homology():
    # boundary of a triangle = circle; filled triangle = disc
    hollow = [frozenset(s) for s in ({"a", "b"}, {"b", "c"}, {"a", "c"}, {"a"}, {"b"}, {"c"})]
    res = reduced_homology(simplicial_chain_complex(hollow))
    assert res.betti == {0: 0, 1: 1}
    filled = hollow + [frozenset({"a", "b", "c"})]
    res = reduced_homology(simplicial_chain_complex(filled))
    assert all(v == 0 for v in res.betti.values())


def test_clique_complex_homology():
    res = clique_complex_homology(cycle_graph("abcd"))
    assert res.betti[0] == 0 and res.betti[1] == 1
    res = clique_complex_homology(complete_graph("abc"))
    assert all(v == 0 for v in res.betti.values())


def test_persistence_identity_inclusion():
    cells = [(0, (), (i,)) for i in range(4)] + [
        (1, ("x",), (0, 1)),
        (1, ("x",), (1, 2)),
        (1, ("x",), (2, 3)),
        (1, ("x",), (3, 0)),
    ]
    vmap = {i: i for i in range(4)}
    assert persistent_reduced_betti(cells, cells, vmap, 0) == 0
    assert persistent_reduced_betti(cells, cells, vmap, 1) == 1


def test_persistence_cycle_dies_in_disc():
    circle = [(0, (), (i,)) for i in range(4)] + [
        (1, ("x",), (0, 1)),
        (1, ("x",), (1, 2)),
        (1, ("x",), (2, 3)),
        (1, ("x",), (3, 0)),
    ]
    disc = circle + [(2, ("x", "y"), (0, 1, 3, 2))]
    vmap = {i: i for i in range(4)}
    assert persistent_reduced_betti(circle, disc, vmap, 1) == 0
    # two components merging kill the extra H0 class
    two = [(0, (), (0,)), (0, (), (1,))]
    joined = two + [(1, ("x",), (0, 1))]
    assert persistent_reduced_betti(two, joined, {0: 0, 1: 1}, 0) == 0


def test_valley_homology_reports():
    rep = valley_homology_report(edge_graph(), 0, 4)
    assert rep["persistent_reduced_betti"] == {"0": 0, "1": 0}
    assert rep["stabilised_plain"]
    rep = valley_homology_report(complete_graph("abc"), 0, 4)
    assert rep["persistent_reduced_betti"] == {"0": 0, "1": 0}


def test_valley_homology_c4():
    rep = valley_homology_report(cycle_graph("abcd"), 0, 4)
    assert rep["persistent_reduced_betti"]["0"] == 0
    assert rep["persistent_reduced_betti"]["1"] > 0


def test_valley_connectivity_matches_clique_complex():
    for graph in (edge_graph(), complete_graph("abc"), cycle_graph("abcd")):
        lg = clique_complex_homology(graph)
        rep = valley_homology_report(graph, 0, 4)
        pers = rep["persistent_reduced_betti"]
        assert (pers["0"] == 0) == lg.is_zero(0)
        assert (pers["1"] == 0) == (lg.is_zero(0) and lg.is_zero(1))


def test_dd_zero_on_generated_complexes():
    # construction itself checks dd = 0; touch several shapes
    for model, graph, r in [
        (TrivialModel(), cycle_graph("abcd"), 2),
        (ShiftModel(2), edge_graph(), 2),
        (s3_a3_model(), edge_graph(), 2),
    ]:
        cc = chain_complex(build_ball(model, graph, r))
        for d, bd in cc.boundaries.items():
            if d + 1 in cc.boundaries:
                assert not bd.mul(cc.boundaries[d + 1]).nnz()
