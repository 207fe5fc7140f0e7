"""Brute-force references on small instances whose answers were worked out by hand."""
import itertools

import numpy as np
import pytest

from subiso.errors import SizeLimitError
from subiso.graph_core import ColoredInstance, Graph, Hypergraph, UncoloredInstance, WeightFn
from subiso.oracle import (brute_hyperclique, brute_ksum, brute_kwise_product,
                           brute_solve_colored, brute_solve_ew_colored,
                           brute_solve_ew_uncolored, brute_solve_uncolored, brute_subset_sum,
                           brute_treewidth, naive_kwise_product_poly)

TRI = Graph.from_edges(3, [(0, 1), (1, 2), (0, 2)])


def tri_instance(host_edges):
    return ColoredInstance.build(TRI, Graph.from_edges(6, host_edges), [0, 0, 1, 1, 2, 2])


def test_colored_triangle_yes_and_no():
    yes = tri_instance([(0, 2), (2, 4), (0, 4), (1, 3)])
    ok, R = brute_solve_colored(yes, witness=True)
    assert ok and R == {0: 0, 1: 2, 2: 4}
    no = tri_instance([(0, 2), (2, 4), (1, 4), (1, 3)])
    assert brute_solve_colored(no) is False


def test_exact_weight_colored():
    inst = tri_instance([(0, 2), (2, 4), (0, 4), (1, 3), (3, 5), (1, 5)])
    w = inst.with_weights(WeightFn.node([1, 2, -4, 0, 3, 1]))
    # triangles: (0,2,4) weighs 0, (1,3,5) weighs 3
    assert brute_solve_ew_colored(w, 0) is True
    assert brute_solve_ew_colored(w, 3) is True
    assert brute_solve_ew_colored(w, 1) is False
    e = inst.with_weights(WeightFn.edge({(0, 2): 1, (2, 4): 1, (0, 4): 1,
                                         (1, 3): -2, (3, 5): 0, (1, 5): 0}))
    assert brute_solve_ew_colored(e, 3) and brute_solve_ew_colored(e, -2)
    assert not brute_solve_ew_colored(e, 0)


def test_uncolored_embeddings():
    C4 = Graph.from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)])
    K4 = Graph.from_edges(4, itertools.combinations(range(4), 2))
    assert brute_solve_uncolored(UncoloredInstance(C4, K4))
    assert not brute_solve_uncolored(UncoloredInstance(TRI, C4))
    ok, phi = brute_solve_uncolored(UncoloredInstance(TRI, K4), witness=True)
    assert ok and len(set(phi.values())) == 3
    # path of length 2 in a star: centre must map to the hub
    star = Graph.from_edges(4, [(0, 1), (0, 2), (0, 3)])
    P3 = Graph.from_edges(3, [(0, 1), (1, 2)])
    w = WeightFn.node([10, 1, 2, 3])
    # totals are 10 plus a pair of leaves: 13, 14 or 15
    for T, want in ((12, False), (13, True), (15, True), (16, False)):
        assert brute_solve_ew_uncolored(UncoloredInstance(P3, star, w), T) is want


def test_hyperclique():
    # 3 colour classes of 2, 2-uniform: a triangle 0-2-4 exists
    hg = Hypergraph(6, 2, frozenset({(0, 2), (2, 4), (0, 4), (1, 3)}), (0, 0, 1, 1, 2, 2))
    assert sorted(brute_hyperclique(hg)) == [0, 2, 4]
    hg2 = Hypergraph(6, 2, frozenset({(0, 2), (2, 4), (1, 4)}), (0, 0, 1, 1, 2, 2))
    assert brute_hyperclique(hg2) is None
    h3 = Hypergraph(4, 3, frozenset(itertools.combinations(range(4), 3)))
    assert brute_hyperclique(h3, k=4) is not None


def test_subset_sum_and_ksum():
    assert brute_subset_sum([3, 5, 7], 12) is True
    assert brute_subset_sum([3, 5, 7], 13) is False
    assert brute_subset_sum([], 0) is True
    assert brute_subset_sum([4], -1) is False
    assert brute_ksum([[1, 2], [3, 4]], 5) is True
    assert brute_ksum([[1, 2], [3, 4]], 7) is False


def test_kwise_references():
    A = np.array([[1, 0], [0, 1]], bool)
    B = np.array([[0, 1], [1, 0]], bool)
    assert brute_kwise_product([A, B]).tolist() == [[False, True], [True, False]]
    # 2-wise over polynomials: out[i, j] = sum_l A1[l, j] * A2[i, l]
    A1 = {(0, 0): {1: 2}}
    A2 = {(0, 0): {0: 1, 2: 3}}
    assert naive_kwise_product_poly([A1, A2], 1) == {(0, 0): {1: 2, 3: 6}}


@pytest.mark.parametrize("G,tw", [
    (TRI, 2),
    (Graph.from_edges(5, [(i, i + 1) for i in range(4)]), 1),
    (Graph.from_edges(5, itertools.combinations(range(5), 2)), 4),
])
def test_brute_treewidth(G, tw):
    assert brute_treewidth(G) == tw


def test_guard_trips():
    K = Graph.from_edges(9, itertools.combinations(range(9), 2))
    H = Graph.from_edges(9, [(i, i + 1) for i in range(8)] + [(0, 8), (0, 4), (2, 6)])
    with pytest.raises(SizeLimitError):
        # a cycle-with-chords pattern embeds, but the tiny guard stops the search first
        brute_solve_uncolored(UncoloredInstance(Graph.from_edges(9, []), K), guard=3)
    assert brute_solve_uncolored(UncoloredInstance(H, K))
