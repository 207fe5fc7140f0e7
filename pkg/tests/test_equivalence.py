import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from subiso.decomposition import exact_treewidth
from subiso.equivalence import (DEFAULT_SEED, checklist_parameters, colored_to_uncolored,
                                colored_to_uncolored_weighted, gadget_pattern, root_seed,
                                triangle_signature_counts, uncolored_to_colored)
from subiso.errors import SizeLimitError, UnsupportedOperationError
from subiso.generators import (plant_zero_weight, random_colored_instance, random_graph,
                               random_uncolored_instance, random_weights)
from subiso.graph_core import ColoredInstance, Graph, UncoloredInstance, WeightFn
from subiso.oracle import (brute_solve_colored, brute_solve_ew_colored,
                           brute_solve_ew_uncolored, brute_solve_uncolored, embedding_weight)

seeds = st.integers(0, 2**32 - 1)
K4 = Graph.from_edges(4, [(a, b) for a in range(4) for b in range(a + 1, 4)])


def test_root_seed(monkeypatch):
    monkeypatch.delenv("SUBISO_SEED", raising=False)
    assert root_seed() == DEFAULT_SEED
    monkeypatch.setenv("SUBISO_SEED", "17")
    assert root_seed() == 17 and root_seed(3) == 3


def test_color_coding_no_false_positive():
    # bipartite host has no K4
    G = Graph.from_edges(10, [(a, b) for a in range(10) for b in range(a + 1, 10) if (a + b) % 2])
    r = uncolored_to_colored(UncoloredInstance(K4, G), seed=1, trials=5)
    assert not r.found and r.trials_run == 5


def test_color_coding_witness_and_determinism():
    rng = np.random.default_rng(11)
    U = random_uncolored_instance(rng, 4, 10, p_host=0.2, planted=True)
    a = uncolored_to_colored(U, seed=3)
    b = uncolored_to_colored(U, seed=3)
    assert a == b
    if a.found:
        phi = a.witness
        assert len(set(phi.values())) == 4
        assert all(U.host.has_edge(phi[x], phi[y]) for x, y in U.pattern.edges)


@given(seeds)
@settings(max_examples=25)
def test_exhaustive_color_coding_is_exact(seed):
    r = np.random.default_rng(seed)
    k, nh = int(r.integers(1, 4)), int(r.integers(1, 6))
    U = random_uncolored_instance(r, k, nh, p_host=r.uniform(0.2, 0.8),
                                  planted=k <= nh and r.random() < 0.5)
    assert uncolored_to_colored(U, mode="exhaustive").found == brute_solve_uncolored(U)


def test_exhaustive_cap():
    U = UncoloredInstance(K4, Graph.from_edges(12, []))
    with pytest.raises(SizeLimitError):
        uncolored_to_colored(U, mode="exhaustive", cap=100)


def test_gadget_degrees():
    Ht, lay = gadget_pattern(K4)
    for i in range(4):
        assert Ht.degree(lay.v[i]) == i + 4
        assert len(lay.pendants[i]) == i + 2
    assert triangle_signature_counts(Ht, 4) == [1, 1, 1, 1]
    assert exact_treewidth(Ht)[0] == 3


def test_gadget_needs_treewidth_two():
    H = Graph.from_edges(3, [(0, 1), (1, 2)])
    inst = ColoredInstance.build(H, Graph.from_edges(3, [(0, 1), (1, 2)]), [0, 1, 2])
    with pytest.raises(UnsupportedOperationError):
        colored_to_uncolored(inst)


@given(seeds)
@settings(max_examples=30)
def test_gadget_reduction_sound(seed):
    r = np.random.default_rng(seed)
    k = int(r.integers(3, 5))
    H = random_graph(r, k, 0.8)
    if exact_treewidth(H)[0] < 2:
        return
    inst = random_colored_instance(r, k, int(r.integers(1, 3)), pattern=H,
                                   p_host=r.uniform(0.2, 0.7), planted=r.random() < 0.5)
    U, lay, color = colored_to_uncolored(inst)
    assert brute_solve_uncolored(U) == brute_solve_colored(inst)
    assert triangle_signature_counts(U.host, k) == [1] * k
    assert exact_treewidth(U.pattern)[0] == exact_treewidth(H)[0]


@given(seeds)
@settings(max_examples=40)
def test_weighted_checklist_sound(seed):
    r = np.random.default_rng(seed)
    inst = random_colored_instance(r, int(r.integers(1, 5)), int(r.integers(1, 4)),
                                   p_pattern=r.uniform(0.3, 1), p_host=r.uniform(0.2, 0.8),
                                   planted=r.random() < 0.6)
    inst = inst.with_weights(random_weights(r, inst, "node" if r.random() < 0.5 else "edge", 4))
    if r.random() < 0.6:
        inst = plant_zero_weight(r, inst)
    U = colored_to_uncolored_weighted(inst)
    assert brute_solve_ew_uncolored(U, 0) == brute_solve_ew_colored(inst, 0)


def _path_counterexample():
    # no class-0 / class-1 edge, so the colored instance is NO
    H = Graph.from_edges(3, [(0, 1), (1, 2)])
    a, x, z, y = 0, 1, 2, 3
    G = Graph.from_edges(4, [(y, x), (y, z)])
    return ColoredInstance.build(H, G, [0, 1, 1, 2], WeightFn.node([0, 0, 0, -1]))


def test_power_of_two_checklist_is_unsound():
    """2^k w + 2^i with 2^k - 1 removed in class 0 accepts x-y-z, which avoids class 0."""
    inst = _path_counterexample()
    k = inst.k
    enc = [2**k * w + 2**inst.f(v) - (2**k - 1 if inst.f(v) == 0 else 0)
           for v, w in enumerate(inst.weights.values)]
    assert enc == [-6, 2, 2, -4]
    bad = UncoloredInstance(inst.pattern, inst.host, WeightFn.node(enc))
    assert not brute_solve_ew_colored(inst, 0)
    ok, phi = brute_solve_ew_uncolored(bad, 0, witness=True)
    assert ok and 0 not in phi.values() and embedding_weight(bad, phi) == 0
    assert not brute_solve_ew_uncolored(colored_to_uncolored_weighted(inst), 0)


def test_checklist_parameters_frozen():
    H = Graph.from_edges(2, [(0, 1)])
    inst = ColoredInstance.build(H, Graph.from_edges(2, [(0, 1)]), [0, 1], WeightFn.node([0, 0]))
    assert checklist_parameters(inst) == (3, 27, 4)
    U = colored_to_uncolored_weighted(inst, target=0)
    assert list(U.weights.values) == [1 - 4, 3]
