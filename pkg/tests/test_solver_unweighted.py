import numpy as np
import pytest
from hypothesis import given, strategies as st

from subiso import dispatch
from subiso.errors import PreconditionError, UnsupportedOperationError
from subiso.generators import random_colored_instance, random_host, random_tree
from subiso.graph_core import ColoredInstance, Graph, is_valid_configuration
from subiso.hardness_gen.twl import twin_water_lily
from subiso.oracle import brute_solve_colored
from subiso.solver_unweighted import (kwise_decomposition, solve_pw, solve_tree, solve_tw)
from subiso.tensor_engine import NAIVE

seeds = st.integers(0, 2**32 - 1)


def sample(seed, kmax=5, nmax=5):
    r = np.random.default_rng(seed)
    k, n = int(r.integers(1, kmax + 1)), int(r.integers(1, nmax + 1))
    return random_colored_instance(r, k, n, p_pattern=r.uniform(0.3, 0.9),
                                   p_host=r.uniform(0.1, 0.6), planted=r.random() < 0.5,
                                   ragged=r.random() < 0.3)


@given(seeds)
def test_tw_and_pw_match_oracle(seed):
    inst = sample(seed)
    ref = brute_solve_colored(inst)
    for fn in (solve_tw, solve_pw):
        ok, R = fn(inst, witness=True)
        assert ok == ref
        if ok:
            assert len(R) == inst.k and is_valid_configuration(inst, R)


@given(seeds)
def test_interpreted_kernels_match_compiled(seed):
    inst = sample(seed)
    ref = solve_tw(inst, kernel="compiled")
    for kernel in ("dense", "packed", "einsum"):
        assert solve_tw(inst, kernel=kernel) == ref
    assert solve_tw(inst, kernel="dense", backend=NAIVE) == ref


@given(seeds, st.integers(1, 7), st.integers(1, 6))
def test_tree_solver(seed, k, n):
    r = np.random.default_rng(seed)
    H = random_tree(r, k)
    G, assignment, _ = random_host(r, H, n, float(r.uniform(0.05, 0.5)), planted=r.random() < 0.5)
    inst = ColoredInstance.build(H, G, assignment)
    ok, R = solve_tree(inst, witness=True)
    assert ok == brute_solve_colored(inst)
    if ok:
        assert is_valid_configuration(inst, R)


def test_planted_twl_instance_is_found():
    H = twin_water_lily(2, 0, 3)
    r = np.random.default_rng(5)
    G, assignment, chosen = random_host(r, H, 4, 0.2, planted=True)
    inst = ColoredInstance.build(H, G, assignment)
    ok, R = solve_tw(inst, witness=True)
    assert ok and is_valid_configuration(inst, R)
    assert solve_pw(inst)


def test_empty_preimage_is_no():
    H = Graph.from_edges(3, [(0, 1), (1, 2), (0, 2)])
    G = Graph.from_edges(2, [(0, 1)])
    inst = ColoredInstance.build(H, G, [0, 1])
    assert solve_tw(inst) is False and solve_pw(inst) is False


def test_tree_solver_rejects_cycles():
    H = Graph.from_edges(3, [(0, 1), (1, 2), (0, 2)])
    inst = ColoredInstance.build(H, Graph.from_edges(3, []), [0, 1, 2])
    with pytest.raises(PreconditionError):
        solve_tree(inst)


def test_supplied_decomposition_is_used():
    inst = sample(11, kmax=5)
    ktd = kwise_decomposition(inst.pattern) if not inst.pattern.is_forest() else None
    assert solve_tw(inst, decomposition=ktd) == brute_solve_colored(inst)


def test_dispatch_choices():
    tree = ColoredInstance.build(Graph.from_edges(2, [(0, 1)]), Graph.from_edges(2, [(0, 1)]), [0, 1])
    tri = ColoredInstance.build(Graph.from_edges(3, [(0, 1), (1, 2), (0, 2)]),
                                Graph.from_edges(3, [(0, 1), (1, 2), (0, 2)]), [0, 1, 2])
    assert dispatch.choose(tree) == "tree"
    assert dispatch.choose(tri) == "tw"
    assert dispatch.choose(tri, "pw") == "pw"
    assert dispatch.solve(tri) is True
    with pytest.raises(UnsupportedOperationError):
        dispatch.solve(tri, "ew-tw")
