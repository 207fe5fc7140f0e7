from itertools import combinations, product

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from subiso.decomposition import exact_pathwidth, exact_treewidth
from subiso.errors import ParameterError, PreconditionError
from subiso.generators import random_colored_hypergraph
from subiso.hardness_gen import (avg_free_set, colorize, find_hyperclique, fitted_constant,
                                 hyperclique_to_colsubiso, hyperclique_to_ew_colsubiso,
                                 hyperclique_to_kwise_mp, hyperclique_to_subsetsum,
                                 is_average_free, is_average_free_exhaustive,
                                 kwise_mp_to_hyperclique, ksum_to_subsetsum, subset_sum_dp,
                                 twin_water_lily, twl_parts, twl_width_bounds)
from subiso.graph_core import Hypergraph
from subiso.oracle import (brute_hyperclique, brute_kwise_product, brute_ksum,
                           brute_solve_colored, brute_solve_ew_colored, brute_subset_sum)
from subiso.tensor_engine import kwise_product_bool

seeds = st.integers(0, 2**32 - 1)


def test_twl_shape():
    G = twin_water_lily(2, 1, 2)
    s1, s2, P = twl_parts(2, 1, 2)
    assert len(P) == 15 and G.vertex_count == 18
    assert all(G.degree(x) == 0 for x in s1)
    assert all(G.degree(p) in (0, 1, 2) for p in P)
    with pytest.raises(ParameterError):
        twin_water_lily(1, 0, 2)


@pytest.mark.parametrize("h,s1,s2", [(2, 0, 2), (2, 1, 3), (3, 0, 3), (2, 0, 4)])
def test_twl_widths_within_bounds(h, s1, s2):
    G = twin_water_lily(h, s1, s2)
    tw_b, pw_b = twl_width_bounds(h, s1, s2)
    assert exact_treewidth(G, cap=64)[0] <= tw_b
    assert exact_pathwidth(G, cap=64)[0] <= pw_b


def test_avg_free_frozen():
    assert avg_free_set(5, 2, 0.5).elements == [0, 1, 3, 4, 9]
    s2, s3 = avg_free_set(40, 2, 0.5), avg_free_set(40, 3, 0.5)
    assert s2.elements[-1] == 256 and s3.elements[-1] == 1045
    assert is_average_free_exhaustive(s2.elements, 2)
    assert is_average_free_exhaustive(s3.elements, 3)
    assert 0 <= fitted_constant(s3) <= 1


def test_avg_free_validators_reject():
    assert not is_average_free([0, 1, 2], 2)           # 1 = (0 + 2) / 2
    assert is_average_free([0, 2, 6], 2)
    assert not is_average_free([0, 2, 6], 3)           # 2 = (0 + 0 + 6) / 3
    assert not is_average_free_exhaustive([1, 2, 3], 2)
    assert not is_average_free([1, 1], 2)


@given(st.lists(st.integers(0, 30), min_size=1, max_size=7, unique=True), st.integers(2, 3))
def test_avg_free_validators_agree(xs, k):
    assert is_average_free(xs, k) == is_average_free_exhaustive(xs, k)


def test_colorize():
    hg = Hypergraph(4, 2, frozenset({(0, 1), (2, 3)}))
    c = colorize(hg, 2)
    assert c.colored and c.color_count == 2 and c.vertex_count == 8


@given(seeds)
@settings(max_examples=40)
def test_colsubiso_reduction_sound(seed):
    r = np.random.default_rng(seed)
    N = int(r.integers(1, 4))
    hg = random_colored_hypergraph(r, 3, 6, N, float(r.uniform(0.5, 1.0)),
                                   planted=r.random() < 0.5)
    inst = hyperclique_to_colsubiso(hg, 3, 2)
    assert inst.preimage_size <= N ** 3
    assert brute_solve_colored(inst) == (brute_hyperclique(hg) is not None)


@given(seeds)
@settings(max_examples=30)
def test_ew_colsubiso_reduction_sound(seed):
    r = np.random.default_rng(seed)
    hg = random_colored_hypergraph(r, 2, 4, int(r.integers(1, 4)), float(r.uniform(0.3, 1.0)),
                                   planted=r.random() < 0.4)
    inst = hyperclique_to_ew_colsubiso(hg, 2, 1, 1, 0.5, 0.5)
    assert brute_solve_ew_colored(inst, 0) == (brute_hyperclique(hg) is not None)


def test_ew_colsubiso_details():
    r = np.random.default_rng(0)
    hg = random_colored_hypergraph(r, 2, 4, 2, 0.9, planted=True)
    inst, info = hyperclique_to_ew_colsubiso(hg, 2, 1, 1, 0.5, 0.5, details=True)
    assert is_average_free(info.avg_free.elements, info.avg_free.k)
    with pytest.raises((ParameterError, PreconditionError)):
        hyperclique_to_ew_colsubiso(hg, 2, 1, 1, 0.5, 2.0)


@given(seeds)
def test_ksum_to_subsetsum(seed):
    r = np.random.default_rng(seed)
    k, N, D = int(r.integers(1, 5)), int(r.integers(1, 4)), int(r.integers(1, 9))
    sets = [[int(x) for x in r.integers(0, D + 1, N)] for _ in range(k)]
    T = int(r.integers(0, k * D + 2))
    inst = ksum_to_subsetsum(sets, T)
    assert brute_subset_sum(inst.values, inst.T) == brute_ksum(sets, T)


def test_ksum_frozen():
    inst = ksum_to_subsetsum([[1, 2], [3, 4]], 5)
    # c = 3, L = 2: checklist at bit 5, counter at bit 9
    assert inst.values == [1 + 32 + 512, 2 + 32 + 512, 3 + 64 + 512, 4 + 64 + 512]
    assert inst.T == 5 + 96 + 1024
    assert brute_subset_sum(inst.values, inst.T)
    assert ksum_to_subsetsum([[1], [1]], 9).metadata.get("trivial_no")


@given(seeds)
@settings(max_examples=30)
def test_hyperclique_to_subsetsum(seed):
    r = np.random.default_rng(seed)
    hg = random_colored_hypergraph(r, 2, 2, int(r.integers(1, 4)), float(r.uniform(0.2, 0.9)),
                                   planted=r.random() < 0.4)
    inst = hyperclique_to_subsetsum(hg, 2, 1, 0.5)
    assert subset_sum_dp(inst.values, inst.T) == (brute_hyperclique(hg) is not None)


@given(st.lists(st.integers(0, 40), max_size=10), st.integers(1, 120))
def test_subset_sum_dp(values, T):
    ok, chosen = subset_sum_dp(values, T, witness=True)
    assert ok == brute_subset_sum(values, T)
    if ok:
        assert sum(values[i] for i in chosen) == T and chosen == sorted(set(chosen))


@given(seeds)
@settings(max_examples=40)
def test_hyperclique_kwise_roundtrip(seed):
    r = np.random.default_rng(seed)
    k = int(r.integers(2, 4))
    hg = random_colored_hypergraph(r, k, k + 1, int(r.integers(1, 4)), float(r.uniform(0.3, 0.9)))
    ref = brute_hyperclique(hg)
    tensors, extract = hyperclique_to_kwise_mp(hg, k)
    assert extract(kwise_product_bool(tensors)) == (ref is not None)
    found = find_hyperclique(hg)
    assert (found is None) == (ref is None)
    if found is not None:
        assert hg.is_clique(found)


@given(seeds)
@settings(max_examples=30)
def test_kwise_product_via_hyperclique(seed):
    r = np.random.default_rng(seed)
    k = int(r.integers(2, 4))
    n = int(r.integers(1, 5 if k == 2 else 3))
    ts = [r.random((n,) * k) < r.uniform(0.2, 0.8) for _ in range(k)]
    stats = {}
    out = kwise_mp_to_hyperclique(ts, stats=stats)
    assert np.array_equal(out, brute_kwise_product(ts))
    assert stats["successes"] == int(out.sum())


def test_find_hyperclique_rejects_liar():
    hg = Hypergraph(4, 2, frozenset({(1, 3)}), (0, 0, 1, 1))
    with pytest.raises(RuntimeError):
        find_hyperclique(hg, decision_alg=lambda sub: True)
    with pytest.raises(PreconditionError):
        find_hyperclique(Hypergraph(2, 2, frozenset({(0, 1)})))
