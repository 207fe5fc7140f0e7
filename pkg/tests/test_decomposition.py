import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from subiso.decomposition import (INTERMEDIATE, KWISE, MERGE, binarize_merges, exact_pathwidth,
                                  exact_treewidth, normalize_path, normalize_to_kwise,
                                  td_from_ordering, validate)
from subiso.errors import SizeLimitError
from subiso.graph_core import Graph
from subiso.oracle import brute_treewidth


def brute_pathwidth(G):
    # vertex separation number over all orders
    best = G.vertex_count
    for order in itertools.permutations(range(G.vertex_count)):
        L, N, w = set(), set(), 0
        for v in order:
            L.add(v)
            N |= G.neighbors(v)
            w = max(w, len(N - L))
            if w >= best:
                break
        best = min(best, w)
    return best


def grid(r, c):
    idx = lambda i, j: i * c + j  # noqa: E731
    E = [(idx(i, j), idx(i, j + 1)) for i in range(r) for j in range(c - 1)]
    E += [(idx(i, j), idx(i + 1, j)) for i in range(r - 1) for j in range(c)]
    return Graph.from_edges(r * c, E)


SPIDER = Graph.from_edges(7, [(0, 1), (1, 2), (0, 3), (3, 4), (0, 5), (5, 6)])

# frozen widths (treewidth, pathwidth), checked by hand
FROZEN = [
    ("K4", Graph.from_edges(4, itertools.combinations(range(4), 2)), 3, 3),
    ("C5", Graph.from_edges(5, [(i, (i + 1) % 5) for i in range(5)]), 2, 2),
    ("P4", Graph.from_edges(4, [(0, 1), (1, 2), (2, 3)]), 1, 1),
    ("spider", SPIDER, 1, 2),
    ("grid3x3", grid(3, 3), 3, 3),
    ("empty3", Graph.from_edges(3, []), 0, 0),
]


@pytest.mark.parametrize("name,G,tw,pw", FROZEN, ids=[f[0] for f in FROZEN])
def test_frozen_widths(name, G, tw, pw):
    w, td = exact_treewidth(G)
    assert w == tw and td.width == tw and validate(td, G) == []
    p, pd = exact_pathwidth(G)
    assert p == pw and pd.width == pw and validate(pd, G) == []


def random_graph(seed, nmax=7):
    r = np.random.default_rng(seed)
    n = int(r.integers(1, nmax + 1))
    p = float(r.random())
    return Graph.from_edges(n, [e for e in itertools.combinations(range(n), 2) if r.random() < p])


@given(st.integers(0, 2**32 - 1))
def test_exact_widths_match_brute_force(seed):
    G = random_graph(seed)
    tw, td = exact_treewidth(G)
    pw, pd = exact_pathwidth(G)
    assert tw == brute_treewidth(G)
    assert pw == brute_pathwidth(G)
    assert validate(td, G) == [] and validate(pd, G) == []
    assert tw <= pw


@given(st.integers(0, 2**32 - 1))
def test_kwise_normal_form(seed):
    G = random_graph(seed)
    tw, td = exact_treewidth(G)
    if tw < 1:
        return
    kt = normalize_to_kwise(td)
    assert validate(kt, G) == [] and kt.width == tw
    types = set(kt.node_type)
    assert types <= {INTERMEDIATE, KWISE, MERGE}
    # k-wise nodes hold tw + 1 vertices, every other node exactly tw
    for typ, bag in zip(kt.node_type, kt.bags):
        assert len(bag) == (tw + 1 if typ == KWISE else tw)
    b = binarize_merges(kt)
    assert validate(b, G) == []
    assert all(len(c) in (0, 2) for t, c in enumerate(b.children) if b.node_type[t] == MERGE)


@given(st.integers(0, 2**32 - 1))
def test_path_normal_form(seed):
    G = random_graph(seed)
    pw, pd = exact_pathwidth(G)
    if pw < 1:
        return
    npd = normalize_path(pd)
    assert validate(npd, G, normalized=True) == []


def test_ordering_gives_valid_decomposition():
    G = grid(2, 4)
    td = td_from_ordering(G, list(range(8)))
    assert validate(td, G) == []


def test_validate_reports_missing_edge():
    from subiso.decomposition import TreeDecomposition

    G = Graph.from_edges(3, [(0, 1), (1, 2)])
    bad = TreeDecomposition([frozenset({0, 1}), frozenset({2})], [-1, 0])
    assert validate(bad, G)


def test_cap_raises():
    K = Graph.from_edges(12, itertools.combinations(range(12), 2))
    # a clique reduces away entirely; the random graph below does not
    assert exact_treewidth(K)[0] == 11
    r = np.random.default_rng(0)
    G = Graph.from_edges(30, [e for e in itertools.combinations(range(30), 2) if r.random() < 0.3])
    with pytest.raises(SizeLimitError):
        exact_treewidth(G, cap=5)
