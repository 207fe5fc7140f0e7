"""k-uniform (k+1)-hyperclique versus the boolean k-wise matrix product.

Tensor A^i (0-based i < k) is indexed by colors 0..k-1 with axis i standing for
color k, so the product's contracted index ranges over the last class.
"""
from __future__ import annotations

import math
from itertools import product

import numpy as np

from ..errors import ParameterError, PreconditionError
from ..graph_core import Hypergraph
from ..oracle import brute_hyperclique


def brute_decide(hg: Hypergraph) -> bool:
    return brute_hyperclique(hg) is not None


def _classes(hg: Hypergraph, k: int):
    if not hg.colored or hg.color_count != k + 1:
        raise PreconditionError(f"need a hypergraph colored with {k + 1} classes")
    if hg.h != k:
        raise PreconditionError(f"need a {k}-uniform hypergraph")
    return hg.classes


def hyperclique_to_kwise_mp(hg: Hypergraph, k: int):
    """k tensors whose product answers the hyperclique question, plus an extractor.

    Classes are padded to a common side n with always-false indices.
    extractor(product) is True iff some R with product[R] set has R(0..k-1) in E.
    """
    if k < 2:
        raise ParameterError("need k >= 2")
    cls = _classes(hg, k)
    n = max(len(c) for c in cls)
    tensors = []
    for i in range(k):
        A = np.zeros((n,) * k, dtype=bool)
        axes = [c for c in range(k) if c != i]
        for idx in product(*[range(len(cls[c])) for c in range(k)]):
            # idx[i] indexes class k at axis i
            if idx[i] >= len(cls[k]):
                continue
            verts = [cls[c][idx[c]] for c in axes] + [cls[k][idx[i]]]
            A[idx] = hg.has_edge(verts)
        tensors.append(A)

    def extractor(P) -> bool:
        P = np.asarray(P, dtype=bool)
        for idx in zip(*np.nonzero(P)):
            if all(idx[c] < len(cls[c]) for c in range(k)):
                if hg.has_edge([cls[c][idx[c]] for c in range(k)]):
                    return True
        return False

    return tensors, extractor


def _halves(part):
    if len(part) <= 1:
        return [part]
    mid = (len(part) + 1) // 2
    return [part[:mid], part[mid:]]


def find_hyperclique(hg: Hypergraph, decision_alg=None, stats: dict | None = None):
    """Halve every class, keep a tuple of halves that still holds a clique, repeat.

    Returns one vertex per class (class order) or None.  At most 2^(#classes)
    decisions per round and ceil(log2 n) rounds, plus the initial one.
    """
    decide = decision_alg or brute_decide
    if not hg.colored:
        raise PreconditionError("find_hyperclique needs a colored hypergraph")
    calls = 0

    def ask(parts):
        nonlocal calls
        calls += 1
        sub, _ = hg.restrict([v for p in parts for v in p])
        return decide(sub)

    parts = [list(c) for c in hg.classes]
    found = None
    if all(parts) and ask(parts):
        while any(len(p) > 1 for p in parts):
            for choice in product(*[_halves(p) for p in parts]):
                if ask(choice):
                    parts = [list(c) for c in choice]
                    break
            else:  # the decider contradicted itself
                raise RuntimeError("decision procedure is inconsistent")
        found = [p[0] for p in parts]
        if not hg.is_clique(found):
            raise RuntimeError("decision procedure accepted a clique-free instance")
    if stats is not None:
        stats["calls"] = calls
    return found


def kwise_mp_to_hyperclique(tensors, decision_alg=None, stats: dict | None = None) -> np.ndarray:
    """Boolean k-wise product computed only through hyperclique decisions.

    Class c < k holds n vertices c*n + j, class k holds k*n + j.  A^i fills the
    hyperedges avoiding class i; classes 0..k-1 get every hyperedge (the
    all-ones tensor).  Each class is cut into g = ceil(n^(k/(k+1))) parts; for
    every tuple of parts, while a clique exists we find one, record its first k
    vertices and delete that all-ones hyperedge.
    """
    arrs = [np.asarray(A, dtype=bool) for A in tensors]
    k = len(arrs)
    if k < 2:
        raise ParameterError("need k >= 2")
    n = arrs[0].shape[0]
    if any(A.shape != (n,) * k for A in arrs):
        raise ParameterError("tensors must all have shape (n,)*k")
    decide = decision_alg or brute_decide
    vid = lambda c, j: c * n + j  # noqa: E731
    edges = set()
    for i, A in enumerate(arrs):
        axes = [c for c in range(k) if c != i]
        for idx in zip(*np.nonzero(A)):
            edges.add(tuple(sorted([vid(c, int(idx[c])) for c in axes] + [vid(k, int(idx[i]))])))
    ones = {tuple(vid(c, j) for c, j in enumerate(idx)) for idx in product(range(n), repeat=k)}
    edges |= ones
    colors = tuple(c for c in range(k + 1) for _ in range(n))
    g = min(n, math.ceil(n ** (k / (k + 1)))) if n else 0
    chunks = [list(map(int, c)) for c in np.array_split(np.arange(n), g)] if n else []
    out = np.zeros((n,) * k, dtype=bool)
    calls = successes = 0

    def counted(sub):
        nonlocal calls
        calls += 1
        return decide(sub)

    for tup in product(range(len(chunks)), repeat=k + 1):
        keep = [vid(c, j) for c, t in enumerate(tup) for j in chunks[t]]
        while True:
            hg = Hypergraph(n * (k + 1), k, frozenset(edges), colors)
            sub, old = hg.restrict(keep)
            if not counted(sub):
                break
            clique = find_hyperclique(sub, counted)
            verts = sorted(old[v] for v in clique)
            cell = tuple(v % n for v in verts[:k])
            assert not out[cell], "a found clique must use an undeleted all-ones edge"
            out[cell] = True
            successes += 1
            edges.discard(tuple(verts[:k]))
    assert successes == int(out.sum()), "more successful decisions than true cells"
    if stats is not None:
        stats.update(calls=calls, successes=successes, groups=g)
    return out


def all_hypercliques(hg: Hypergraph):
    """Every multicolored clique (small inputs; used by tests)."""
    return [list(t) for t in product(*hg.classes) if hg.is_clique(t)]
