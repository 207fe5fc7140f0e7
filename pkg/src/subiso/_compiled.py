"""Compiled executor for the unweighted k-wise DP.

The Python driver in solver_unweighted spends a few hundred microseconds of
interpreter time per decomposition node, which swamps the n^(k+1) kernel at
small n.  Here the whole bottom-up pass runs as one compiled call over a
flat node plan.  The k-wise product is evaluated in full (no early exit), so
the cost is exactly the n^(k+1) formula.
"""
from __future__ import annotations

import numpy as np

try:  # pragma: no cover - exercised when numba is importable
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    HAVE_NUMBA = False

    def njit(*a, **kw):
        def wrap(f):
            return f
        return wrap(a[0]) if a and callable(a[0]) else wrap

from .decomposition import INTERMEDIATE, KWISE

MERGE_OP, INTER_OP = 0, 1


@njit(cache=True)
def _run(n, k, ops, bags, child_ptr, child_idx, kw_rows, kw_coef, kw_vcoef, kw_v, cv_row,
         edge_id, adjs, masks):
    T = ops.shape[0]
    size = n ** k
    tables = np.zeros((T, size), dtype=np.bool_)
    digits = np.zeros(k, dtype=np.int64)
    base = np.zeros(k, dtype=np.int64)
    for t in range(T):
        if ops[t] == MERGE_OP and child_ptr[t + 1] > child_ptr[t]:
            # children already carry validity of the shared bag
            tables[t, :] = tables[child_idx[child_ptr[t]], :]
            for p in range(child_ptr[t] + 1, child_ptr[t + 1]):
                tables[t, :] &= tables[child_idx[p], :]
            continue
        digits[:] = 0
        base[:] = 0
        v = kw_v[t]
        cv = cv_row[t]
        for c in range(size):
            if ops[t] == MERGE_OP:
                ok = True
                for i in range(k):
                    ok = ok & masks[bags[t, i], digits[i]]
                for a in range(k):
                    for b in range(a + 1, k):
                        e = edge_id[t, a, b]
                        if e >= 0:
                            ok = ok & adjs[e, digits[a], digits[b]]
                tables[t, c] = ok
            else:
                hit = False
                for y in range(n):
                    acc = masks[v, y]
                    for j in range(k):
                        acc = acc & tables[kw_rows[t, j], base[j] + y * kw_vcoef[t, j]]
                    hit = hit | acc
                tables[t, c] = hit & tables[cv, c]
            # odometer step over the bag digits, keeping child offsets in sync
            i = k - 1
            while i >= 0:
                digits[i] += 1
                for j in range(k):
                    base[j] += kw_coef[t, j, i]
                if digits[i] < n:
                    break
                digits[i] = 0
                for j in range(k):
                    base[j] -= kw_coef[t, j, i] * n
                i -= 1
    return tables


def _skeleton(ktd, n: int, H):
    """Instance-independent part of the plan, memoised on the decomposition."""
    memo = ktd.__dict__.setdefault("_plan_memo", {})
    key = (n, H)
    if key not in memo:
        if len(memo) >= 16:
            memo.clear()
        memo[key] = _build_skeleton(ktd, n, H)
    return memo[key]


def _build_skeleton(ktd, n: int, H):
    k = ktd.width
    nodes = [t for t in ktd.postorder() if ktd.node_type[t] != KWISE]
    row = {t: i for i, t in enumerate(nodes)}
    T = len(nodes)
    ops = np.zeros(T, dtype=np.int64)
    bags = np.zeros((T, k), dtype=np.int64)
    child_ptr = np.zeros(T + 1, dtype=np.int64)
    child_idx = []
    kw_rows = np.zeros((T, k), dtype=np.int64)
    kw_coef = np.zeros((T, k, k), dtype=np.int64)
    kw_vcoef = np.zeros((T, k), dtype=np.int64)
    kw_v = np.zeros(T, dtype=np.int64)
    cv_row = np.zeros(T, dtype=np.int64)
    edge_id = -np.ones((T, k, k), dtype=np.int64)
    pattern_edges = H.sorted_edges()
    eid = {e: i for i, e in enumerate(pattern_edges)}
    for i, t in enumerate(nodes):
        bag = sorted(ktd.bags[t])
        bags[i] = bag
        if ktd.node_type[t] == INTERMEDIATE:
            ops[i] = INTER_OP
            kw = next(c for c in ktd.children[t] if ktd.node_type[c] == KWISE)
            cv = next(c for c in ktd.children[t] if ktd.node_type[c] != KWISE)
            cv_row[i] = row[cv]
            v, us, cs = ktd.kwise_layout(kw)
            kw_v[i] = v
            for j, c in enumerate(cs):
                kw_rows[i, j] = row[c]
                cb = sorted(ktd.bags[c])
                stride = {x: n ** (k - 1 - p) for p, x in enumerate(cb)}
                for a, u in enumerate(us):
                    kw_coef[i, j, a] = 0 if a == j else stride[u]
                kw_vcoef[i, j] = stride[v]
        else:
            ops[i] = MERGE_OP
            for a in range(k):
                for b in range(a + 1, k):
                    e = (bag[a], bag[b])
                    if e in eid:
                        edge_id[i, a, b] = eid[e]
            child_idx += [row[c] for c in ktd.children[t]]
        child_ptr[i + 1] = len(child_idx)
    for arr in (ops, bags, child_ptr, kw_rows, kw_coef, kw_vcoef, kw_v, cv_row, edge_id):
        arr.flags.writeable = False
    child_idx = np.array(child_idx, dtype=np.int64)
    return tuple(nodes), pattern_edges, (ops, bags, child_ptr, child_idx, kw_rows, kw_coef,
                                         kw_vcoef, kw_v, cv_row, edge_id)


def build_plan(inst, ktd):
    """Flatten the table-bearing nodes of `ktd` (postorder) into arrays."""
    H, n = inst.pattern, inst.n
    nodes, pattern_edges, arrays = _skeleton(ktd, n, H)
    adjs = inst.adj_stack
    masks = inst.mask_matrix
    return list(nodes), (n, ktd.width, *arrays, adjs, masks)


def run_compiled(inst, ktd) -> dict:
    """Same tables as the interpreted driver: node id -> array over sorted-bag configurations."""
    nodes, plan = build_plan(inst, ktd)
    flat = _run(*plan)
    k, n = ktd.width, inst.n
    return {t: flat[i].reshape((n,) * k) for i, t in enumerate(nodes)}
