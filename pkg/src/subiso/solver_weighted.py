"""Exact Weight Colored Subgraph Isomorphism.

Tables carry a trailing weight axis: arr[..., j] is true iff weight low + j is
achievable by an extension of the configuration into the cone.  Weights
inside the current separator/bag are never counted by a table; they are added
once at the root.  Isolated pattern vertices are split off (their preimage
weights are combined by a sumset at the end).
"""
from __future__ import annotations

import logging
import numpy as np

from .decomposition import (
    INTERMEDIATE,
    KWISE,
    KWiseTreeDecomposition,
    binarize_merges,
)
from .errors import PreconditionError, SizeLimitError, UnsupportedOperationError
from .graph_core import ColoredInstance, Graph, WeightFn, norm_edge
from .solver_unweighted import (
    _forest_order,
    _intermediate_children,
    has_empty_preimage,
    kwise_decomposition,
    path_decomposition,
    path_steps,
    transpose_to,
    validity_tensor,
)
from .tensor_engine import (BLOCKED, MMBackend, WeightSeq, conv_last, kwise_poly_arrays,
                            matmul, poly_matmul)

log = logging.getLogger(__name__)

MAX_WEIGHT_SPAN = 1 << 22


# ----------------------------------------------------------- table helpers


def _check_span(L):
    if L > MAX_WEIGHT_SPAN:
        raise SizeLimitError(f"weight range of {L} values exceeds the table limit")


def trim(arr, low):
    """Drop all-false weight columns at both ends."""
    cols = np.flatnonzero(arr.reshape(-1, arr.shape[-1]).any(axis=0)) if arr.size else []
    if len(cols) == 0:
        return arr[..., :1] & False, 0
    a, b = int(cols[0]), int(cols[-1])
    return arr[..., a:b + 1], low + a


def shift_entries(arr, low, s):
    """Shift the weight sequence of every entry by the integer array s (broadcast)."""
    s = np.broadcast_to(np.asarray(s, dtype=np.int64), arr.shape[:-1])
    if s.size == 0:
        return arr, low
    smin, smax = int(s.min()), int(s.max())
    L = arr.shape[-1]
    _check_span(L + smax - smin)
    out = np.zeros(arr.shape[:-1] + (L + smax - smin,), dtype=bool)
    idx = np.arange(L) + (s - smin)[..., None]
    np.put_along_axis(out, idx, arr, axis=-1)
    return out, low + smin


def conv(a, la, b, lb):
    _check_span(a.shape[-1] + b.shape[-1])
    return trim(conv_last(a, b, "bool"), la + lb)


def _pick(sets, total):
    """One value from each set summing to total, or None."""
    reach = [{0: None}]
    for S in sets:
        nxt = {}
        for s in reach[-1]:
            for x in S:
                nxt.setdefault(s + x, x)
        reach.append(nxt)
    if total not in reach[-1]:
        return None
    out = []
    for i in range(len(sets), 0, -1):
        x = reach[i][total]
        out.append(x)
        total -= x
    return out[::-1]


def _weights_of(arr1d, low) -> list:
    return [low + int(j) for j in np.flatnonzero(arr1d)]


# ------------------------------------------------------ weight conversion


def _require_weights(inst):
    if inst.weights is None:
        raise UnsupportedOperationError("weighted solver needs a weight function")


def _push_node_weights(inst: ColoredInstance, values) -> ColoredInstance:
    H, G = inst.pattern, inst.host
    emap: dict = {}
    for v, w in enumerate(values):
        if not w:
            continue
        x = inst.f(v)
        y = min(H.neighbors(x))
        for u in G.neighbors(v):
            if inst.f(u) == y:
                e = norm_edge(v, u)
                emap[e] = emap.get(e, 0) + w
    for e in G.edges:
        emap.setdefault(e, 0)
    return inst.with_weights(WeightFn.edge(emap))


def node_to_edge_weights(inst: ColoredInstance) -> ColoredInstance:
    """Move each vertex weight onto its edges towards the smallest pattern neighbour.

    Every valid configuration through v uses exactly one of those edges, so the
    set of valid configurations and their weights are unchanged.
    """
    if inst.weights is None or inst.weights.kind != "node":
        raise PreconditionError("node_to_edge_weights expects a node-weighted instance")
    for v, w in enumerate(inst.weights.values):
        if w and inst.host.degree(v) == 0:
            raise PreconditionError(f"host vertex {v} has weight {w} but no incident edge")
    return _push_node_weights(inst, inst.weights.values)


def _isolated_split(inst: ColoredInstance):
    """(edge-weighted instance, per-isolated-vertex weight lists, isolated pattern vertices).

    Weights of vertices that cannot take part in any valid configuration
    (isolated host vertices of non-isolated pattern vertices) are dropped.
    """
    _require_weights(inst)
    H = inst.pattern
    iso = H.isolated_vertices()
    per_iso = []
    if inst.weights.kind == "edge":
        return inst, [[0] for _ in iso], iso
    vals = list(inst.weights.values)
    for x in iso:
        per_iso.append([vals[v] for v in inst.preimage(x)])
    for v in range(inst.host.vertex_count):
        if H.degree(inst.f(v)) == 0 or inst.host.degree(v) == 0:
            vals[v] = 0
    return _push_node_weights(inst, vals), per_iso, iso


def _iso_seq(per_iso) -> tuple[np.ndarray, int]:
    arr, low = np.ones(1, dtype=bool), 0
    for ws in per_iso:
        s = WeightSeq.from_set(ws)
        if s.empty:
            return np.zeros(1, dtype=bool), 0
        arr, low = conv(arr, low, s.bits, s.offset)
    return arr, low


def normalize_target(inst: ColoredInstance, target: int) -> ColoredInstance:
    """Equivalent instance with target 0: subtract the target inside one preimage.

    Node weights: every vertex of the first preimage.  Edge weights: every host
    edge between the preimages of the first pattern edge (each solution uses
    exactly one of them).
    """
    _require_weights(inst)
    if not target:
        return inst
    w = inst.weights
    if w.kind == "node":
        vals = list(w.values)
        for v in inst.preimage(0):
            vals[v] -= target
        return inst.with_weights(WeightFn.node(vals))
    if not inst.pattern.edges:
        raise UnsupportedOperationError("edge weights without pattern edges: total is always 0")
    a, b = inst.pattern.sorted_edges()[0]
    m = dict(w.edge_map)
    for e in inst.host.edges:
        if {inst.f(e[0]), inst.f(e[1])} == {a, b}:
            m[e] = m.get(e, 0) - target
    return inst.with_weights(WeightFn.edge(m))


def _bag_weight(inst, labels) -> np.ndarray:
    """Edge weight of every configuration of `labels`, counting edges inside labels."""
    q = len(labels)
    n = inst.n
    out = np.zeros((n,) * q, dtype=np.int64)
    for a in range(q):
        for b in range(a + 1, q):
            if inst.pattern.has_edge(labels[a], labels[b]):
                shape = [1] * q
                shape[a] = shape[b] = n
                out = out + inst.edge_weight_block(labels[a], labels[b]).reshape(shape)
    return out


def _node_bag_weight(inst, labels) -> np.ndarray:
    q = len(labels)
    n = inst.n
    out = np.zeros((n,) * q, dtype=np.int64)
    for a, x in enumerate(labels):
        shape = [1] * q
        shape[a] = n
        out = out + inst.node_weight_vector(x).reshape(shape)
    return out


def _finish(arr, low, per_iso, target):
    """arr, low: 1-D achievable totals of the non-isolated part."""
    ia, il = _iso_seq(per_iso)
    tot, tl = conv(arr, low, ia, il)
    j = target - tl
    return 0 <= j < len(tot) and bool(tot[j])


def _root_totals(inst, tab, low, labels, weight_fn):
    shifted, sl = shift_entries(tab, low, weight_fn(inst, labels))
    flat = shifted.reshape(-1, shifted.shape[-1]).any(axis=0)
    return flat, sl


def _answer(ok, R, witness):
    return (ok, R) if witness else ok


# ---------------------------------------------------------- restriction


def restrict_preimages(inst: ColoredInstance, fixed: dict) -> tuple[ColoredInstance, list]:
    """Instance where pattern vertex x keeps only host vertex fixed[x]; returns old ids."""
    keep = [v for v in range(inst.host.vertex_count)
            if inst.f(v) not in fixed or fixed[inst.f(v)] == v]
    pos = {v: i for i, v in enumerate(keep)}
    G = Graph.from_edges(len(keep), [(pos[a], pos[b]) for a, b in inst.host.edges
                                     if a in pos and b in pos])
    w = inst.weights
    if w is None:
        nw = None
    elif w.kind == "node":
        nw = WeightFn.node([w.values[v] for v in keep])
    else:
        nw = WeightFn.edge({(pos[a], pos[b]): x for (a, b), x in w.values if a in pos and b in pos})
    return ColoredInstance.build(inst.pattern, G, [inst.f(v) for v in keep], nw), keep


def witness_by_self_reduction(inst, decide, target) -> dict | None:
    """Fix pattern vertices one at a time, keeping the instance solvable."""
    if not decide(inst, target):
        return None
    fixed: dict = {}
    for x in range(inst.k):
        for v in inst.preimage(x):
            trial = dict(fixed)
            trial[x] = v
            sub, _ = restrict_preimages(inst, trial)
            if decide(sub, target):
                fixed = trial
                break
        else:  # pragma: no cover
            raise AssertionError("self-reduction lost the solution")
    return fixed


# ------------------------------------------------------------------ trees


def solve_ew_tree(inst: ColoredInstance, target: int = 0, witness: bool = False,
                  backend: MMBackend = BLOCKED):
    """Forest patterns: polynomial matrix-vector product per pattern edge."""
    if witness:
        R = witness_by_self_reduction(inst, lambda i, t: solve_ew_tree(i, t, False, backend), target)
        return R is not None, R
    if not inst.pattern.is_forest():
        raise PreconditionError("solve_ew_tree needs a forest pattern")
    if has_empty_preimage(inst):
        return False
    einst, per_iso, iso = _isolated_split(inst)
    H = inst.pattern
    roots, parent, order = _forest_order(H)
    n = inst.n
    d = {}
    for v in reversed(order):
        if v in iso:
            continue
        arr, low = inst.mask(v)[:, None].copy(), 0
        for u in H.neighbors(v):
            if parent[u] != v:
                continue
            W = einst.edge_weight_block(v, u)
            A = inst.adj(v, u)
            wl = int(W[A].min()) if A.any() else 0
            wh = int(W[A].max()) if A.any() else 0
            _check_span(wh - wl + 1)
            P = np.zeros((n, n, wh - wl + 1), dtype=bool)
            ii, jj = np.nonzero(A)
            P[ii, jj, W[ii, jj] - wl] = True
            du, dl = d[u]
            M = poly_matmul(P, du[:, None, :], backend, "bool")[:, 0, :]
            arr, low = conv(arr, low, *trim(M, wl + dl))
        d[v] = trim(arr, low)
    tot, tl = np.ones(1, dtype=bool), 0
    for r in roots:
        if r in iso:
            continue
        a, l = d[r]
        tot, tl = conv(tot, tl, a.any(axis=0), l)
    return _finish(tot, tl, per_iso, target)


def solve_nw_tree_fast(inst: ColoredInstance, target: int = 0, witness: bool = False,
                       backend: MMBackend = BLOCKED):
    """Node weights on a forest: Adj_{v,u} times the weight-indexed child table."""
    if witness:
        R = witness_by_self_reduction(
            inst, lambda i, t: solve_nw_tree_fast(i, t, False, backend), target)
        return R is not None, R
    H = inst.pattern
    if inst.weights is None or inst.weights.kind != "node":
        raise PreconditionError("solve_nw_tree_fast needs node weights")
    if not H.is_forest():
        raise PreconditionError("solve_nw_tree_fast needs a forest pattern")
    if has_empty_preimage(inst):
        return False
    roots, parent, order = _forest_order(H)
    d = {}
    for v in reversed(order):
        arr, low = inst.mask(v)[:, None].copy(), 0
        for u in H.neighbors(v):
            if parent[u] != v:
                continue
            du, dl = d[u]
            M = matmul(inst.adj(v, u), du, backend, "bool")
            arr, low = conv(arr, low, M, dl)
        # d~_v[R, W] = d_{v, W - w(R)}(R): fold v's own weight in
        d[v] = trim(*shift_entries(arr, low, inst.node_weight_vector(v)))
    tot, tl = np.ones(1, dtype=bool), 0
    for r in roots:
        a, l = d[r]
        tot, tl = conv(tot, tl, a.any(axis=0), l)
    j = target - tl
    return 0 <= j < len(tot) and bool(tot[j])


# ------------------------------------------------------------- treewidth


def _weighted_kwise_step(inst, ktd, kw, tables):
    v, us, cs = ktd.kwise_layout(kw)
    H = inst.pattern
    k = len(us)
    arrs, low = [], 0
    for j, c in enumerate(cs):
        arr, l = tables[c]
        want = us[:j] + [v] + us[j + 1:]
        arr = transpose_to(arr, sorted(ktd.bags[c]), want)
        s = np.zeros((1,) * k, dtype=np.int64)
        # edges v-u_i: u_2..u_k ride on the first tensor, u_1 on the second
        partners = range(1, k) if j == 0 else ([0] if j == 1 else [])
        for i in partners:
            if H.has_edge(v, us[i]):
                shape = [1] * k
                shape[j] = shape[i] = inst.n
                blk = inst.edge_weight_block(v, us[i]) if j < i else inst.edge_weight_block(us[i], v)
                s = s + blk.reshape(shape)
        arr, l = shift_entries(arr, l, s)
        arrs.append(arr)
        low += l
    out = kwise_poly_arrays(arrs, semiring="bool")
    return trim(out, low)


def run_weighted_kwise_dp(inst: ColoredInstance, ktd: KWiseTreeDecomposition) -> dict:
    """node -> (table, low) with table[R..., j] <-> weight low + j (edge weights only)."""
    tables = {}
    for t in ktd.postorder():
        typ = ktd.node_type[t]
        if typ == KWISE:
            continue
        bag = sorted(ktd.bags[t])
        if typ == INTERMEDIATE:
            kw, cv = _intermediate_children(ktd, t)
            a, la = _weighted_kwise_step(inst, ktd, kw, tables)
            tables[t] = conv(a, la, *tables[cv])
        elif not ktd.children[t]:
            tables[t] = validity_tensor(inst, bag)[..., None], 0
        else:
            kids = ktd.children[t]
            acc = tables[kids[0]]
            for c in kids[1:]:
                acc = conv(*acc, *tables[c])
            tables[t] = acc
    return tables


def solve_ew_tw(inst: ColoredInstance, target: int = 0, witness: bool = False,
                decomposition=None):
    """Weighted treewidth DP over a binary-merge k-wise decomposition."""
    _require_weights(inst)
    H = inst.pattern
    if H.is_forest():
        log.info("forest pattern: dispatching to the weighted tree solver")
        return solve_ew_tree(inst, target, witness)
    if has_empty_preimage(inst):
        return _answer(False, None, witness)
    einst, per_iso, iso = _isolated_split(inst)
    if isinstance(decomposition, KWiseTreeDecomposition):
        ktd = decomposition if decomposition.binary else binarize_merges(decomposition)
    else:
        ktd = binarize_merges(kwise_decomposition(H, decomposition))
    tables = run_weighted_kwise_dp(einst, ktd)
    root = ktd.root
    labels = sorted(ktd.bags[root])
    arr, low = tables[root]
    tot, tl = _root_totals(einst, arr, low, labels, _bag_weight)
    ok = _finish(tot, tl, per_iso, target)
    if not witness or not ok:
        return _answer(ok, None, witness)
    return True, _recover_ew_tw(inst, einst, ktd, tables, per_iso, iso, target)


def _cell(tab, R, labels):
    arr, low = tab
    return _weights_of(arr[tuple(R[x] for x in labels)], low)


def _recover_ew_tw(inst, einst, ktd, tables, per_iso, iso, target) -> dict:
    n = inst.n
    root = ktd.root
    labels = sorted(ktd.bags[root])
    wbag = _bag_weight(einst, labels)
    arr, low = tables[root]
    iso_sets = [sorted(set(ws)) for ws in per_iso]
    start = None
    for idx in zip(*np.nonzero(arr.any(axis=-1))):
        R = dict(zip(labels, (int(i) for i in idx)))
        inner = _weights_of(arr[idx], low)
        got = _pick([inner] + iso_sets, target - int(wbag[idx]))
        if got is not None:
            start = (R, got[0], got[1:])
            break
    R0, W0, iso_ws = start
    pos: dict = {}
    stack = [(root, R0, W0)]
    while stack:
        t, R, W = stack.pop()
        pos.update(R)
        typ = ktd.node_type[t]
        bag = sorted(ktd.bags[t])
        if typ == INTERMEDIATE:
            kw, cv = _intermediate_children(ktd, t)
            v, us, cs = ktd.kwise_layout(kw)
            done = False
            for Wcv in _cell(tables[cv], R, bag):
                for y in range(n):
                    if not inst.mask(v)[y]:
                        continue
                    subs = []
                    for u, c in zip(us, cs):
                        Rc = {x: R[x] for x in us if x != u}
                        Rc[v] = y
                        subs.append((c, Rc))
                    edge_w = sum(int(einst.edge_weight_block(v, u)[y, R[u]])
                                 for u in us if inst.pattern.has_edge(v, u))
                    sets = [_cell(tables[c], Rc, sorted(ktd.bags[c])) for c, Rc in subs]
                    got = _pick(sets, W - Wcv - edge_w)
                    if got is not None:
                        stack.append((cv, R, Wcv))
                        stack.extend((c, Rc, w) for (c, Rc), w in zip(subs, got))
                        done = True
                        break
                if done:
                    break
            if not done:  # pragma: no cover
                raise AssertionError("inconsistent weighted DP tables")
        elif ktd.children[t]:
            kids = ktd.children[t]
            got = _pick([_cell(tables[c], R, bag) for c in kids], W)
            stack.extend((c, R, w) for c, w in zip(kids, got))
    out = {x: inst.preimage(x)[i] for x, i in pos.items()}
    for x, w in zip(iso, iso_ws):
        if inst.weights.kind == "node":
            out[x] = next(v for v in inst.preimage(x) if inst.weights.values[v] == w)
    return out


# ------------------------------------------------------------- pathwidth


def _adj_or_ones(inst, wh, vh):
    n = inst.n
    if inst.pattern.has_edge(vh, wh):
        return inst.adj(wh, vh)
    return np.ones((n, n), dtype=bool)


def solve_ew_pw(inst: ColoredInstance, target: int = 0, witness: bool = False,
                decomposition=None, backend: MMBackend = BLOCKED):
    """Weighted pathwidth DP: one polynomial n x n by n x n^(pw-1) product per inner bag."""
    _require_weights(inst)
    if witness:
        R = witness_by_self_reduction(
            inst, lambda i, t: solve_ew_pw(i, t, False, decomposition, backend), target)
        return R is not None, R
    H = inst.pattern
    if H.is_forest():
        return solve_ew_tree(inst, target, False, backend)
    if has_empty_preimage(inst):
        return False
    einst, per_iso, _ = _isolated_split(inst)
    pd = path_decomposition(H, decomposition)
    n = inst.n
    labels = sorted(pd.bags[0])
    cur, low = validity_tensor(inst, labels)[..., None], 0
    for vh, wh, E in path_steps(pd):
        q = len(E) + 1
        # weights of the edges from v_hat into E, per (v', R(E))
        s = np.zeros((1,) * q, dtype=np.int64)
        for a, x in enumerate(E):
            if H.has_edge(vh, x):
                shape = [1] * q
                shape[0] = shape[a + 1] = n
                s = s + einst.edge_weight_block(vh, x).reshape(shape)
        if vh == wh:
            ok = validity_tensor(inst, [vh] + E)[..., None]
            sv, svl = shift_entries(ok, 0, s)
            cur, low = conv(transpose_to(cur, labels, E), low, sv.any(axis=0), svl)
            continue
        B, bl = shift_entries(transpose_to(cur, labels, [vh] + E), low, s)
        if H.has_edge(vh, wh):
            A = inst.adj(wh, vh)
            Wb = einst.edge_weight_block(wh, vh)
            al = int(Wb[A].min()) if A.any() else 0
            ah = int(Wb[A].max()) if A.any() else 0
            P = np.zeros((n, n, ah - al + 1), dtype=bool)
            ii, jj = np.nonzero(A)
            P[ii, jj, Wb[ii, jj] - al] = True
        else:
            P, al = np.ones((n, n, 1), dtype=bool), 0
        L = B.shape[-1]
        prod = poly_matmul(P, B.reshape(n, -1, L), backend, "bool")
        labels = [wh] + E
        cur = prod.reshape((n,) * q + (prod.shape[-1],)) & validity_tensor(inst, labels)[..., None]
        cur, low = trim(cur, al + bl)
    tot, tl = _root_totals(einst, cur, low, labels, _bag_weight)
    return _finish(tot, tl, per_iso, target)


def solve_nw_pw_fast(inst: ColoredInstance, target: int = 0, witness: bool = False,
                     decomposition=None, backend: MMBackend = BLOCKED):
    """Node weights: B[R', W] = d_{W - w(R'(v_hat))}(R'), then one boolean product Adj . B."""
    if witness:
        R = witness_by_self_reduction(
            inst, lambda i, t: solve_nw_pw_fast(i, t, False, decomposition, backend), target)
        return R is not None, R
    if inst.weights is None or inst.weights.kind != "node":
        raise PreconditionError("solve_nw_pw_fast needs node weights")
    H = inst.pattern
    if H.is_forest():
        return solve_nw_tree_fast(inst, target, False, backend)
    if has_empty_preimage(inst):
        return False
    pd = path_decomposition(H, decomposition)
    n = inst.n
    labels = sorted(pd.bags[0])
    cur, low = validity_tensor(inst, labels)[..., None], 0
    for vh, wh, E in path_steps(pd):
        q = len(E) + 1
        wv = inst.node_weight_vector(vh).reshape((n,) + (1,) * len(E))
        if vh == wh:
            ok = validity_tensor(inst, [vh] + E)[..., None]
            sv, svl = shift_entries(ok, 0, wv)
            cur, low = conv(transpose_to(cur, labels, E), low, sv.any(axis=0), svl)
            continue
        B, bl = shift_entries(transpose_to(cur, labels, [vh] + E), low, wv)
        L = B.shape[-1]
        prod = matmul(_adj_or_ones(inst, wh, vh), B.reshape(n, -1), backend, "bool")
        labels = [wh] + E
        cur = prod.reshape((n,) * q + (L,)) & validity_tensor(inst, labels)[..., None]
        cur, low = trim(cur, bl)
    tot, tl = _root_totals(inst, cur, low, labels, _node_bag_weight)
    j = target - tl
    return 0 <= j < len(tot) and bool(tot[j])


__all__ = [
    "node_to_edge_weights", "normalize_target", "solve_ew_tw", "solve_ew_tree", "solve_ew_pw",
    "solve_nw_tree_fast", "solve_nw_pw_fast", "run_weighted_kwise_dp", "restrict_preimages",
    "shift_entries", "trim",
]
