"""Colored Subgraph Isomorphism by dynamic programming over decompositions.

Every DP table is a boolean array indexed by the preimage positions of the
vertices of a bag (axes in sorted vertex order).  Padding positions of short
preimages are always false.
"""
from __future__ import annotations

import logging
from functools import lru_cache

import numpy as np

from ._compiled import HAVE_NUMBA, run_compiled
from .decomposition import (
    INTERMEDIATE,
    KWISE,
    KWiseTreeDecomposition,
    PathDecomposition,
    TreeDecomposition,
    exact_pathwidth,
    exact_treewidth,
    normalize_path,
    normalize_to_kwise,
)
from .errors import PreconditionError
from .graph_core import ColoredInstance
from .tensor_engine import BLOCKED, MMBackend, kwise_product_bool, matmul

log = logging.getLogger(__name__)


def _answer(ok, R, witness):
    return (ok, R) if witness else ok


def has_empty_preimage(inst: ColoredInstance) -> bool:
    return any(len(inst.preimage(x)) == 0 for x in range(inst.k))


def validity_tensor(inst: ColoredInstance, labels) -> np.ndarray:
    """ValConf over the given (ordered) pattern vertices, masks included."""
    labels = list(labels)
    q = len(labels)
    n = inst.n
    out = np.ones((n,) * q, dtype=bool)
    for a, x in enumerate(labels):
        shape = [1] * q
        shape[a] = n
        out &= inst.mask(x).reshape(shape)
    H = inst.pattern
    for a in range(q):
        for b in range(a + 1, q):
            if H.has_edge(labels[a], labels[b]):
                shape = [1] * q
                shape[a] = shape[b] = n
                out &= inst.adj(labels[a], labels[b]).reshape(shape)
    return out


def transpose_to(arr: np.ndarray, have, want) -> np.ndarray:
    """Reorder the leading axes of arr from label order `have` to `want`."""
    have = list(have)
    perm = [have.index(x) for x in want]
    perm += list(range(len(have), arr.ndim))
    return arr.transpose(perm)


# ------------------------------------------------------------------ trees


def _forest_order(H):
    """(roots, parent, order) with every vertex after its parent."""
    parent = [-1] * H.vertex_count
    order, roots = [], []
    seen = set()
    for r in range(H.vertex_count):
        if r in seen:
            continue
        roots.append(r)
        seen.add(r)
        stack = [r]
        while stack:
            v = stack.pop()
            order.append(v)
            for u in sorted(H.neighbors(v)):
                if u not in seen:
                    seen.add(u)
                    parent[u] = v
                    stack.append(u)
    return roots, parent, order


def solve_tree(inst: ColoredInstance, witness: bool = False, backend: MMBackend = BLOCKED):
    """Forest patterns: one matrix-vector product per pattern edge."""
    H = inst.pattern
    if not H.is_forest():
        raise PreconditionError("solve_tree needs a forest pattern")
    if has_empty_preimage(inst):
        return _answer(False, None, witness)
    roots, parent, order = _forest_order(H)
    d = {}
    for v in reversed(order):
        t = inst.mask(v).copy()
        for u in H.neighbors(v):
            if parent[u] == v:
                t &= matmul(inst.adj(v, u), d[u][:, None], backend, "bool")[:, 0]
        d[v] = t
    if not all(d[r].any() for r in roots):
        return _answer(False, None, witness)
    if not witness:
        return True
    pos = {}
    for v in order:
        p = parent[v]
        cand = d[v] if p == -1 else d[v] & inst.adj(p, v)[pos[p]]
        pos[v] = int(np.flatnonzero(cand)[0])
    return True, {v: inst.preimage(v)[i] for v, i in pos.items()}


# ------------------------------------------------------------- treewidth


@lru_cache(maxsize=64)
def _optimal_kwise(H) -> KWiseTreeDecomposition:
    # depends on the pattern alone; reused across hosts
    return normalize_to_kwise(exact_treewidth(H)[1])


def kwise_decomposition(H, td: TreeDecomposition | None = None) -> KWiseTreeDecomposition:
    if td is None:
        return _optimal_kwise(H)
    return normalize_to_kwise(td)


def solve_tw(inst: ColoredInstance, witness: bool = False, decomposition=None,
             kernel: str = "auto", backend: MMBackend = BLOCKED):
    """Treewidth DP: one k-wise product per intermediate-result node.

    `decomposition` may be a TreeDecomposition or an already normalised
    KWiseTreeDecomposition.  Forest patterns go to solve_tree.  kernel is
    "compiled" (whole pass in one compiled call), one of the tensor_engine
    k-wise kernels, or "auto" (compiled when numba is available).
    """
    H = inst.pattern
    if H.is_forest():
        log.info("forest pattern: dispatching to the tree solver")
        return solve_tree(inst, witness, backend)
    if has_empty_preimage(inst):
        return _answer(False, None, witness)
    if isinstance(decomposition, KWiseTreeDecomposition):
        ktd = decomposition
    else:
        ktd = kwise_decomposition(H, decomposition)
    if kernel == "auto":
        kernel = "compiled" if HAVE_NUMBA else "dense"
    if kernel == "compiled":
        tables = run_compiled(inst, ktd)
    else:
        tables = run_kwise_dp(inst, ktd, kernel, backend)
    top = tables[ktd.root]
    if not top.any():
        return _answer(False, None, witness)
    if not witness:
        return True
    return True, _recover_tw(inst, ktd, tables)


def run_kwise_dp(inst, ktd: KWiseTreeDecomposition, kernel="dense", backend=BLOCKED) -> dict:
    tables = {}
    for t in ktd.postorder():
        typ = ktd.node_type[t]
        bag = sorted(ktd.bags[t])
        if typ == KWISE:
            continue
        if typ == INTERMEDIATE:
            kw, cv = _intermediate_children(ktd, t)
            tables[t] = _kwise_step(inst, ktd, kw, tables, kernel, backend) & tables[cv]
        else:
            acc = validity_tensor(inst, bag)
            for c in ktd.children[t]:
                acc &= tables[c]
            tables[t] = acc
    return tables


def _intermediate_children(ktd, t):
    kw = next(c for c in ktd.children[t] if ktd.node_type[c] == KWISE)
    cv = next(c for c in ktd.children[t] if ktd.node_type[c] != KWISE)
    return kw, cv


def kwise_inputs(ktd, kw, tables):
    """A^j: table of c(u_j) with v moved onto the axis of u_j."""
    v, us, cs = ktd.kwise_layout(kw)
    arrs = []
    for j, c in enumerate(cs):
        want = us[:j] + [v] + us[j + 1:]
        arrs.append(transpose_to(tables[c], sorted(ktd.bags[c]), want))
    return v, us, cs, arrs


def _kwise_step(inst, ktd, kw, tables, kernel, backend):
    v, us, cs, arrs = kwise_inputs(ktd, kw, tables)
    if len(arrs) == 2:
        # 2-wise product: out[i, j] = OR_l A^1[l, j] and A^2[i, l], a matrix product
        return matmul(arrs[1], arrs[0], backend, "bool")
    return kwise_product_bool(arrs, kernel)


def _recover_tw(inst, ktd, tables) -> dict:
    pos: dict = {}
    root = ktd.root
    R0 = tuple(int(i) for i in np.argwhere(tables[root])[0])
    stack = [(root, dict(zip(sorted(ktd.bags[root]), R0)))]
    while stack:
        t, R = stack.pop()
        pos.update(R)
        typ = ktd.node_type[t]
        if typ == INTERMEDIATE:
            kw, cv = _intermediate_children(ktd, t)
            stack.append((cv, R))
            v, us, cs = ktd.kwise_layout(kw)
            for y in range(inst.n):
                subs = []
                for u, c in zip(us, cs):
                    Rc = {x: R[x] for x in us if x != u}
                    Rc[v] = y
                    subs.append((c, Rc))
                if all(tables[c][tuple(Rc[x] for x in sorted(ktd.bags[c]))] for c, Rc in subs):
                    stack.extend(subs)
                    break
            else:  # pragma: no cover - tables guarantee a choice
                raise AssertionError("inconsistent DP tables")
        else:
            for c in ktd.children[t]:
                stack.append((c, R))
    return {x: inst.preimage(x)[i] for x, i in pos.items()}


# ------------------------------------------------------------- pathwidth


def path_steps(pd: PathDecomposition):
    """For each inner bag: (v_hat, w_hat, E) with v_hat forgotten upwards, w_hat introduced."""
    bags = pd.bags
    steps = []
    for i in range(1, len(bags) - 1):
        X, up, down = bags[i], bags[i + 1], bags[i - 1]
        (vh,) = X - up
        (wh,) = X - down
        E = sorted(X - {vh, wh})
        steps.append((vh, wh, E))
    return steps


@lru_cache(maxsize=64)
def _optimal_path(H) -> PathDecomposition:
    return normalize_path(exact_pathwidth(H)[1])


def path_decomposition(H, pd: PathDecomposition | None = None) -> PathDecomposition:
    if pd is None:
        return _optimal_path(H)
    return normalize_path(pd)


def solve_pw(inst: ColoredInstance, witness: bool = False, decomposition=None,
             backend: MMBackend = BLOCKED):
    """Pathwidth DP: one n x n by n x n^(pw-1) product per inner bag."""
    H = inst.pattern
    if H.is_forest():
        log.info("forest pattern: dispatching to the tree solver")
        return solve_tree(inst, witness, backend)
    if has_empty_preimage(inst):
        return _answer(False, None, witness)
    pd = path_decomposition(H, decomposition)
    n = inst.n
    leaf = sorted(pd.bags[0])
    cur, labels = validity_tensor(inst, leaf), leaf
    history = [(cur, labels)]
    for vh, wh, E in path_steps(pd):
        if vh == wh:
            # the bag introduces and forgets the same vertex: project it out
            ok = validity_tensor(inst, [vh] + E).any(axis=0)
            cur = transpose_to(cur, labels, E) & ok
        else:
            B = transpose_to(cur, labels, [vh] + E)
            A = inst.adj(wh, vh) if H.has_edge(vh, wh) else np.ones((n, n), dtype=bool)
            prod = matmul(A, B.reshape(n, -1), backend, "bool").reshape(B.shape)
            labels = [wh] + E
            cur = prod & validity_tensor(inst, labels)
        history.append((cur, labels))
    if not cur.any():
        return _answer(False, None, witness)
    if not witness:
        return True
    return True, _recover_pw(inst, pd, history)


def _recover_pw(inst, pd, history) -> dict:
    steps = path_steps(pd)
    cur, labels = history[-1]
    R = dict(zip(labels, (int(i) for i in np.argwhere(cur)[0]))) if labels else {}
    pos = dict(R)
    for (vh, wh, E), (tab, lab) in zip(reversed(steps), reversed(history[:-1])):
        H = inst.pattern
        for y in range(inst.n):
            if not inst.mask(vh)[y]:
                continue
            Rc = {x: R[x] for x in E}
            Rc[vh] = y
            if vh == wh:
                # child table lives on E; y only has to fit the edges to E
                if all(inst.adj(vh, x)[y, R[x]] for x in E if H.has_edge(vh, x)):
                    pos[vh] = y
                    break
                continue
            if H.has_edge(vh, wh) and not inst.adj(wh, vh)[R[wh], y]:
                continue
            if tab[tuple(Rc[x] for x in lab)]:
                R = Rc
                pos.update(Rc)
                break
        else:  # pragma: no cover
            raise AssertionError("inconsistent DP tables")
    return {x: inst.preimage(x)[i] for x, i in pos.items()}
