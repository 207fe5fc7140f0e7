"""Reductions between colored and uncolored (Exact Weight) Subgraph Isomorphism.

* uncolored -> colored: color coding (randomized), or all colorings (exhaustive);
* colored -> uncolored: subdivide every pattern edge and attach a rigid
  signature gadget to every pattern vertex;
* colored -> uncolored, weighted: keep the graphs and encode a per-class
  checklist in the weights instead.
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass
from itertools import permutations, product

import numpy as np

from .decomposition import exact_treewidth
from .dispatch import solve as solve_colored
from .errors import PreconditionError, SizeLimitError, UnsupportedOperationError
from .graph_core import ColoredInstance, Graph, UncoloredInstance, WeightFn, norm_edge

DEFAULT_SEED = 20240611
EXHAUSTIVE_CAP = 200_000


def root_seed(seed: int | None = None) -> int:
    """Explicit seed, else $SUBISO_SEED, else the package default."""
    if seed is not None:
        return int(seed)
    env = os.environ.get("SUBISO_SEED")
    return int(env) if env else DEFAULT_SEED


def default_trials(k: int) -> int:
    return math.ceil(3 * math.e ** k)


# ------------------------------------------------------- color coding


def colored_from_coloring(inst: UncoloredInstance, coloring) -> ColoredInstance:
    """Color classes given by `coloring` (host vertex -> pattern vertex); edges that are
    monochromatic or land on a pattern non-edge are deleted."""
    H, G = inst.pattern, inst.host
    keep = [(u, v) for u, v in G.sorted_edges()
            if coloring[u] != coloring[v] and H.has_edge(coloring[u], coloring[v])]
    w = inst.weights
    if w is not None and w.kind == "edge":
        emap = w.edge_map
        w = WeightFn.edge({e: emap.get(e, 0) for e in keep})
    return ColoredInstance.build(H, Graph.from_edges(G.vertex_count, keep), list(coloring), w)


@dataclass
class ColorCodingResult:
    found: bool
    witness: dict | None
    trials_run: int
    solver_calls: int


def uncolored_to_colored(inst: UncoloredInstance, mode: str = "randomized",
                         trials: int | None = None, seed: int | None = None,
                         target: int = 0, algo: str = "auto",
                         cap: int = EXHAUSTIVE_CAP) -> ColorCodingResult:
    """Decide an uncolored instance through the colored solvers.

    randomized: per trial, color V(G) uniformly with k colors and try every
    bijection colors -> V(H).  One-sided: a reported YES always carries a
    verified embedding.  exhaustive: every map V(G) -> V(H) (k^|V(G)| <= cap).
    """
    H, G = inst.pattern, inst.host
    k, N = H.vertex_count, G.vertex_count
    weighted = inst.weights is not None
    if k == 0:
        return ColorCodingResult(True, {}, 0, 0)
    if k > N:
        return ColorCodingResult(False, None, 0, 0)

    calls = 0

    def attempt(coloring):
        nonlocal calls
        calls += 1
        ci = colored_from_coloring(inst, coloring)
        if weighted:
            ok, R = solve_colored(ci, algo, target=target, witness=True)
        else:
            ok, R = solve_colored(ci, algo, witness=True)
        return R if ok else None

    if mode == "exhaustive":
        if k ** N > cap:
            raise SizeLimitError(f"{k}^{N} colorings exceed the exhaustive cap {cap}")
        for coloring in product(range(k), repeat=N):
            R = attempt(coloring)
            if R is not None:
                return ColorCodingResult(True, R, 0, calls)
        return ColorCodingResult(False, None, 0, calls)
    if mode != "randomized":
        raise UnsupportedOperationError(f"unknown color-coding mode {mode!r}")
    trials = default_trials(k) if trials is None else trials
    seqs = np.random.SeedSequence(root_seed(seed)).spawn(trials)
    perms = list(permutations(range(k)))
    for t, ss in enumerate(seqs):
        colors = np.random.default_rng(ss).integers(0, k, N)
        for pi in perms:
            R = attempt([pi[c] for c in colors])
            if R is not None:
                return ColorCodingResult(True, R, t + 1, calls)
    return ColorCodingResult(False, None, trials, calls)


# ------------------------------------------------ structural gadget


@dataclass
class GadgetLayout:
    """Vertex ids of the gadget pattern, for inspection and tests."""

    original: list          # pattern vertex i -> id in the new pattern
    subdivision: dict       # pattern edge (i, j) -> id
    t: list
    u: list
    v: list
    w: list
    pendants: list          # per i, list of ids


def gadget_pattern(H: Graph) -> tuple[Graph, GadgetLayout]:
    """Subdivided H plus, per vertex i, a path i - t_i - u_i, a triangle u_i v_i w_i,
    and i+2 pendant leaves on v_i (0-based i), so v_i has degree i+4."""
    k = H.vertex_count
    nxt = k
    edges = []
    sub = {}
    for a, b in H.sorted_edges():
        sub[(a, b)] = nxt
        edges += [(a, nxt), (nxt, b)]
        nxt += 1
    t, u, v, w, pend = [], [], [], [], []
    for i in range(k):
        ti, ui, vi, wi = nxt, nxt + 1, nxt + 2, nxt + 3
        nxt += 4
        leaves = list(range(nxt, nxt + i + 2))
        nxt += i + 2
        edges += [(i, ti), (ti, ui), (ui, vi), (vi, wi), (ui, wi)] + [(vi, y) for y in leaves]
        t.append(ti), u.append(ui), v.append(vi), w.append(wi), pend.append(leaves)
    layout = GadgetLayout(list(range(k)), sub, t, u, v, w, pend)
    return Graph.from_edges(nxt, edges), layout


def colored_to_uncolored(inst: ColoredInstance, check_treewidth: bool = True):
    """Uncolored instance equivalent to `inst` (pattern treewidth at least 2).

    Host: every original preimage vertex is kept; subdivision vertex b_ij^l
    (l in the preimage of i) joins a_i^l to each a_j^m with a_i^l a_j^m in E(G);
    every gadget vertex gets n copies, only the first of which is wired.
    Returns (UncoloredInstance, GadgetLayout, host_color) where host_color maps
    each new host vertex to the new pattern vertex it stands for.
    """
    H, G = inst.pattern, inst.host
    if check_treewidth and exact_treewidth(H)[0] < 2:
        raise UnsupportedOperationError("the gadget reduction needs treewidth at least 2")
    Ht, lay = gadget_pattern(H)
    n = max(1, inst.n)
    color: list = []
    hid: dict = {}

    def add(key, c):
        hid[key] = len(color)
        color.append(c)
        return hid[key]

    for x in range(H.vertex_count):
        for a in inst.preimage(x):
            add(("a", a), x)
    edges = []
    for (i, j), s in lay.subdivision.items():
        for a in inst.preimage(i):
            b = add(("b", i, j, a), s)
            edges.append((hid[("a", a)], b))
            for c in inst.host.neighbors(a):
                if inst.f(c) == j:
                    edges.append((b, hid[("a", c)]))
    gadget = [y for i in range(H.vertex_count)
              for y in [lay.t[i], lay.u[i], lay.v[i], lay.w[i]] + lay.pendants[i]]
    for y in gadget:
        for c in range(n):
            add(("x", y, c), y)
    active = {y: hid[("x", y, 0)] for y in gadget}
    for p, q in Ht.sorted_edges():
        if p in active and q in active:
            edges.append((active[p], active[q]))
        elif p in active or q in active:
            g, o = (p, q) if p in active else (q, p)
            # o is an original vertex: all of its preimage is active
            for a in inst.preimage(o):
                edges.append((active[g], hid[("a", a)]))
    Gt = Graph.from_edges(len(color), edges)
    return UncoloredInstance(Ht, Gt), lay, color


def triangle_signature_counts(G: Graph, k: int) -> list[int]:
    """For i = 1..k: number of triangles of G with a vertex of degree i + 3."""
    tris = set()
    for a, b in G.edges:
        for c in G.neighbors(a) & G.neighbors(b):
            tris.add(tuple(sorted((a, b, c))))
    out = []
    for i in range(1, k + 1):
        out.append(sum(1 for t in tris if any(G.degree(x) == i + 3 for x in t)))
    return out


# --------------------------------------------- weighted checklist


def _canonical_no(H: Graph, weighted_kind: str | None):
    G = Graph.from_edges(0, [])
    w = None if weighted_kind is None else (WeightFn.node([]) if weighted_kind == "node"
                                            else WeightFn.edge({}))
    return UncoloredInstance(H, G, w)


def checklist_parameters(inst: ColoredInstance) -> tuple[int, int, int]:
    """(base B, multiplier M, checklist total T) for the weight encoding."""
    w = inst.weights
    slots = inst.k if w.kind == "node" else inst.pattern.edge_count
    B = slots + 1
    M = B ** (slots + 1)
    T = sum(B ** i for i in range(slots))
    return B, M, T


def colored_to_uncolored_weighted(inst: ColoredInstance, target: int = 0) -> UncoloredInstance:
    """Same graphs; weights M*w + B^(slot) with one slot per pattern vertex (node weights)
    or per pattern edge (edge weights); the checklist total is subtracted inside one slot.

    With B = slots + 1 the slot counts of any embedding are base-B digits without
    carries, so total 0 forces every slot to be used exactly once and the
    original weight to hit the target; such an embedding composed with the color
    map is an automorphism of the (non-isolated part of the) pattern, which
    turns it into a colored solution.
    """
    w = inst.weights
    if w is None:
        raise PreconditionError("weighted reduction needs a weight function")
    H, G = inst.pattern, inst.host
    if any(not inst.preimage(x) for x in range(inst.k)):
        return _canonical_no(H, w.kind)
    B, M, T = checklist_parameters(inst)
    if w.kind == "node":
        vals = []
        for v in range(G.vertex_count):
            x = inst.f(v)
            val = M * w.values[v] + B ** x
            if x == 0:
                val -= T + M * target
            vals.append(val)
        return UncoloredInstance(H, G, WeightFn.node(vals))
    pe = {e: i for i, e in enumerate(H.sorted_edges())}
    if not pe:
        # no edges: the total weight is 0 whatever the embedding
        if target:
            return _canonical_no(H, "edge")
        return UncoloredInstance(H, G, WeightFn.edge({}))
    emap = w.edge_map
    out = {}
    for e in G.sorted_edges():
        slot = pe[norm_edge(inst.f(e[0]), inst.f(e[1]))]
        val = M * emap.get(e, 0) + B ** slot
        if slot == 0:
            val -= T + M * target
        out[e] = val
    return UncoloredInstance(H, G, WeightFn.edge(out))
