"""Exact tree/path decompositions of small patterns and the normal forms the solvers use.

Treewidth: safe reduction rules (simplicial and almost-simplicial vertices)
shrink the graph to a kernel, which is solved by dynamic programming over
vertex subsets.  Pathwidth: exact vertex-separation search over vertex
subsets.  Both are exponential in the kernel size only.
"""
from __future__ import annotations

import heapq
import sys
from dataclasses import dataclass, field
from typing import Sequence

from .errors import PreconditionError, SizeLimitError
from .graph_core import Graph

DEFAULT_CAP = 20

INTERMEDIATE = "intermediate_result"
KWISE = "k_wise"
MERGE = "merge"


# ------------------------------------------------------------------ types


@dataclass
class TreeDecomposition:
    bags: list
    parent: list  # parent[t] == -1 exactly for the root

    def __post_init__(self):
        self.bags = [frozenset(b) for b in self.bags]

    @property
    def root(self) -> int:
        roots = [t for t, p in enumerate(self.parent) if p == -1]
        return roots[0] if roots else -1

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags), default=0) - 1

    def children(self) -> list[list[int]]:
        ch = [[] for _ in self.bags]
        for t, p in enumerate(self.parent):
            if p >= 0:
                ch[p].append(t)
        return ch

    def __len__(self):
        return len(self.bags)


@dataclass
class PathDecomposition:
    bags: list  # bags[0] is the leaf end, bags[-1] the root end

    def __post_init__(self):
        self.bags = [frozenset(b) for b in self.bags]

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags), default=0) - 1

    def as_tree(self) -> TreeDecomposition:
        m = len(self.bags)
        return TreeDecomposition(list(self.bags), [t + 1 if t + 1 < m else -1 for t in range(m)])

    def __len__(self):
        return len(self.bags)


@dataclass
class KWiseTreeDecomposition:
    bags: list
    parent: list
    node_type: list
    width: int
    children: list = field(default=None)
    binary: bool = False  # merge children may be same-bag merge nodes after binarisation

    def __post_init__(self):
        self.bags = [frozenset(b) for b in self.bags]
        if self.children is None:
            ch = [[] for _ in self.bags]
            for t, p in enumerate(self.parent):
                if p >= 0:
                    ch[p].append(t)
            self.children = ch

    @property
    def root(self) -> int:
        roots = [t for t, p in enumerate(self.parent) if p == -1]
        return roots[0] if roots else -1

    def __len__(self):
        return len(self.bags)

    def postorder(self) -> list[int]:
        out, stack = [], [(self.root, False)]
        while stack:
            t, done = stack.pop()
            if done:
                out.append(t)
                continue
            stack.append((t, True))
            for c in reversed(self.children[t]):
                stack.append((c, False))
        return out

    def kwise_layout(self, t: int):
        """For a k-wise node: (v, [u_1..u_k], [c(1)..c(k)])."""
        pbag = self.bags[self.parent[t]]
        (v,) = self.bags[t] - pbag
        us = sorted(pbag)
        by_bag = {self.bags[c]: c for c in self.children[t]}
        return v, us, [by_bag[self.bags[t] - {u}] for u in us]


# ------------------------------------------------------------ validation


def _check_td_properties(H: Graph, bags, edges_of_tree) -> list[str]:
    out = []
    covered = set().union(*bags) if bags else set()
    for v in range(H.vertex_count):
        if v not in covered:
            out.append(f"T1 violation: vertex {v} in no bag")
    for u, v in H.sorted_edges():
        if not any(u in b and v in b for b in bags):
            out.append(f"T2 violation: edge {(u, v)} in no bag")
    adj = [[] for _ in bags]
    for a, b in edges_of_tree:
        adj[a].append(b)
        adj[b].append(a)
    for v in sorted(covered):
        occ = [t for t, b in enumerate(bags) if v in b]
        occ_set = set(occ)
        seen = {occ[0]}
        stack = [occ[0]]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y in occ_set and y not in seen:
                    seen.add(y)
                    stack.append(y)
        if len(seen) != len(occ):
            out.append(f"T3 violation: bags containing {v} are disconnected")
    return out


def _tree_shape(parent) -> list[str]:
    m = len(parent)
    roots = [t for t, p in enumerate(parent) if p == -1]
    if m and len(roots) != 1:
        return [f"tree violation: {len(roots)} roots"]
    # every node must reach the root without cycling
    for t in range(m):
        seen, x = set(), t
        while x != -1:
            if x in seen:
                return ["tree violation: cycle in parent pointers"]
            seen.add(x)
            x = parent[x]
    return []


def validate(decomp, H: Graph, normalized: bool = False) -> list[str]:
    """List of violated invariants (empty when the decomposition is valid)."""
    if isinstance(decomp, PathDecomposition):
        bags = decomp.bags
        out = _check_td_properties(H, bags, [(i, i + 1) for i in range(len(bags) - 1)])
        if normalized:
            p = decomp.width
            if len(bags) < 2:
                out.append("path violation: normalised path needs two end bags")
            for i, b in enumerate(bags):
                want = p if i in (0, len(bags) - 1) else p + 1
                if len(b) != want:
                    out.append(f"path violation: bag {i} has size {len(b)}, expected {want}")
            for i in range(len(bags) - 1):
                if len(bags[i] & bags[i + 1]) != p:
                    out.append(f"path violation: bags {i},{i + 1} share {len(bags[i] & bags[i + 1])}")
        return out
    out = _tree_shape(decomp.parent)
    if out:
        return out
    edges = [(t, p) for t, p in enumerate(decomp.parent) if p >= 0]
    out = _check_td_properties(H, decomp.bags, edges)
    if isinstance(decomp, KWiseTreeDecomposition):
        out += _check_kwise(decomp)
    return out


def _check_kwise(d: KWiseTreeDecomposition) -> list[str]:
    out = []
    k = d.width
    ch = d.children
    if d.node_type[d.root] != INTERMEDIATE:
        out.append("k-wise violation: root is not an intermediate-result node")
    for t, typ in enumerate(d.node_type):
        bag = d.bags[t]
        if typ in (INTERMEDIATE, MERGE) and len(bag) != k:
            out.append(f"k-wise violation: {typ} node {t} has bag size {len(bag)}")
        if typ == KWISE and len(bag) != k + 1:
            out.append(f"k-wise violation: k-wise node {t} has bag size {len(bag)}")
        if not ch[t] and typ != MERGE:
            out.append(f"k-wise violation: leaf {t} is not a merge node")
        if typ == INTERMEDIATE:
            types = sorted(d.node_type[c] for c in ch[t])
            if types != sorted([KWISE, MERGE]):
                out.append(f"k-wise violation: intermediate node {t} children {types}")
            for c in ch[t]:
                if d.node_type[c] == MERGE and d.bags[c] != bag:
                    out.append(f"k-wise violation: merge child of {t} has a different bag")
        elif typ == KWISE:
            p = d.parent[t]
            if p < 0 or not d.bags[p] < bag or len(bag - d.bags[p]) != 1:
                out.append(f"k-wise violation: parent of k-wise node {t} is not bag minus one vertex")
                continue
            want = sorted(sorted(bag - {u}) for u in d.bags[p])
            got = sorted(sorted(d.bags[c]) for c in ch[t])
            if len(ch[t]) != k or want != got or any(d.node_type[c] != MERGE for c in ch[t]):
                out.append(f"k-wise violation: k-wise node {t} lacks its {k} merge children")
        elif typ == MERGE:
            ok_types = (INTERMEDIATE, MERGE) if d.binary else (INTERMEDIATE,)
            for c in ch[t]:
                if d.node_type[c] not in ok_types or d.bags[c] != bag:
                    out.append(f"k-wise violation: merge node {t} has an illegal child {c}")
            if d.binary and len(ch[t]) not in (0, 2):
                out.append(f"binary-merge violation: merge node {t} has {len(ch[t])} children")
        else:
            out.append(f"unknown node type {typ!r}")
    return out


# ---------------------------------------------------- elimination orderings


def elimination_width(H: Graph, order: Sequence[int]) -> int:
    nb = [set(H.neighbors(v)) for v in range(H.vertex_count)]
    gone = set()
    w = 0
    for v in order:
        later = nb[v] - gone
        w = max(w, len(later))
        for a in later:
            nb[a] |= later - {a}
        gone.add(v)
    return w


def td_from_ordering(H: Graph, order: Sequence[int]) -> TreeDecomposition:
    """Bag {v} + later neighbours in the filled graph; parent = earliest later neighbour."""
    k = H.vertex_count
    if k == 0:
        return TreeDecomposition([frozenset()], [-1])
    pos = {v: i for i, v in enumerate(order)}
    nb = [set(H.neighbors(v)) for v in range(k)]
    bags, parent_vertex = [], []
    for v in order:
        later = {a for a in nb[v] if pos[a] > pos[v]}
        for a in later:
            nb[a] |= later - {a}
        bags.append(frozenset(later | {v}))
        parent_vertex.append(min(later, key=pos.get) if later else None)
    parent = [pos[p] if p is not None else -1 for p in parent_vertex]
    roots = [t for t in range(k) if parent[t] == -1]
    # components become one tree: chain the roots together
    for a, b in zip(roots, roots[1:]):
        parent[a] = b
    return _compress(TreeDecomposition(bags, parent))


def _compress(td: TreeDecomposition) -> TreeDecomposition:
    """Contract tree edges whose bags are nested."""
    bags = list(td.bags)
    parent = list(td.parent)
    alive = [True] * len(bags)
    children = td.children()
    changed = True
    while changed:
        changed = False
        for t in range(len(bags)):
            if not alive[t] or parent[t] == -1:
                continue
            p = parent[t]
            if bags[t] <= bags[p] or bags[p] <= bags[t]:
                bags[p] = bags[p] | bags[t]
                for c in children[t]:
                    parent[c] = p
                    children[p].append(c)
                children[p].remove(t)
                alive[t] = False
                changed = True
    keep = [t for t in range(len(bags)) if alive[t]]
    idx = {t: i for i, t in enumerate(keep)}
    return TreeDecomposition([bags[t] for t in keep],
                             [idx[parent[t]] if parent[t] != -1 else -1 for t in keep])


def min_fill_ordering(nb: dict) -> list:
    """Greedy min-fill heuristic on an adjacency dict (ties: smaller vertex)."""
    nb = {v: set(s) for v, s in nb.items()}
    order = []
    while nb:
        def fill(v):
            s = list(nb[v])
            return sum(1 for i in range(len(s)) for j in range(i + 1, len(s)) if s[j] not in nb[s[i]])
        v = min(nb, key=lambda x: (fill(x), len(nb[x]), x))
        order.append(v)
        N = nb.pop(v)
        for a in N:
            nb[a].discard(v)
            nb[a] |= N - {a}
    return order


def _minor_min_width(nb: dict) -> int:
    nb = {v: set(s) for v, s in nb.items()}
    lb = 0
    while len(nb) > 1:
        v = min(nb, key=lambda x: (len(nb[x]), x))
        lb = max(lb, len(nb[v]))
        if not nb[v]:
            del nb[v]
            continue
        u = min(nb[v], key=lambda x: (len(nb[x]), x))
        # contract v into u
        for a in nb[v]:
            nb[a].discard(v)
            if a != u:
                nb[a].add(u)
                nb[u].add(a)
        nb[u].discard(v)
        del nb[v]
    return lb


def _is_clique(nb, S) -> bool:
    S = list(S)
    for i, a in enumerate(S):
        na = nb[a]
        for b in S[i + 1:]:
            if b not in na:
                return False
    return True


def _reduce(H: Graph):
    """Apply simplicial / almost-simplicial eliminations.

    Returns (prefix ordering, remaining adjacency dict, low) where low is a lower
    bound on tw(H) and tw(H) = max(low, tw(remaining)).
    """
    nb = {v: set(H.neighbors(v)) for v in range(H.vertex_count)}
    low = _minor_min_width(nb) if nb else 0
    prefix = []
    heap = list(nb)
    heapq.heapify(heap)
    queued = set(heap)
    while True:
        while heap:
            v = heapq.heappop(heap)
            queued.discard(v)
            if v not in nb:
                continue
            N = nb[v]
            simplicial = _is_clique(nb, N)
            almost = False
            if not simplicial and len(N) <= low:
                for x in sorted(N):
                    if _is_clique(nb, N - {x}):
                        almost = True
                        break
            if simplicial or almost:
                if simplicial:
                    low = max(low, len(N))
                prefix.append(v)
                del nb[v]
                for a in N:
                    nb[a].discard(v)
                    nb[a] |= N - {a}
                    if a not in queued:
                        queued.add(a)
                        heapq.heappush(heap, a)
        if not nb:
            break
        new_low = max(low, _minor_min_width(nb))
        if new_low == low:
            break
        low = new_low
        heap = sorted(nb)
        queued = set(heap)
    return prefix, nb, low


def _subset_dp(nb: dict, ub_order: list, ub: int):
    """Exact treewidth of a small graph by DP over eliminated vertex sets."""
    verts = sorted(nb)
    m = len(verts)
    idx = {v: i for i, v in enumerate(verts)}
    nbm = [0] * m
    for v in verts:
        for a in nb[v]:
            nbm[idx[v]] |= 1 << idx[a]
    full = (1 << m) - 1

    def q(S, v):
        bit = 1 << v
        reach = nbm[v]
        inside = reach & S
        visited = inside | bit
        out = reach & ~S & ~bit
        while inside:
            nxt = 0
            x = inside
            while x:
                low = x & -x
                nxt |= nbm[low.bit_length() - 1]
                x ^= low
            out |= nxt & ~S & ~bit
            inside = nxt & S & ~visited
            visited |= inside
        return out.bit_count()

    layer = {0: -1}
    rec = {}
    for _ in range(m):
        new = {}
        for S in sorted(layer):
            val = layer[S]
            for v in range(m):
                if S >> v & 1:
                    continue
                w = max(val, q(S, v))
                if w >= ub:
                    continue
                T = S | (1 << v)
                if T not in new or w < new[T]:
                    new[T] = w
                    rec[T] = (S, v)
        if not new:
            return ub, ub_order
        layer = new
    order, S = [], full
    while S:
        prev, v = rec[S]
        order.append(verts[v])
        S = prev
    order.reverse()
    return max(0, layer[full]), order


def exact_treewidth(H: Graph, cap: int = DEFAULT_CAP):
    """(treewidth, optimal TreeDecomposition).

    The cap bounds the kernel left after safe reductions, not |V(H)|.
    """
    if H.vertex_count == 0:
        return 0, TreeDecomposition([frozenset()], [-1])
    prefix, nb, low = _reduce(H)
    order = list(prefix)
    if nb:
        if len(nb) > cap:
            raise SizeLimitError(f"treewidth kernel has {len(nb)} vertices (cap {cap})")
        heur = min_fill_ordering(nb)
        sub = Graph.from_edges(H.vertex_count, [(a, b) for a in nb for b in nb[a] if a < b])
        ub = elimination_width(sub, heur)
        if ub > low:
            _, kern = _subset_dp(nb, heur, ub)
        else:
            kern = heur
        order += kern
    width = elimination_width(H, order)
    return width, td_from_ordering(H, order)


# --------------------------------------------------------------- pathwidth


def _twin_classes(H: Graph, verts) -> list[list[int]]:
    by_nb: dict = {}
    for v in verts:
        by_nb.setdefault(H.neighbors(v), []).append(v)
    return sorted((sorted(c) for c in by_nb.values()), key=lambda c: c[0])


def _separation_search(H: Graph, active, classes, p):
    """Vertex order of `active` whose boundaries never exceed p, or None.

    The boundary size f(L) = |N(L) minus L| is submodular, so any vertex whose
    placement does not grow f can be placed immediately; twins are interchangeable,
    so only the first unplaced member of a class is ever tried.
    """
    nbm = {v: sum(1 << a for a in H.neighbors(v)) for v in active}
    full = sum(1 << v for v in active)
    failed = set()
    seq: list = []

    cmask = [sum(1 << v for v in c) for c in classes]

    def first_unplaced(i, L):
        x = cmask[i] & ~L
        return (x & -x).bit_length() - 1 if x else None

    def dfs(L, N):
        mark = len(seq)
        while True:
            f = (N & ~L).bit_count()
            for i in range(len(classes)):
                v = first_unplaced(i, L)
                if v is None:
                    continue
                L2, N2 = L | (1 << v), N | nbm[v]
                if (N2 & ~L2).bit_count() <= f:
                    L, N = L2, N2
                    seq.append(v)
                    break
            else:
                break
        if L == full:
            return True
        if L not in failed:
            for i in range(len(classes)):
                v = first_unplaced(i, L)
                if v is None:
                    continue
                L2, N2 = L | (1 << v), N | nbm[v]
                if (N2 & ~L2).bit_count() <= p:
                    seq.append(v)
                    if dfs(L2, N2):
                        return True
                    seq.pop()
            failed.add(L)
        del seq[mark:]
        return False

    return list(seq) if dfs(0, 0) else None


def pd_from_order(H: Graph, order: Sequence[int], extra: Sequence[int] = ()) -> PathDecomposition:
    """Bags {v_i} + (N(L_i) minus L_i); `extra` (isolated) vertices get their own bags."""
    bags = []
    L, N = set(), set()
    for v in order:
        L.add(v)
        N |= H.neighbors(v)
        bags.append(frozenset((N - L) | {v}))
    bags += [frozenset({v}) for v in extra]
    # drop bags nested in a neighbour
    out: list = []
    for b in bags:
        if out and b <= out[-1]:
            continue
        while out and out[-1] <= b:
            out.pop()
        out.append(b)
    return PathDecomposition(out or [frozenset()])


def exact_pathwidth(H: Graph, cap: int = DEFAULT_CAP):
    """(pathwidth, optimal PathDecomposition).

    The cap bounds the number of twin classes among non-isolated vertices, which
    is the branching width of the search.
    """
    k = H.vertex_count
    if k == 0:
        return 0, PathDecomposition([frozenset()])
    active = [v for v in range(k) if H.degree(v)]
    iso = [v for v in range(k) if not H.degree(v)]
    if not active:
        return 0, pd_from_order(H, [], iso)
    classes = _twin_classes(H, active)
    if len(classes) > cap:
        raise SizeLimitError(f"pathwidth search has {len(classes)} twin classes (cap {cap})")
    try:
        lb = exact_treewidth(H, cap)[0]
    except SizeLimitError:
        lb = 1
    old = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old, 4 * k + 1000))
    try:
        for p in range(max(1, lb), k):
            order = _separation_search(H, active, classes, p)
            if order is not None:
                pd = pd_from_order(H, order, iso)
                return pd.width, pd
    finally:
        sys.setrecursionlimit(old)
    raise AssertionError("pathwidth search failed to terminate")  # pragma: no cover


# ------------------------------------------------------------ normal forms


def _pad_and_chain(bags: list, adj: list, k: int):
    """Make every bag size k+1 and every adjacent intersection size k.

    Works on an unrooted tree (adjacency lists); returns new (bags, adj).
    """
    m = len(bags)
    bags = [set(b) for b in bags]
    start = next(t for t in range(m) if len(bags[t]) == k + 1)
    # pad small bags from an already-full neighbour (smallest missing id)
    seen = {start}
    queue = [start]
    for t in queue:
        for c in sorted(adj[t]):
            if c in seen:
                continue
            seen.add(c)
            while len(bags[c]) < k + 1:
                bags[c].add(min(bags[t] - bags[c]))
            queue.append(c)
    # contract edges between equal bags
    rep = list(range(m))

    def find(x):
        while rep[x] != x:
            rep[x] = rep[rep[x]]
            x = rep[x]
        return x

    for t in range(m):
        for c in adj[t]:
            if bags[t] == bags[c]:
                a, b = find(t), find(c)
                if a != b:
                    rep[max(a, b)] = min(a, b)
    keep = sorted({find(t) for t in range(m)})
    idx = {t: i for i, t in enumerate(keep)}
    nbags = [frozenset(bags[t]) for t in keep]
    nadj = [set() for _ in keep]
    for t in range(m):
        for c in adj[t]:
            a, b = idx[find(t)], idx[find(c)]
            if a != b:
                nadj[a].add(b)
                nadj[b].add(a)
    # replace edges with small intersections by a chain of one-element swaps
    edges = sorted({(min(a, b), max(a, b)) for a in range(len(nadj)) for b in nadj[a]})
    for a, b in edges:
        A, B = nbags[a], nbags[b]
        if len(A & B) >= k:
            continue
        nadj[a].discard(b)
        nadj[b].discard(a)
        prev, cur = a, set(A)
        outs, ins = sorted(A - B), sorted(B - A)
        for x, y in zip(outs[:-1], ins[:-1]):
            cur = (cur - {x}) | {y}
            nbags.append(frozenset(cur))
            nadj.append(set())
            t = len(nbags) - 1
            nadj[prev].add(t)
            nadj[t].add(prev)
            prev = t
        nadj[prev].add(b)
        nadj[b].add(prev)
    return nbags, nadj


def normalize_to_kwise(td: TreeDecomposition) -> KWiseTreeDecomposition:
    """Rebuild `td` as a k-wise tree decomposition of the same width k >= 1."""
    k = td.width
    if k < 1:
        raise PreconditionError("k-wise normal form needs width at least 1")
    m = len(td.bags)
    adj = [set() for _ in range(m)]
    for t, p in enumerate(td.parent):
        if p >= 0:
            adj[t].add(p)
            adj[p].add(t)
    large, ladj = _pad_and_chain(td.bags, adj, k)

    bags, parent, types = [], [], []

    def new(typ, bag, par):
        bags.append(frozenset(bag))
        parent.append(par)
        types.append(typ)
        return len(bags) - 1

    root = 0
    top = large[root]
    stack = [(root, -1, top - {max(top)}, -1)]
    while stack:
        t, tpar, sbag, attach = stack.pop()
        X = large[t]
        s = new(INTERMEDIATE, sbag, attach)
        kw = new(KWISE, X, s)
        (v,) = X - sbag
        cu = {u: new(MERGE, X - {u}, kw) for u in sorted(sbag)}
        cv = new(MERGE, sbag, s)
        for c in sorted(ladj[t], reverse=True):
            if c == tpar:
                continue
            inter = X & large[c]
            (y,) = X - inter
            stack.append((c, t, inter, cv if y == v else cu[y]))
    return KWiseTreeDecomposition(bags, parent, types, k)


def binarize_merges(ktd: KWiseTreeDecomposition) -> KWiseTreeDecomposition:
    """Every merge node ends with 0 or 2 children (extra same-bag merge nodes are added)."""
    bags = list(ktd.bags)
    parent = list(ktd.parent)
    types = list(ktd.node_type)
    children = [list(c) for c in ktd.children]

    def new(bag, par):
        bags.append(bag)
        parent.append(par)
        types.append(MERGE)
        children.append([])
        return len(bags) - 1

    def split(node, kids):
        if len(kids) == 1:
            leaf = new(bags[node], node)
            children[node] = [kids[0], leaf]
            return
        if len(kids) <= 2:
            children[node] = list(kids)
            for c in kids:
                parent[c] = node
            return
        halves = [kids[: len(kids) // 2], kids[len(kids) // 2:]]
        children[node] = []
        for half in halves:
            if len(half) == 1:
                parent[half[0]] = node
                children[node].append(half[0])
            else:
                m = new(bags[node], node)
                children[node].append(m)
                split(m, half)

    for t in range(len(ktd.bags)):
        if types[t] == MERGE and children[t]:
            split(t, children[t])
    return KWiseTreeDecomposition(bags, parent, types, ktd.width, children, binary=True)


def normalize_path(pd: PathDecomposition) -> PathDecomposition:
    """End bags of size p, inner bags of size p+1, adjacent intersections of size p."""
    p = pd.width
    if p < 1:
        raise PreconditionError("path normal form needs width at least 1")
    m = len(pd.bags)
    adj = [set() for _ in range(m)]
    for i in range(m - 1):
        adj[i].add(i + 1)
        adj[i + 1].add(i)
    bags, nadj = _pad_and_chain(pd.bags, adj, p)
    # walk the (still path-shaped) tree from one end
    ends = [t for t in range(len(bags)) if len(nadj[t]) <= 1]
    order = [min(ends)]
    while len(order) < len(bags):
        nxt = [c for c in nadj[order[-1]] if c not in order[-2:]]
        order.append(nxt[0])
    seq = [bags[t] for t in order]
    # leaf end: drop an element other than the one forgotten on the way up
    first, last = seq[0], seq[-1]
    up = (first - seq[1]) if len(seq) > 1 else frozenset()
    leaf_drop = min(first - up) if first - up else min(first)
    down = (last - seq[-2]) if len(seq) > 1 else frozenset({leaf_drop})
    root_drop = max(last - down) if last - down else max(last)
    return PathDecomposition([first - {leaf_drop}] + seq + [last - {root_drop}])
