"""Brute-force reference implementations.

These are the ground truth for every cross-check in the test-suite, so they
stay close to the problem statements: enumerate candidate solutions, test the
defining predicate.  The only liberty taken is depth-first enumeration that
abandons a partial assignment as soon as a pattern edge among already-placed
vertices fails; validity is a conjunction over edges, so nothing is lost.
"""
from __future__ import annotations

from itertools import combinations, permutations, product
from typing import Iterator, Sequence

import numpy as np

from .errors import SizeLimitError, UnsupportedOperationError
from .graph_core import (
    ColoredInstance,
    Graph,
    Hypergraph,
    UncoloredInstance,
    configuration_weight,
    is_valid_configuration,
)

DEFAULT_GUARD = 10**7


class _Budget:
    def __init__(self, limit):
        self.left = limit

    def tick(self, amount=1):
        self.left -= amount
        if self.left < 0:
            raise SizeLimitError("brute-force evaluation budget exhausted")


def search_order(H: Graph, vertices: Sequence[int] | None = None) -> list[int]:
    """Vertex order for backtracking: each next vertex has most placed neighbours."""
    todo = set(range(H.vertex_count) if vertices is None else vertices)
    order = []
    placed = set()
    while todo:
        best = max(todo, key=lambda v: (len(H.neighbors(v) & placed), H.degree(v), -v))
        order.append(best)
        placed.add(best)
        todo.remove(best)
    return order


def _colored_assignments(inst: ColoredInstance, order, budget) -> Iterator[dict]:
    H, G = inst.pattern, inst.host
    R: dict = {}

    def rec(i):
        if i == len(order):
            yield dict(R)
            return
        x = order[i]
        placed_nb = [y for y in H.neighbors(x) if y in R]
        for v in inst.preimage(x):
            budget.tick()
            if all(G.has_edge(v, R[y]) for y in placed_nb):
                R[x] = v
                yield from rec(i + 1)
                del R[x]

    yield from rec(0)


def valid_configurations(inst: ColoredInstance, guard: int = DEFAULT_GUARD) -> Iterator[dict]:
    """All valid configurations of V(H)."""
    yield from _colored_assignments(inst, search_order(inst.pattern), _Budget(guard))


def brute_solve_colored(inst: ColoredInstance, witness: bool = False, guard: int = DEFAULT_GUARD):
    for R in valid_configurations(inst, guard):
        assert is_valid_configuration(inst, R)
        return (True, R) if witness else True
    return (False, None) if witness else False


def _isolated_sums(inst: ColoredInstance, iso: list[int], budget) -> dict:
    """Achievable weight -> one choice for the isolated pattern vertices (node weights)."""
    sums = {0: {}}
    for x in iso:
        nxt = {}
        for s, choice in sums.items():
            for v in inst.preimage(x):
                budget.tick()
                t = s + inst.weights.values[v]
                if t not in nxt:
                    c = dict(choice)
                    c[x] = v
                    nxt[t] = c
        sums = nxt
    return sums


def brute_solve_ew_colored(inst: ColoredInstance, target: int = 0, witness: bool = False,
                           guard: int = DEFAULT_GUARD):
    """Some valid configuration of V(H) has total weight `target`."""
    if inst.weights is None:
        raise UnsupportedOperationError("weighted oracle needs a weight function")
    budget = _Budget(guard)
    H = inst.pattern
    iso = H.isolated_vertices()
    if inst.weights.kind == "node" and iso:
        # isolated pattern vertices are independent of the rest: fold them in as a sumset
        sums = _isolated_sums(inst, iso, budget)
        rest = [v for v in range(H.vertex_count) if H.degree(v)]
        for R in _colored_assignments(inst, search_order(H, rest), budget):
            w = configuration_weight(inst, R)
            if target - w in sums:
                if witness:
                    R.update(sums[target - w])
                    return True, R
                return True
        return (False, None) if witness else False
    for R in _colored_assignments(inst, search_order(H), budget):
        if configuration_weight(inst, R) == target:
            return (True, R) if witness else True
    return (False, None) if witness else False


def _embeddings(H: Graph, G: Graph, budget) -> Iterator[dict]:
    order = search_order(H)
    phi: dict = {}
    used: set = set()
    hosts = list(range(G.vertex_count))

    def rec(i):
        if i == len(order):
            yield dict(phi)
            return
        x = order[i]
        placed_nb = [y for y in H.neighbors(x) if y in phi]
        cands = G.neighbors(phi[placed_nb[0]]) if placed_nb else hosts
        dx = H.degree(x)
        for v in sorted(cands):
            budget.tick()
            if v in used or G.degree(v) < dx:
                continue
            if all(G.has_edge(v, phi[y]) for y in placed_nb):
                phi[x] = v
                used.add(v)
                yield from rec(i + 1)
                used.discard(v)
                del phi[x]

    yield from rec(0)


def brute_solve_uncolored(inst: UncoloredInstance, witness: bool = False,
                          guard: int = DEFAULT_GUARD):
    """Injective edge-preserving map V(H) -> V(G)."""
    H, G = inst.pattern, inst.host
    if H.vertex_count > G.vertex_count:
        return (False, None) if witness else False
    for phi in _embeddings(H, G, _Budget(guard)):
        return (True, phi) if witness else True
    return (False, None) if witness else False


def embedding_weight(inst: UncoloredInstance, phi: dict) -> int:
    w = inst.weights
    if w.kind == "node":
        return sum(w.values[v] for v in phi.values())
    return sum(w.of_edge(phi[a], phi[b]) for a, b in inst.pattern.edges)


def brute_solve_ew_uncolored(inst: UncoloredInstance, target: int = 0, witness: bool = False,
                             guard: int = DEFAULT_GUARD):
    if inst.weights is None:
        raise UnsupportedOperationError("weighted oracle needs a weight function")
    H, G = inst.pattern, inst.host
    if H.vertex_count <= G.vertex_count:
        for phi in _embeddings(H, G, _Budget(guard)):
            if embedding_weight(inst, phi) == target:
                return (True, phi) if witness else True
    return (False, None) if witness else False


def brute_hyperclique(hg: Hypergraph, k: int | None = None, guard: int = DEFAULT_GUARD):
    """One vertex per colour class (or any k vertices if uncoloured) forming a hyperclique."""
    budget = _Budget(guard)
    h = hg.h
    if hg.colored:
        classes = hg.classes
        pick: list = []

        def rec(i):
            if i == len(classes):
                return list(pick)
            for v in classes[i]:
                budget.tick()
                ok = all(hg.has_edge(s + (v,)) for s in combinations(pick, h - 1))
                if ok:
                    pick.append(v)
                    got = rec(i + 1)
                    if got is not None:
                        return got
                    pick.pop()
            return None

        if len(classes) < h:
            # no size-h subset to test: any transversal is a clique
            return [c[0] for c in classes] if all(classes) else None
        return rec(0)
    if k is None:
        raise UnsupportedOperationError("uncoloured hyperclique search needs k")
    for S in combinations(range(hg.vertex_count), k):
        budget.tick()
        if hg.is_clique(S):
            return list(S)
    return None


def brute_subset_sum(values: Sequence[int], T: int, state_guard: int = 5 * 10**6) -> bool:
    """Dynamic programme over achievable subset sums (sums above T are dropped)."""
    if T < 0:
        return False
    if T <= 5 * 10**7:
        reach = 1  # bit s set <=> s achievable
        cap = (1 << (T + 1)) - 1
        for a in values:
            reach = (reach | (reach << int(a))) & cap
        return bool(reach >> T & 1)
    reach = {0}
    for a in values:
        reach |= {s + a for s in reach if s + a <= T}
        if len(reach) > state_guard:
            raise SizeLimitError("subset-sum state space too large")
    return T in reach


def brute_ksum(sets: Sequence[Sequence[int]], T: int) -> bool:
    reach = {0}
    for S in sets:
        reach = {s + a for s in reach for a in S}
    return T in reach


def brute_kwise_product(tensors: Sequence[np.ndarray]) -> np.ndarray:
    """Nested-loop evaluation of OR_l AND_j A^j[i_1..l (at axis j)..i_q]."""
    q = len(tensors)
    n = tensors[0].shape[0]
    out = np.zeros((n,) * q, dtype=bool)
    for idx in product(range(n), repeat=q):
        for l in range(n):
            if all(tensors[j][idx[:j] + (l,) + idx[j + 1:]] for j in range(q)):
                out[idx] = True
                break
    return out


def naive_kwise_product_poly(tensors: Sequence[dict], n: int) -> dict:
    """Coefficient-level expansion; tensors map index tuples to {exponent: coeff} dicts."""
    q = len(tensors)
    out = {}
    for idx in product(range(n), repeat=q):
        acc = {}
        for l in range(n):
            terms = [tensors[j].get(idx[:j] + (l,) + idx[j + 1:], {}) for j in range(q)]
            for combo in product(*[list(t.items()) for t in terms]):
                e = sum(c[0] for c in combo)
                c = 1
                for x in combo:
                    c *= x[1]
                acc[e] = acc.get(e, 0) + c
        acc = {e: c for e, c in acc.items() if c}
        if acc:
            out[idx] = acc
    return out


def brute_partial_solution(inst: ColoredInstance, R: dict, cone: Sequence[int],
                           guard: int = DEFAULT_GUARD) -> bool:
    """ParSol(R; dom R; cone): R extends to a valid configuration of the cone."""
    if not is_valid_configuration(inst, R):
        return False
    sub = [x for x in cone if x not in R]
    H = inst.pattern
    budget = _Budget(guard)
    order = search_order(H.induced(sub), None)
    order = [sub[i] for i in order]
    cur = dict(R)

    def rec(i):
        if i == len(order):
            return True
        x = order[i]
        for v in inst.preimage(x):
            budget.tick()
            if all(inst.host.has_edge(v, cur[y]) for y in H.neighbors(x) if y in cur):
                cur[x] = v
                if rec(i + 1):
                    return True
                del cur[x]
        return False

    return rec(0)


def brute_partial_weights(inst: ColoredInstance, R: dict, cone: Sequence[int], counted,
                          guard: int = DEFAULT_GUARD) -> set:
    """Weights of the extensions of R to the cone, summing `counted(config)`."""
    if not is_valid_configuration(inst, R):
        return set()
    sub = [x for x in cone if x not in R]
    H = inst.pattern
    budget = _Budget(guard)
    out = set()
    cur = dict(R)

    def rec(i):
        if i == len(sub):
            out.add(counted(cur))
            return
        x = sub[i]
        for v in inst.preimage(x):
            budget.tick()
            if all(inst.host.has_edge(v, cur[y]) for y in H.neighbors(x) if y in cur):
                cur[x] = v
                rec(i + 1)
                del cur[x]

    rec(0)
    return out


def brute_treewidth(H: Graph, limit: int = 9) -> int:
    """Minimum over all elimination orderings of the largest later-neighbourhood."""
    k = H.vertex_count
    if k > limit:
        raise SizeLimitError("ordering enumeration limited to small graphs")
    if k == 0:
        return -1
    best = k - 1
    for order in permutations(range(k)):
        nb = [set(H.neighbors(v)) for v in range(k)]
        width = 0
        gone = set()
        for v in order:
            later = nb[v] - gone
            width = max(width, len(later))
            if width >= best:
                break
            for a in later:
                nb[a] |= later - {a}
            gone.add(v)
        best = min(best, width)
    return best
