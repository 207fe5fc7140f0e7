"""Seeded random instance samplers (Erdos-Renyi hosts, optional planted solutions)."""
from __future__ import annotations

import numpy as np

from .errors import ParameterError
from .graph_core import ColoredInstance, Graph, Hypergraph, UncoloredInstance, WeightFn


def rng_from(seed) -> np.random.Generator:
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def random_graph(rng, k: int, p: float, connected: bool = False) -> Graph:
    rng = rng_from(rng)
    edges = {(a, b) for a in range(k) for b in range(a + 1, k) if rng.random() < p}
    if connected:
        # random spanning tree first
        perm = rng.permutation(k)
        for i in range(1, k):
            j = int(rng.integers(0, i))
            a, b = int(perm[i]), int(perm[j])
            edges.add((min(a, b), max(a, b)))
    return Graph.from_edges(k, edges)


def random_tree(rng, k: int) -> Graph:
    rng = rng_from(rng)
    return Graph.from_edges(k, [(int(rng.integers(0, i)), i) for i in range(1, k)])


def random_host(rng, H: Graph, n: int, p: float, planted: bool = False,
                sizes=None) -> tuple[Graph, list, list | None]:
    """Host with `sizes[x]` (default n) vertices per pattern vertex.

    Returns (host, assignment, planted positions or None).
    """
    rng = rng_from(rng)
    k = H.vertex_count
    sizes = [n] * k if sizes is None else list(sizes)
    assignment, pre = [], []
    for x in range(k):
        pre.append(list(range(len(assignment), len(assignment) + sizes[x])))
        assignment += [x] * sizes[x]
    edges = set()
    for a, b in H.sorted_edges():
        hit = rng.random((sizes[a], sizes[b])) < p
        ia, ib = np.nonzero(hit)
        base_a, base_b = (pre[a][0] if pre[a] else 0), (pre[b][0] if pre[b] else 0)
        edges.update(zip((ia + base_a).tolist(), (ib + base_b).tolist()))
    chosen = None
    if planted and all(sizes):
        chosen = [pre[x][int(rng.integers(0, sizes[x]))] for x in range(k)]
        for a, b in H.sorted_edges():
            edges.add((chosen[a], chosen[b]))
    return Graph.from_edges(len(assignment), edges), assignment, chosen


def random_colored_instance(rng, k: int, n: int, p_pattern: float = 0.5, p_host: float = 0.3,
                            planted: bool = False, pattern: Graph | None = None,
                            ragged: bool = False) -> ColoredInstance:
    rng = rng_from(rng)
    H = pattern if pattern is not None else random_graph(rng, k, p_pattern)
    sizes = [int(rng.integers(1, n + 1)) for _ in range(H.vertex_count)] if ragged else None
    G, assignment, _ = random_host(rng, H, n, p_host, planted, sizes)
    return ColoredInstance.build(H, G, assignment)


def random_weights(rng, inst, kind: str, W: int):
    rng = rng_from(rng)
    if kind == "node":
        return WeightFn.node([int(x) for x in rng.integers(-W, W + 1, inst.host.vertex_count)])
    return WeightFn.edge({e: int(rng.integers(-W, W + 1)) for e in inst.host.sorted_edges()})


def plant_zero_weight(rng, inst: ColoredInstance, target: int = 0) -> ColoredInstance:
    """Adjust one weight so that some valid configuration (if any) hits `target`."""
    from .oracle import brute_solve_colored

    ok, R = brute_solve_colored(inst, witness=True)
    if not ok:
        return inst
    w = inst.weights
    from .graph_core import configuration_weight

    delta = target - configuration_weight(inst, R)
    if w.kind == "node":
        vals = list(w.values)
        vals[R[0]] += delta
        return inst.with_weights(WeightFn.node(vals))
    if not inst.pattern.edges:
        return inst
    a, b = min(inst.pattern.edges)
    e = (min(R[a], R[b]), max(R[a], R[b]))
    m = dict(w.edge_map)
    m[e] = m.get(e, 0) + delta
    return inst.with_weights(WeightFn.edge(m))


def random_uncolored_instance(rng, k: int, nh: int, p_pattern: float = 0.6, p_host: float = 0.3,
                              planted: bool = False, pattern: Graph | None = None
                              ) -> UncoloredInstance:
    """Erdos-Renyi host on nh vertices, optionally with a copy of H planted on random vertices."""
    rng = rng_from(rng)
    H = pattern if pattern is not None else random_graph(rng, k, p_pattern, connected=True)
    edges = {(a, b) for a in range(nh) for b in range(a + 1, nh) if rng.random() < p_host}
    if planted:
        if H.vertex_count > nh:
            raise ParameterError(f"cannot plant {H.vertex_count} vertices in a host of {nh}")
        spots = [int(x) for x in rng.choice(nh, H.vertex_count, replace=False)]
        for a, b in H.sorted_edges():
            u, v = spots[a], spots[b]
            edges.add((min(u, v), max(u, v)))
    return UncoloredInstance(H, Graph.from_edges(nh, edges))


def random_colored_hypergraph(rng, h: int, classes: int, size: int, p: float,
                              planted: bool = False) -> Hypergraph:
    """Every multicoloured h-set is a hyperedge with probability p."""
    from itertools import combinations, product

    rng = rng_from(rng)
    colors = [c for c in range(classes) for _ in range(size)]
    groups = [list(range(c * size, (c + 1) * size)) for c in range(classes)]
    edges = set()
    for cs in combinations(range(classes), h):
        for e in product(*[groups[c] for c in cs]):
            if rng.random() < p:
                edges.add(tuple(e))
    if planted:
        pick = [g[int(rng.integers(0, size))] for g in groups]
        for e in combinations(pick, h):
            edges.add(tuple(e))
    return Hypergraph(classes * size, h, frozenset(edges), tuple(colors))
