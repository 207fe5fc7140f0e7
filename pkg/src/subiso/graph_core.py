"""Data model: graphs, hypergraphs, colored instances, configurations and weights.

Vertices are dense integer ids.  A colored instance stores, for every pattern
vertex, the ordered list of host vertices mapped onto it (its preimage); the
position of a host vertex in that list is the index used by every DP table.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import chain, combinations
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import (
    MalformedConfigurationError,
    MalformedInstanceError,
    UnsupportedOperationError,
)

# Largest absolute weight we let into int64 arithmetic.
INT64_SAFE = 2**62


def norm_edge(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Graph:
    vertex_count: int
    edges: frozenset = frozenset()

    def __post_init__(self):
        if self.vertex_count < 0:
            raise MalformedInstanceError("negative vertex count")
        norm = set()
        for e in self.edges:
            u, v = e
            if u == v:
                raise MalformedInstanceError(f"self-loop at {u}")
            if not (0 <= u < self.vertex_count and 0 <= v < self.vertex_count):
                raise MalformedInstanceError(f"edge {e} out of range")
            norm.add(norm_edge(int(u), int(v)))
        object.__setattr__(self, "edges", frozenset(norm))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]] = ()) -> "Graph":
        return cls(n, frozenset(tuple(e) for e in edges))

    @cached_property
    def adjacency(self) -> tuple[frozenset, ...]:
        nb = [set() for _ in range(self.vertex_count)]
        for u, v in self.edges:
            nb[u].add(v)
            nb[v].add(u)
        return tuple(frozenset(s) for s in nb)

    @cached_property
    def edge_array(self) -> np.ndarray:
        """Edges as an (m, 2) int64 array, u < v per row, unsorted."""
        m = len(self.edges)
        flat = np.fromiter(chain.from_iterable(self.edges), dtype=np.int64, count=2 * m)
        return flat.reshape(m, 2)

    def neighbors(self, v: int) -> frozenset:
        return self.adjacency[v]

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def has_edge(self, u: int, v: int) -> bool:
        return norm_edge(u, v) in self.edges

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def isolated_vertices(self) -> list[int]:
        return [v for v in range(self.vertex_count) if not self.adjacency[v]]

    def components(self) -> list[list[int]]:
        seen = [False] * self.vertex_count
        out = []
        for s in range(self.vertex_count):
            if seen[s]:
                continue
            comp, stack = [], [s]
            seen[s] = True
            while stack:
                x = stack.pop()
                comp.append(x)
                for y in self.adjacency[x]:
                    if not seen[y]:
                        seen[y] = True
                        stack.append(y)
            out.append(sorted(comp))
        return out

    def is_forest(self) -> bool:
        return self.edge_count == self.vertex_count - len(self.components())

    def induced(self, vertices: Sequence[int]) -> "Graph":
        """Subgraph induced on `vertices`, relabelled to 0..len-1 in the given order."""
        pos = {v: i for i, v in enumerate(vertices)}
        return Graph.from_edges(
            len(vertices),
            [(pos[u], pos[v]) for u, v in self.edges if u in pos and v in pos],
        )


@dataclass(frozen=True)
class Hypergraph:
    vertex_count: int
    h: int
    hyperedges: frozenset = frozenset()
    color_map: tuple | None = None

    def __post_init__(self):
        if self.h < 2:
            raise MalformedInstanceError("uniformity must be at least 2")
        norm = set()
        for e in self.hyperedges:
            t = tuple(sorted(int(x) for x in e))
            if len(t) != self.h or len(set(t)) != self.h:
                raise MalformedInstanceError(f"hyperedge {e} is not a set of {self.h} vertices")
            if t[0] < 0 or t[-1] >= self.vertex_count:
                raise MalformedInstanceError(f"hyperedge {e} out of range")
            norm.add(t)
        object.__setattr__(self, "hyperedges", frozenset(norm))
        if self.color_map is not None:
            cm = tuple(int(c) for c in self.color_map)
            if len(cm) != self.vertex_count or any(c < 0 for c in cm):
                raise MalformedInstanceError("color map must assign a colour to every vertex")
            object.__setattr__(self, "color_map", cm)
            for t in norm:
                if len({cm[x] for x in t}) != self.h:
                    raise MalformedInstanceError(f"hyperedge {t} is not multicoloured")

    @property
    def colored(self) -> bool:
        return self.color_map is not None

    @cached_property
    def color_count(self) -> int:
        if self.color_map is None:
            return 0
        return (max(self.color_map) + 1) if self.color_map else 0

    @cached_property
    def classes(self) -> tuple[tuple[int, ...], ...]:
        cls = [[] for _ in range(self.color_count)]
        for v, c in enumerate(self.color_map or ()):
            cls[c].append(v)
        return tuple(tuple(c) for c in cls)

    def has_edge(self, vertices: Iterable[int]) -> bool:
        return tuple(sorted(vertices)) in self.hyperedges

    def is_clique(self, vertices: Sequence[int]) -> bool:
        return all(self.has_edge(s) for s in combinations(vertices, self.h))

    def restrict(self, keep: Iterable[int]) -> tuple["Hypergraph", list[int]]:
        """Sub-hypergraph induced on `keep` (relabelled), plus the old ids."""
        old = sorted(set(keep))
        pos = {v: i for i, v in enumerate(old)}
        edges = [tuple(pos[x] for x in e) for e in self.hyperedges if all(x in pos for x in e)]
        cm = None if self.color_map is None else tuple(self.color_map[v] for v in old)
        return Hypergraph(len(old), self.h, frozenset(edges), cm), old


@dataclass(frozen=True)
class ColorMap:
    host_to_pattern: tuple
    preimage_index: tuple

    @classmethod
    def from_assignment(cls, assignment: Sequence[int], pattern_count: int) -> "ColorMap":
        pre = [[] for _ in range(pattern_count)]
        for v, c in enumerate(assignment):
            c = int(c)
            if not 0 <= c < pattern_count:
                raise MalformedInstanceError(f"host vertex {v} coloured {c}, outside pattern")
            pre[c].append(v)
        return cls(tuple(int(c) for c in assignment), tuple(tuple(p) for p in pre))


@dataclass(frozen=True)
class WeightFn:
    """Node weights (tuple indexed by host vertex) or edge weights (sorted item tuple)."""

    kind: str
    values: tuple
    max_abs: int = field(init=False)

    def __post_init__(self):
        if self.kind not in ("node", "edge"):
            raise MalformedInstanceError(f"unknown weight kind {self.kind!r}")
        if self.kind == "node":
            vals = tuple(int(x) for x in self.values)
            m = max((abs(x) for x in vals), default=0)
        else:
            items = {}
            for (u, v), w in self.values:
                items[norm_edge(int(u), int(v))] = int(w)
            vals = tuple(sorted(items.items()))
            m = max((abs(w) for _, w in vals), default=0)
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "max_abs", max(1, m))

    @classmethod
    def node(cls, values: Sequence[int]) -> "WeightFn":
        return cls("node", tuple(values))

    @classmethod
    def edge(cls, values: Mapping) -> "WeightFn":
        return cls("edge", tuple(values.items()))

    @cached_property
    def edge_map(self) -> dict:
        if self.kind != "edge":
            raise UnsupportedOperationError("node weights have no edge map")
        return dict(self.values)

    def of_vertex(self, v: int) -> int:
        return self.values[v]

    def of_edge(self, u: int, v: int) -> int:
        return self.edge_map.get(norm_edge(u, v), 0)


@dataclass(frozen=True, eq=False)
class ColoredInstance:
    pattern: Graph
    host: Graph
    colors: ColorMap
    weights: WeightFn | None = None

    def __post_init__(self):
        f = self.colors.host_to_pattern
        if len(f) != self.host.vertex_count:
            raise MalformedInstanceError("colour map must cover every host vertex")
        if len(self.colors.preimage_index) != self.pattern.vertex_count:
            raise MalformedInstanceError("preimage index must list every pattern vertex")
        seen = 0
        for c, pre in enumerate(self.colors.preimage_index):
            for v in pre:
                if f[v] != c:
                    raise MalformedInstanceError(f"host vertex {v} listed in wrong preimage")
            seen += len(pre)
        if seen != self.host.vertex_count:
            raise MalformedInstanceError("preimages do not partition the host")
        for u, v in self.host.edges:
            a, b = f[u], f[v]
            if a == b:
                raise MalformedInstanceError(f"monochromatic host edge {(u, v)}")
            if not self.pattern.has_edge(a, b):
                raise MalformedInstanceError(
                    f"host edge {(u, v)} maps to non-edge {(a, b)} of the pattern")
        w = self.weights
        if w is not None:
            if w.kind == "node" and len(w.values) != self.host.vertex_count:
                raise MalformedInstanceError("node weights must cover every host vertex")
            if w.kind == "edge":
                for e, _ in w.values:
                    if e not in self.host.edges:
                        raise MalformedInstanceError(f"weight given for non-edge {e}")

    @classmethod
    def build(cls, pattern: Graph, host: Graph, assignment: Sequence[int],
              weights: WeightFn | None = None) -> "ColoredInstance":
        return cls(pattern, host, ColorMap.from_assignment(assignment, pattern.vertex_count), weights)

    @property
    def k(self) -> int:
        return self.pattern.vertex_count

    @cached_property
    def n(self) -> int:
        """Preimage size: the largest colour class."""
        return max((len(p) for p in self.colors.preimage_index), default=0)

    @property
    def preimage_size(self) -> int:
        return self.n

    def f(self, v: int) -> int:
        return self.colors.host_to_pattern[v]

    def preimage(self, x: int) -> tuple:
        return self.colors.preimage_index[x]

    def prepare(self) -> "ColoredInstance":
        """Materialise the dense per-edge arrays the DP solvers read."""
        self._adj_blocks
        self.mask_matrix
        if self.weights is not None and self.weights.kind == "edge":
            self._eweight_blocks
        return self

    def with_weights(self, weights: WeightFn | None) -> "ColoredInstance":
        return ColoredInstance(self.pattern, self.host, self.colors, weights)

    # ---- padded array views used by the DP solvers -----------------------

    @cached_property
    def position(self) -> np.ndarray:
        pos = np.zeros(self.host.vertex_count, dtype=np.int64)
        for pre in self.colors.preimage_index:
            for i, v in enumerate(pre):
                pos[v] = i
        return pos

    def mask(self, x: int) -> np.ndarray:
        m = np.zeros(self.n, dtype=bool)
        m[: len(self.preimage(x))] = True
        return m

    @cached_property
    def _edge_groups(self) -> dict:
        """pattern edge (a<b) -> (positions in f^-1(a), positions in f^-1(b), host edge rows)."""
        if not self.host.edges:
            return {}
        E = self.host.edge_array
        f = np.asarray(self.colors.host_to_pattern, dtype=np.int64)
        fu, fv = f[E[:, 0]], f[E[:, 1]]
        swap = fu > fv
        a = np.where(swap, E[:, 1], E[:, 0])
        b = np.where(swap, E[:, 0], E[:, 1])
        key = np.minimum(fu, fv) * max(1, self.k) + np.maximum(fu, fv)
        order = np.argsort(key, kind="stable")
        keys, starts = np.unique(key[order], return_index=True)
        out = {}
        bounds = list(starts) + [len(order)]
        for i, kk in enumerate(keys):
            rows = order[bounds[i]:bounds[i + 1]]
            pa, pb = divmod(int(kk), max(1, self.k))
            out[(pa, pb)] = (self.position[a[rows]], self.position[b[rows]], a[rows], b[rows])
        return out

    def adj(self, a: int, b: int) -> np.ndarray:
        """Boolean n x n block: [i, j] true iff preimage[a][i] ~ preimage[b][j]."""
        return self._adj_blocks[(a, b)]

    @cached_property
    def adj_stack(self) -> np.ndarray:
        """All adjacency blocks as one (|E(H)|, n, n) array, sorted pattern-edge order."""
        pe = self.pattern.sorted_edges()
        n = self.n
        out = np.zeros((max(1, len(pe)), n, n), dtype=bool)
        for e, ab in enumerate(pe):
            g = self._edge_groups.get(ab)
            if g is not None:
                out[e, g[0], g[1]] = True
        return out

    @cached_property
    def mask_matrix(self) -> np.ndarray:
        """Row x marks the real (non-padding) positions of f^-1(x)."""
        sizes = np.array([len(self.preimage(x)) for x in range(self.k)], dtype=np.int64)
        return np.arange(self.n)[None, :] < sizes[:, None]

    @cached_property
    def _adj_blocks(self) -> dict:
        out = {}
        stack = self.adj_stack
        for e, (a, b) in enumerate(self.pattern.sorted_edges()):
            out[(a, b)] = stack[e]
            out[(b, a)] = stack[e].T
        return out

    def edge_weight_block(self, a: int, b: int) -> np.ndarray:
        return self._eweight_blocks[(a, b)]

    @cached_property
    def _eweight_blocks(self) -> dict:
        w = self.weights
        if w is None or w.kind != "edge":
            raise UnsupportedOperationError("instance carries no edge weights")
        if w.max_abs >= INT64_SAFE:
            raise UnsupportedOperationError("edge weights exceed the int64 DP range")
        emap = w.edge_map
        out = {}
        n = self.n
        for a, b in self.pattern.sorted_edges():
            m = np.zeros((n, n), dtype=np.int64)
            g = self._edge_groups.get((a, b))
            if g is not None:
                vals = np.array([emap.get(norm_edge(int(u), int(v)), 0) for u, v in zip(g[2], g[3])],
                                dtype=np.int64)
                m[g[0], g[1]] = vals
            out[(a, b)] = m
            out[(b, a)] = m.T
        return out

    def node_weight_vector(self, x: int) -> np.ndarray:
        w = self.weights
        if w is None or w.kind != "node":
            raise UnsupportedOperationError("instance carries no node weights")
        if w.max_abs >= INT64_SAFE:
            raise UnsupportedOperationError("node weights exceed the int64 DP range")
        out = np.zeros(self.n, dtype=np.int64)
        pre = self.preimage(x)
        out[: len(pre)] = [w.values[v] for v in pre]
        return out

    def configuration(self, labels: Sequence[int], idx: Sequence[int]) -> dict:
        """Translate per-class positions into host vertices."""
        return {x: self.preimage(x)[i] for x, i in zip(labels, idx)}


@dataclass(frozen=True, eq=False)
class UncoloredInstance:
    pattern: Graph
    host: Graph
    weights: WeightFn | None = None

    def __post_init__(self):
        w = self.weights
        if w is not None:
            if w.kind == "node" and len(w.values) != self.host.vertex_count:
                raise MalformedInstanceError("node weights must cover every host vertex")
            if w.kind == "edge":
                for e, _ in w.values:
                    if e not in self.host.edges:
                        raise MalformedInstanceError(f"weight given for non-edge {e}")


def _check_domain(inst: ColoredInstance, R: Mapping[int, int]) -> None:
    for x, v in R.items():
        if not 0 <= x < inst.k:
            raise MalformedConfigurationError(f"{x} is not a pattern vertex")
        if not 0 <= v < inst.host.vertex_count or inst.f(v) != x:
            raise MalformedConfigurationError(f"host vertex {v} is not in the preimage of {x}")


def is_valid_configuration(inst: ColoredInstance, R: Mapping[int, int]) -> bool:
    """True iff every pattern edge inside the domain of R lands on a host edge."""
    _check_domain(inst, R)
    for a, b in inst.pattern.edges:
        if a in R and b in R and not inst.host.has_edge(R[a], R[b]):
            return False
    return True


def configuration_weight(inst: ColoredInstance, R: Mapping[int, int]) -> int:
    w = inst.weights
    if w is None:
        raise UnsupportedOperationError("instance has no weight function")
    _check_domain(inst, R)
    if w.kind == "node":
        return sum(w.values[v] for v in R.values())
    return sum(w.of_edge(R[a], R[b]) for a, b in inst.pattern.edges if a in R and b in R)
