"""Hyperclique -> (Exact Weight) Colored Subgraph Isomorphism on Twin Water Lilies.

Color c of the hypergraph (after grouping) is the TWL pair (c // h, c % h);
pair x collects the h colors x*h .. x*h + h - 1.  Host vertices are numbered
pattern vertex by pattern vertex, preimages in the order produced below.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, permutations, product
from math import comb

from ..errors import ParameterError, PreconditionError
from ..graph_core import ColoredInstance, Graph, Hypergraph, WeightFn
from .avg_free import avg_free_set
from .twl import twin_water_lily, twl_pairs


def colorize(hg: Hypergraph, k: int) -> Hypergraph:
    """k copies of V(hg), one per color; a multicolored h-set is an edge iff its
    originals form an edge of hg.  Vertex c*n + v is copy c of v."""
    n, h = hg.vertex_count, hg.h
    edges = set()
    for e in hg.hyperedges:
        for cols in combinations(range(k), h):
            for perm in permutations(e):
                edges.add(tuple(sorted(c * n + v for c, v in zip(cols, perm))))
    return Hypergraph(k * n, h, frozenset(edges), tuple(c for c in range(k) for _ in range(n)))


def _check_colored(hg: Hypergraph, h: int, colors: int):
    if not hg.colored:
        raise PreconditionError("hypergraph must be colored (see colorize)")
    if hg.h != h:
        raise ParameterError(f"hypergraph is {hg.h}-uniform, expected {h}")
    if hg.color_count != colors:
        raise ParameterError(f"expected {colors} colors, found {hg.color_count}")


def _valid(hg: Hypergraph, verts) -> bool:
    return all(hg.has_edge(s) for s in combinations(verts, hg.h))


@dataclass
class _Merged:
    """Colors grouped into super-colors; each super-color's preimage lists
    configurations (tuples of vertices, one per member color)."""

    groups: list                     # super-color -> list of original colors
    configs: list                    # super-color -> list of vertex tuples
    hyperedges: dict = field(default_factory=dict)   # h-subset -> list of config-index tuples


def _merge(hg: Hypergraph, groups: list) -> _Merged:
    classes = hg.classes
    configs = [list(product(*[classes[c] for c in g])) for g in groups]
    M = _Merged(groups, configs)
    h = hg.h
    for sub in combinations(range(len(groups)), h):
        found = []
        for idx in product(*[range(len(configs[m])) for m in sub]):
            verts = [v for m, i in zip(sub, idx) for v in configs[m][i]]
            if _valid(hg, verts):
                found.append(idx)
        M.hyperedges[sub] = found
    return M


def _assemble(h: int, s1: int, s2: int, M: _Merged, p_weight=None, x_weight=None):
    """TWL(h, s1, s2) instance over super-colors 0..h(s1+s2)-1.

    x-vertex preimages are configurations of their h super-colors; P vertex u
    (an h-subset of super-colors) gets one host vertex per merged hyperedge,
    joined to every S2 configuration that agrees with it on shared super-colors.
    """
    H = twin_water_lily(h, s1, s2)
    subsets = twl_pairs(h, s1, s2)
    base = s1 + s2
    assignment: list = []
    weights: list = []
    xconf = []
    for x in range(base):
        mem = list(range(x * h, x * h + h))
        confs = list(product(*[range(len(M.configs[m])) for m in mem]))
        ids = {}
        for cf in confs:
            ids[cf] = len(assignment)
            assignment.append(x)
            weights.append(x_weight(x, mem, cf) if x_weight else 0)
        xconf.append((mem, ids))
    edges = []
    for i, sub in enumerate(subsets):
        supers = tuple(x * h + j for x, j in sub)
        for idx in M.hyperedges[supers]:
            me = len(assignment)
            assignment.append(base + i)
            weights.append(p_weight(supers, idx) if p_weight else 0)
            fixed = dict(zip(supers, idx))
            for x in sorted({x for x, _ in sub if x >= s1}):
                mem, ids = xconf[x]
                choices = [[fixed[m]] if m in fixed else range(len(M.configs[m])) for m in mem]
                for cf in product(*choices):
                    edges.append((me, ids[cf]))
    G = Graph.from_edges(len(assignment), edges)
    return H, G, assignment, weights


def hyperclique_to_colsubiso(hg: Hypergraph, h: int, r: int) -> ColoredInstance:
    """Colored h-uniform hr-hyperclique -> Colored Subgraph Isomorphism on TWL(h, 0, r).

    Preimages: N^h configurations per x-vertex, one vertex per hyperedge per P vertex.
    """
    if r < 1:
        raise ParameterError("need r >= 1")
    _check_colored(hg, h, h * r)
    M = _merge(hg, [[c] for c in range(h * r)])
    H, G, assignment, _ = _assemble(h, 0, r, M)
    return ColoredInstance.build(H, G, assignment)


@dataclass
class WeightedReduction:
    """Parameters of the block weight encoding, kept for inspection."""

    k: int
    k1: int
    group1: int
    group2: int
    lam: int
    degree: int
    avg_free: object
    block_bits: int
    target: int


def _weighted(hg: Hypergraph, h: int, r1: int, r2: int, group1: int, group2: int,
              eps: float):
    k1 = h * r1 * group1
    groups = [list(range(i * group1, (i + 1) * group1)) for i in range(h * r1)]
    groups += [list(range(k1 + i * group2, k1 + (i + 1) * group2)) for i in range(h * r2)]
    M = _merge(hg, groups)
    supers = h * (r1 + r2)
    lam = comb(supers, h)
    degree = comb(supers - 1, h - 1)
    m1 = max([len(M.configs[m]) for m in range(h * r1)] + [1])
    S = avg_free_set(m1, max(2, lam), eps)
    rho = S.elements
    B = max(rho[-1], 1)
    bits = (2 * lam * B - 1).bit_length()      # ceil(log2(2 lam B))
    T = sum((lam * B) << (i * bits) for i in range(h * r1))

    def x_weight(x, mem, cf):
        if x >= r1:
            return 0
        return sum((lam * B - degree * rho[i]) << (m * bits) for m, i in zip(mem, cf))

    def p_weight(sub, idx):
        return sum(rho[i] << (m * bits) for m, i in zip(sub, idx) if m < h * r1)

    H, G, assignment, weights = _assemble(h, r1, r2, M, p_weight, x_weight)
    # move the target into the preimage of pattern vertex 0
    weights = [w - T if a == 0 else w for w, a in zip(weights, assignment)]
    inst = ColoredInstance.build(H, G, assignment, WeightFn.node(weights))
    info = WeightedReduction(hg.color_count, k1, group1, group2, lam, degree, S, bits, T)
    return inst, info


def hyperclique_to_ew_colsubiso(hg: Hypergraph, h: int, r1: int, r2: int, beta, eps: float,
                                details: bool = False):
    """Colored hyperclique with h*r1*r2*q colors (beta = p/q) -> node-weighted Exact
    Weight Colored Subgraph Isomorphism on TWL(h, r1, r2), target 0.

    The first beta*k colors are checked through weights built from an
    average-free set, the rest through edges.
    """
    beta = Fraction(beta).limit_denominator(10**6)
    if not 0 < beta < 1 or r1 < 1 or r2 < 1:
        raise ParameterError("need 0 < beta < 1 and r1, r2 >= 1")
    p, q = beta.numerator, beta.denominator
    k = h * r1 * r2 * q
    _check_colored(hg, h, k)
    inst, info = _weighted(hg, h, r1, r2, r2 * p, r1 * (q - p), eps)
    return (inst, info) if details else inst
