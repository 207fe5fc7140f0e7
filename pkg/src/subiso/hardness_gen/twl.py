"""Twin Water Lily patterns."""
from __future__ import annotations

from itertools import combinations
from math import comb

from ..errors import ParameterError
from ..graph_core import Graph


def twl_pairs(h: int, s1: int, s2: int) -> list[tuple]:
    """Size-h subsets of (S1 u S2) x [h], in lexicographic order (one per P vertex)."""
    pairs = [(x, j) for x in range(s1 + s2) for j in range(h)]
    return list(combinations(pairs, h))


def twin_water_lily(h: int, s1: int, s2: int) -> Graph:
    """TWL(h, s1, s2): S1 = 0..s1-1, S2 = s1..s1+s2-1, then P.

    Each P vertex stands for an h-subset of the (S-vertex, copy) pairs and is
    adjacent to the distinct S2 vertices occurring in it.
    """
    if h < 2 or s1 < 0 or s2 < 0 or s1 + s2 < 1:
        raise ParameterError("need h >= 2, s1, s2 >= 0 and s1 + s2 >= 1")
    subsets = twl_pairs(h, s1, s2)
    base = s1 + s2
    edges = []
    for i, sub in enumerate(subsets):
        for x in sorted({x for x, _ in sub if x >= s1}):
            edges.append((x, base + i))
    g = Graph.from_edges(base + len(subsets), edges)
    assert len(subsets) == comb((s1 + s2) * h, h)
    return g


def twl_parts(h: int, s1: int, s2: int) -> tuple[range, range, range]:
    base = s1 + s2
    return range(0, s1), range(s1, base), range(base, base + comb(base * h, h))


def twl_width_bounds(h: int, s1: int, s2: int) -> tuple[int, int]:
    """Upper bounds (treewidth, pathwidth) for TWL(h, s1, s2)."""
    return (s2 - 1 if s2 > h else s2), s2
