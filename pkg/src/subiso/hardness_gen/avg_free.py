"""k-average-free sets.

Two constructions: Behrend's sphere construction (digits below d in base
k(d-1)+1, one sphere of fixed squared norm) and a greedy one for tiny sizes.
Whichever has the smaller maximum wins.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations_with_replacement

import numpy as np

from ..errors import ParameterError

GREEDY_MAX_SIZE = 40
BEHREND_CAP = 1 << 21      # vectors enumerated per (d, dim) candidate
MAX_RETRIES = 64


@dataclass
class AvgFreeSet:
    elements: list
    k: int
    eps: float
    bound: int
    metadata: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.elements)


def requested_bound(m: int, k: int, eps: float, c: float = 1.0) -> int:
    """k^(c/eps) * m^(1+eps), rounded up."""
    return math.ceil(k ** (c / eps) * m ** (1 + eps))


def fitted_constant(s: AvgFreeSet) -> float:
    """Smallest c with max(S) <= k^(c/eps) m^(1+eps) (0 when already below m^(1+eps))."""
    m = len(s.elements)
    top = max(s.elements[-1], 1)
    c = s.eps * (math.log(top) - (1 + s.eps) * math.log(m)) / math.log(s.k)
    return max(0.0, c)


def is_average_free(elements, k: int) -> bool:
    """Sumset test: no s in S is the mean of j <= k elements of S minus {s}.

    Any non-trivial witness can drop its copies of s, so this is equivalent to
    the definition.  Reachable sums with exactly j summands are kept as bit
    sets (Python ints).
    """
    S = sorted(set(int(x) for x in elements))
    if len(S) != len(list(elements)) or (S and S[0] < 0):
        return False
    for s in S:
        others = [a for a in S if a != s]
        reach = 1
        for j in range(1, k + 1):
            nxt = 0
            for a in others:
                nxt |= reach << a
            reach = nxt
            if reach >> (j * s) & 1:
                return False
    return True


def is_average_free_exhaustive(elements, k: int) -> bool:
    """Direct transcription of the definition over all multisets of size <= k."""
    S = list(elements)
    if len(set(S)) != len(S):
        return False
    Sset = set(S)
    for kp in range(1, k + 1):
        for combo in combinations_with_replacement(S, kp):
            tot = sum(combo)
            if tot % kp == 0 and tot // kp in Sset and len(set(combo)) > 1:
                return False
    return True


def _greedy(m: int, k: int, limit: int):
    """Smallest-first greedy; None if it would pass `limit`.

    A new maximum x is never a non-trivial mean, so only witnesses using x as a
    summand need checking.  reach[s][j] holds the sums of j elements of S minus {s}.
    """
    S: list = []
    reach: dict = {}
    x = 0
    while len(S) < m:
        if x > limit:
            return None
        bad = False
        for s in S:
            rs = reach[s]
            for j in range(2, k + 1):
                for t in range(1, j):
                    rem = j * s - t * x
                    if rem < 0:
                        break
                    if rs[j - t] >> rem & 1:
                        bad = True
                        break
                if bad:
                    break
            if bad:
                break
        if not bad:
            for s in S:
                rs = reach[s]
                reach[s] = [sum_shifts(rs, j, x) for j in range(k + 1)]
            new = [1] + [0] * k
            for a in S:
                new = [sum_shifts(new, j, a) for j in range(k + 1)]
            reach[x] = new
            S.append(x)
        x += 1
    return S


def sum_shifts(r: list, j: int, a: int) -> int:
    """Sums of j summands once `a` joins the pool: OR_t r[j-t] << t*a."""
    out = 0
    for t in range(j + 1):
        out |= r[j - t] << (t * a)
    return out


def _norms(d: int, dim: int) -> np.ndarray:
    sq = np.arange(d, dtype=np.int64) ** 2
    out = np.zeros(1, dtype=np.int64)
    for _ in range(dim):
        out = (out[:, None] + sq[None, :]).ravel()
    return out


def _fullest(d: int, dim: int) -> int:
    return int(np.bincount(_norms(d, dim)).max())


def _behrend(m: int, k: int, limit: int):
    """Per dimension, the least digit bound d whose fullest sphere holds m points
    (sphere sizes only grow with d, so a binary search finds it).

    Returns (elements, d, dim) for the best dimension, or None.
    """
    best = None
    for dim in range(2, 63):
        if (k + 1) ** (dim - 1) > limit or 2 ** dim > BEHREND_CAP:
            break
        hi = 2
        while (hi + 1) ** dim <= BEHREND_CAP and (k * hi + 1) ** (dim - 1) <= limit:
            hi += 1
        if _fullest(hi, dim) < m:
            continue
        lo = 1          # _fullest(lo) < m <= _fullest(hi)
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if _fullest(mid, dim) >= m:
                hi = mid
            else:
                lo = mid
        d = hi
        base = k * (d - 1) + 1
        if base ** dim >= 2 ** 62:
            continue
        norms = _norms(d, dim)
        vals = np.zeros(1, dtype=np.int64)
        for i in range(dim):
            # digit i carries weight base^(dim-1-i); matches the ravel order of _norms
            vals = (vals[:, None] * base + np.arange(d, dtype=np.int64)[None, :]).ravel()
        order = np.lexsort((vals, norms))
        ns, vs = norms[order], vals[order]
        starts = np.flatnonzero(np.r_[True, ns[1:] != ns[:-1]])
        sizes = np.diff(np.r_[starts, len(ns)])
        ok = starts[sizes >= m]
        tops = vs[ok + m - 1]
        i = int(np.argmin(tops))
        top = int(tops[i])
        if top <= limit and (best is None or top < best[0][-1]):
            best = ([int(v) for v in vs[ok[i]:ok[i] + m]], d, dim)
    return best


def avg_free_set(m: int, k: int, eps: float, method: str = "auto", c: float = 1.0) -> AvgFreeSet:
    """A k-average-free set of m non-negative integers.

    The search starts inside [0, k^(c/eps) m^(1+eps)] and doubles the bound
    until a construction fits; the number of enlargements is in the metadata.
    """
    if m < 1 or k < 2 or not 0 < eps < 1:
        raise ParameterError("need m >= 1, k >= 2 and 0 < eps < 1")
    if method not in ("auto", "behrend", "greedy"):
        raise ParameterError(f"unknown construction {method!r}")
    bound = requested_bound(m, k, eps, c)
    first = bound
    for retry in range(MAX_RETRIES):
        cands = []
        if m == 1:
            cands.append(([0], "trivial", {}))
        else:
            if method in ("auto", "behrend"):
                b = _behrend(m, k, bound)
                if b is not None:
                    cands.append((b[0], "behrend", {"d": b[1], "dim": b[2]}))
            if method == "greedy" or (method == "auto" and m <= GREEDY_MAX_SIZE):
                g = _greedy(m, k, bound)
                if g is not None:
                    cands.append((g, "greedy", {}))
        if cands:
            elems, how, extra = min(cands, key=lambda t: t[0][-1])
            meta = {"method": how, "requested_bound": first, "retries": retry, **extra}
            return AvgFreeSet(elems, k, eps, bound, meta)
        bound *= 2
    raise ParameterError(f"no {k}-average-free set of size {m} found")  # pragma: no cover
