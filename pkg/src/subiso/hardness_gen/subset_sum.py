"""k-Sum -> Subset Sum via a counter and a checklist, and the all-weights
special case of the weighted reduction feeding into it."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import ParameterError, SizeLimitError
from ..graph_core import Hypergraph
from .colsubiso import _check_colored, _weighted


@dataclass
class SubsetSumInstance:
    values: list
    T: int
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.T < 1:
            raise ParameterError("Subset Sum target must be at least 1")
        if any(v < 0 for v in self.values):
            raise ParameterError("Subset Sum values must be non-negative")


def g(k: int) -> int:
    return 2 ** (k + 3) * k ** 3


def ksum_to_subsetsum(sets, T: int) -> SubsetSumInstance:
    """One value per k-Sum entry: a + 2^(c+L+i) (checklist bit of set i) + 2^(c+2L+k)
    (one unit of the counter), where c = bitlength(D) and L = bitlength(k).

    Low to high: value bits, L-bit buffer, k checklist bits, L-bit buffer,
    counter.  Picking m values puts m in the counter; the target length caps m
    below 2^L, which keeps the lower fields from carrying, so m = k and the
    checklist forces one value per set.  k = 1 needs no counter.
    """
    sets = [[int(a) for a in S] for S in sets]
    k = len(sets)
    if k < 1:
        raise ParameterError("need at least one set")
    if any(a < 0 for S in sets for a in S):
        raise ParameterError("k-Sum values must lie in [0, D]")
    D = max([a for S in sets for a in S] + [1])
    c = D.bit_length()
    meta = {"k": k, "D": D, "c": c, "g": g(k)}
    if T < 0 or T > k * D:
        # out of reach: a canonical unsolvable instance
        return SubsetSumInstance([], 1, {**meta, "trivial_no": True})
    if k == 1:
        top = 1 << c
        return SubsetSumInstance([a + top for a in sets[0]], T + top, meta)
    L = k.bit_length()
    check = c + L
    counter = c + 2 * L + k
    values = [a + (1 << (check + i)) + (1 << counter) for i, S in enumerate(sets) for a in S]
    target = T + (((1 << k) - 1) << check) + (k << counter)
    return SubsetSumInstance(values, target, meta)


def hyperclique_to_ksum(hg: Hypergraph, h: int, r1: int, eps: float):
    """All-weights special case (beta = 1, no edge part): every pattern vertex of
    TWL(h, r1, 0) is isolated, so the weighted instance is a k-Sum over its
    preimages with target 0.  Returns (sets, target, info)."""
    if r1 < 1:
        raise ParameterError("need r1 >= 1")
    k = hg.color_count
    if k == 0 or k % (h * r1):
        raise ParameterError(f"color count {k} must be a positive multiple of h*r1 = {h * r1}")
    _check_colored(hg, h, k)
    inst, info = _weighted(hg, h, r1, 0, k // (h * r1), 0, eps)
    sets = [[inst.weights.values[v] for v in inst.preimage(x)] for x in range(inst.k)]
    return sets, 0, info


def hyperclique_to_subsetsum(hg: Hypergraph, h: int, r1: int, eps: float) -> SubsetSumInstance:
    """Shift every k-Sum set to start at 0 (the target moves by the same
    amounts), then apply ksum_to_subsetsum."""
    sets, target, info = hyperclique_to_ksum(hg, h, r1, eps)
    if any(not S for S in sets):
        return SubsetSumInstance([], 1, {"trivial_no": True})
    shifted = []
    for S in sets:
        low = min(S)
        shifted.append([a - low for a in S])
        target -= low
    out = ksum_to_subsetsum(shifted, target)
    out.metadata.update(sets=len(sets), block_bits=info.block_bits)
    return out


SUBSET_SUM_CAP = 5 * 10**7


def subset_sum_dp(values, T: int, witness: bool = False):
    """Reachable-sum table over [0, T] as a numpy boolean array.

    With witness=True one packed snapshot per value is kept for the backward
    pass; returns (bool, list of chosen indices or None).
    """
    if T < 0:
        return (False, None) if witness else False
    if T > SUBSET_SUM_CAP:
        raise SizeLimitError(f"target {T} exceeds the table cap {SUBSET_SUM_CAP}")
    reach = np.zeros(T + 1, dtype=bool)
    reach[0] = True
    snaps = []
    for a in values:
        a = int(a)
        if witness:
            snaps.append(np.packbits(reach))
        if a == 0 or a > T:
            continue
        reach[a:] |= reach[:-a].copy()
    ok = bool(reach[T])
    if not witness:
        return ok
    if not ok:
        return False, None
    chosen, s = [], T
    for i in range(len(values) - 1, -1, -1):
        before = np.unpackbits(snaps[i], count=T + 1).astype(bool)
        if not before[s]:
            chosen.append(i)
            s -= int(values[i])
    assert s == 0
    return True, sorted(chosen)
