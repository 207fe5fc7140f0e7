"""Multiplication kernels.

* boolean k-wise matrix product (dense, bit-packed and einsum kernels),
* exact matrix products in the boolean or integer semiring,
* k-wise products of tensors whose entries are Laurent polynomials,
* boolean convolution of finitely supported weight sequences.

Polynomial entries are stored as a trailing coefficient axis plus a shared
lowest exponent.  All arithmetic is exact integer arithmetic unless the
optional FFT evaluation is requested.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ContractError, ShapeError

# ---------------------------------------------------------------- containers


@dataclass
class BoolTensor:
    entries: np.ndarray
    axis_labels: tuple = ()

    def __post_init__(self):
        self.entries = np.asarray(self.entries, dtype=bool)
        if not self.axis_labels:
            self.axis_labels = tuple(range(self.entries.ndim))
        if len(set(self.axis_labels)) != len(self.axis_labels):
            raise ShapeError("axis labels must be distinct")
        if len(self.axis_labels) != self.entries.ndim:
            raise ShapeError("one label per axis")
        if len(set(self.entries.shape)) > 1:
            raise ShapeError("all sides of a tensor must agree")

    @property
    def order(self) -> int:
        return self.entries.ndim

    @property
    def side(self) -> int:
        return self.entries.shape[0] if self.entries.ndim else 1


@dataclass
class PolyTensor:
    """coeffs[i_1..i_q, j] is the coefficient of x^(low + j) in entry (i_1..i_q)."""

    coeffs: np.ndarray
    low: int = 0
    axis_labels: tuple = ()
    degree_bound: int | None = None

    def __post_init__(self):
        self.coeffs = np.asarray(self.coeffs)
        if self.coeffs.ndim < 1:
            raise ShapeError("coefficient axis missing")
        q = self.coeffs.ndim - 1
        if not self.axis_labels:
            self.axis_labels = tuple(range(q))
        if len(self.axis_labels) != q or len(set(self.axis_labels)) != q:
            raise ShapeError("one distinct label per tensor axis")
        if len(set(self.coeffs.shape[:-1])) > 1:
            raise ShapeError("all sides of a tensor must agree")
        if self.degree_bound is not None:
            lo, hi = self.support()
            D = self.degree_bound
            if lo is not None and (lo < -D or hi > D):
                raise ContractError(f"exponents [{lo},{hi}] exceed the bound {D}")

    @property
    def order(self) -> int:
        return self.coeffs.ndim - 1

    @property
    def side(self) -> int:
        return self.coeffs.shape[0]

    def support(self):
        nz = np.nonzero(self.coeffs.reshape(-1, self.coeffs.shape[-1]).any(axis=0))[0]
        if len(nz) == 0:
            return None, None
        return self.low + int(nz[0]), self.low + int(nz[-1])

    def entry(self, idx) -> dict:
        row = self.coeffs[tuple(idx)]
        return {self.low + j: int(c) for j, c in enumerate(row) if c}


@dataclass
class WeightSeq:
    """Finitely supported boolean function on the integers: bits[j] <-> offset + j."""

    offset: int = 0
    bits: np.ndarray = None

    def __post_init__(self):
        b = np.zeros(0, dtype=bool) if self.bits is None else np.asarray(self.bits, dtype=bool)
        nz = np.nonzero(b)[0]
        if len(nz) == 0:
            self.offset, self.bits = 0, np.zeros(0, dtype=bool)
        else:
            self.offset = int(self.offset) + int(nz[0])
            self.bits = b[nz[0]: nz[-1] + 1].copy()

    @classmethod
    def from_set(cls, values) -> "WeightSeq":
        values = sorted(set(int(v) for v in values))
        if not values:
            return cls()
        b = np.zeros(values[-1] - values[0] + 1, dtype=bool)
        b[np.array(values) - values[0]] = True
        return cls(values[0], b)

    def to_set(self) -> set:
        return {self.offset + int(j) for j in np.nonzero(self.bits)[0]}

    def __contains__(self, w) -> bool:
        j = w - self.offset
        return 0 <= j < len(self.bits) and bool(self.bits[j])

    @property
    def empty(self) -> bool:
        return len(self.bits) == 0


@dataclass(frozen=True)
class MMBackend:
    """Matrix-multiplication implementation tag.

    Cost symbols (omega, omega(z)) are documentation only; both backends are
    schoolbook algorithms and agree bit for bit.
    """

    tag: str = "blocked"
    block: int = 256


NAIVE = MMBackend("naive")
BLOCKED = MMBackend("blocked")

# ------------------------------------------------------------------ matmul


def matmul(A: np.ndarray, B: np.ndarray, backend: MMBackend | str = BLOCKED,
           semiring: str = "bool") -> np.ndarray:
    """A (r x s) times B (s x t) over the boolean or the integer semiring."""
    if isinstance(backend, str):
        backend = MMBackend(backend)
    A = np.asarray(A)
    B = np.asarray(B)
    if A.ndim != 2 or B.ndim != 2 or A.shape[1] != B.shape[0]:
        raise ShapeError(f"cannot multiply {A.shape} by {B.shape}")
    if semiring not in ("bool", "int"):
        raise ValueError(f"unknown semiring {semiring!r}")
    r, s = A.shape
    t = B.shape[1]
    if backend.tag == "naive":
        if semiring == "bool":
            A, B = A.astype(bool), B.astype(bool)
            out = np.zeros((r, t), dtype=bool)
            for i in range(r):
                rows = B[A[i]]
                if len(rows):
                    out[i] = rows.any(axis=0)
            return out
        A, B = A.astype(np.int64), B.astype(np.int64)
        out = np.zeros((r, t), dtype=np.int64)
        for i in range(r):
            out[i] = A[i] @ B
        return out
    if backend.tag != "blocked":
        raise ValueError(f"unknown backend {backend.tag!r}")
    bs = backend.block
    if semiring == "bool":
        # float32 tiles: partial counts stay far below 2^24, so the test is exact
        out = np.zeros((r, t), dtype=bool)
        Af = A.astype(np.float32)
        Bf = B.astype(np.float32)
        for k0 in range(0, s, bs):
            out |= (Af[:, k0:k0 + bs] @ Bf[k0:k0 + bs]) > 0.5
        return out
    A, B = A.astype(np.int64), B.astype(np.int64)
    out = np.zeros((r, t), dtype=np.int64)
    for k0 in range(0, s, bs):
        out += A[:, k0:k0 + bs] @ B[k0:k0 + bs]
    return out


def poly_matmul(A: np.ndarray, B: np.ndarray, backend: MMBackend | str = BLOCKED,
                semiring: str = "int") -> np.ndarray:
    """Matrices of polynomials: A (r, s, La) times B (s, t, Lb) -> (r, t, La+Lb-1).

    One ordinary product per coefficient of the shorter operand, shifted into place.
    """
    r, s, La = A.shape
    s2, t, Lb = B.shape
    if s != s2:
        raise ShapeError(f"cannot multiply {A.shape} by {B.shape}")
    dtype = bool if semiring == "bool" else np.int64
    out = np.zeros((r, t, La + Lb - 1), dtype=dtype)
    Bflat = B.reshape(s, t * Lb)
    for a in range(La):
        Aa = A[:, :, a]
        if not Aa.any():
            continue
        prod = matmul(Aa, Bflat, backend, semiring).reshape(r, t, Lb)
        if semiring == "bool":
            out[:, :, a:a + Lb] |= prod
        else:
            out[:, :, a:a + Lb] += prod
    return out


# ---------------------------------------------------- boolean k-wise product


def _arrays(tensors) -> list[np.ndarray]:
    arrs = [t.entries if isinstance(t, BoolTensor) else np.asarray(t, dtype=bool) for t in tensors]
    q = len(arrs)
    if q < 2:
        raise ShapeError("the k-wise product needs at least two tensors")
    shape = arrs[0].shape
    if len(shape) != q or any(a.shape != shape for a in arrs) or len(set(shape)) > 1:
        raise ShapeError(f"expected {q} tensors of order {q} and equal side")
    return arrs


def _kwise_dense(arrs):
    q = len(arrs)
    n = arrs[0].shape[0]
    out = np.zeros((n,) * q, dtype=bool)
    for l in range(n):
        acc = None
        for j, A in enumerate(arrs):
            sl = np.expand_dims(np.take(A, l, axis=j), j)
            acc = sl if acc is None else (acc & sl)
        out |= acc
    return out


def _pack(A):
    """Pack the last axis into uint64 words (little-endian bit order)."""
    n = A.shape[-1]
    W = max(1, -(-n // 64))
    pad = np.zeros(A.shape[:-1] + (W * 64,), dtype=bool)
    pad[..., :n] = A
    return np.packbits(pad, axis=-1, bitorder="little").view(np.uint64)


def _unpack(P, n):
    bits = np.unpackbits(P.view(np.uint8), axis=-1, bitorder="little")
    return bits[..., :n].astype(bool)


def _kwise_packed(arrs):
    q = len(arrs)
    n = arrs[0].shape[0]
    packed = [_pack(A) for A in arrs[:-1]]
    last = arrs[-1]
    W = packed[0].shape[-1]
    out = np.zeros((n,) * (q - 1) + (W,), dtype=np.uint64)
    full = np.uint64(0xFFFFFFFFFFFFFFFF)
    for l in range(n):
        acc = None
        for j, P in enumerate(packed):
            sl = np.expand_dims(np.take(P, l, axis=j), j)
            acc = sl if acc is None else (acc & sl)
        # last tensor carries l on the packed axis: its slice broadcasts as a full word
        words = np.where(last[..., l], full, np.uint64(0))[..., None]
        out |= acc & words
    return _unpack(out, n)


def _kwise_einsum(arrs):
    q = len(arrs)
    letters = "abcdefghijklmnopqrstuvwxy"
    if q >= len(letters):
        return _kwise_dense(arrs)
    idx = letters[:q]
    l = "z"
    subs = [idx[:j] + l + idx[j + 1:] for j in range(q)]
    expr = ",".join(subs) + "->" + idx
    counts = np.einsum(expr, *[a.astype(np.int32) for a in arrs])
    return counts > 0


KERNELS = {"dense": _kwise_dense, "packed": _kwise_packed, "einsum": _kwise_einsum}


def kwise_product_bool(tensors: Sequence, kernel: str = "dense"):
    """out[i_1..i_q] = OR_l AND_j A^j[i_1..i_{j-1}, l, i_{j+1}..i_q]."""
    arrs = _arrays(tensors)
    out = KERNELS[kernel](arrs)
    if tensors and isinstance(tensors[0], BoolTensor):
        return BoolTensor(out, tensors[0].axis_labels)
    return out


# ------------------------------------------------- polynomial tensor products


def conv_last(X: np.ndarray, Y: np.ndarray, semiring: str = "int") -> np.ndarray:
    """Entrywise polynomial product along the trailing axis, with broadcasting."""
    Lx, Ly = X.shape[-1], Y.shape[-1]
    if Lx > Ly:
        X, Y, Lx, Ly = Y, X, Ly, Lx
    lead = np.broadcast_shapes(X.shape[:-1], Y.shape[:-1])
    if semiring == "bool":
        out = np.zeros(lead + (Lx + Ly - 1,), dtype=bool)
        for a in range(Lx):
            out[..., a:a + Ly] |= X[..., a:a + 1] & Y
        return out
    out = np.zeros(lead + (Lx + Ly - 1,), dtype=np.result_type(X.dtype, Y.dtype, np.int64))
    for a in range(Lx):
        out[..., a:a + Ly] += X[..., a:a + 1] * Y
    return out


def kwise_poly_arrays(arrs: Sequence[np.ndarray], semiring: str = "int",
                      mode: str = "exact") -> np.ndarray:
    """k-wise product of coefficient arrays shaped (n,)*q + (L_j,); exponents add."""
    q = len(arrs)
    if q < 2:
        raise ShapeError("the k-wise product needs at least two tensors")
    n = arrs[0].shape[0]
    for A in arrs:
        if A.ndim != q + 1 or any(s != n for s in A.shape[:-1]):
            raise ShapeError("expected q tensors of order q and equal side")
    Ltot = sum(A.shape[-1] for A in arrs) - q + 1
    if mode == "fft":
        return _kwise_poly_fft(arrs, Ltot, semiring)
    dtype = bool if semiring == "bool" else np.int64
    out = np.zeros((n,) * q + (Ltot,), dtype=dtype)
    if n == 0:
        return out
    # fold the longest sequences last so each step loops over the short side
    order = sorted(range(q), key=lambda j: arrs[j].shape[-1])
    for l in range(n):
        acc = None
        for j in order:
            sl = np.expand_dims(np.take(arrs[j], l, axis=j), j)
            if semiring == "bool":
                sl = sl.astype(bool)
            acc = sl if acc is None else conv_last(acc, sl, semiring)
        if semiring == "bool":
            out |= acc
        else:
            out += acc
    return out


def _kwise_poly_fft(arrs, Ltot, semiring):
    # Evaluate at roots of unity; coefficients are recovered by rounding, which is
    # exact while the accumulated float error stays below 0.5.
    q = len(arrs)
    n = arrs[0].shape[0]
    size = 1 << max(0, (Ltot - 1).bit_length())
    F = [np.fft.rfft(A.astype(np.float64), size, axis=-1) for A in arrs]
    acc_total = np.zeros((n,) * q + (F[0].shape[-1],), dtype=np.complex128)
    for l in range(n):
        acc = None
        for j in range(q):
            sl = np.expand_dims(np.take(F[j], l, axis=j), j)
            acc = sl if acc is None else acc * sl
        acc_total += acc
    vals = np.fft.irfft(acc_total, size, axis=-1)[..., :Ltot]
    if semiring == "bool":
        return vals > 0.5
    return np.rint(vals).astype(np.int64)


def kwise_product_poly(tensors: Sequence[PolyTensor], degree_bound: int | None = None,
                       mode: str = "exact", semiring: str = "int") -> PolyTensor:
    """k-wise product of Laurent-polynomial tensors (exact by default)."""
    if len(tensors) < 2:
        raise ShapeError("the k-wise product needs at least two tensors")
    if degree_bound is not None:
        for t in tensors:
            lo, hi = t.support()
            if lo is not None and (lo < -degree_bound or hi > degree_bound):
                raise ContractError(f"input exponents [{lo},{hi}] exceed bound {degree_bound}")
    coeffs = kwise_poly_arrays([t.coeffs for t in tensors], semiring=semiring, mode=mode)
    low = sum(t.low for t in tensors)
    D = None if degree_bound is None else len(tensors) * degree_bound
    return PolyTensor(coeffs, low, tensors[0].axis_labels, D)


# ------------------------------------------------------------- convolution


def bool_convolution(f: WeightSeq, g: WeightSeq) -> WeightSeq:
    """(f * g)(x) = OR_z f(z) AND g(x - z)."""
    if f.empty or g.empty:
        return WeightSeq()
    c = np.convolve(f.bits.astype(np.int64), g.bits.astype(np.int64))
    return WeightSeq(f.offset + g.offset, c > 0)
