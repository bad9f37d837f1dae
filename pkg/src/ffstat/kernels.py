"""Hot-kernel dispatch: compiled core with a NumPy fallback.

The three inner loops that dominate runtime are implemented twice, once in
Cython (``ffstat._ckernels``) and once vectorized in NumPy
(``ffstat._pykernels``):

- ``mark_products``  one smallest-prime-factor marking pass of the sieve
- ``corr_fold_raw``  int64 correlation fold over one index range
- ``residues_mod``   residue-class index of every monic f modulo Q

The backend is chosen once at import: compiled when importable, unless
``FFSTAT_PURE_PYTHON=1`` forces the fallback.  Both produce bit-identical
arrays, which the test suite asserts.

This module also owns the exactness layer: every public fold returns a
Python int, using int64 fast paths whose safety is proved by an a-priori
bound check and chunk sizing, with an object-dtype fallback should a bound
ever trip.  Results are therefore exact and independent of chunking or
thread count.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import _pykernels

if os.environ.get("FFSTAT_PURE_PYTHON"):
    _backend = _pykernels
    BACKEND = "python"
else:
    try:
        from . import _ckernels as _backend

        BACKEND = "compiled"
    except ImportError:
        _backend = _pykernels
        BACKEND = "python"

SPF_NONE = 0xFF  # spf_deg sentinel: no prime factor of degree <= m/2 found
_INT64_SAFE = 1 << 62


def get_backend(name: str):
    """Return a backend module by name ("python" or "compiled")."""
    if name == "python":
        return _pykernels
    if name == "compiled":
        from . import _ckernels

        return _ckernels
    raise ValueError(f"unknown backend {name!r}")


@dataclass(frozen=True)
class KernelField:
    """Field data in the flat form the kernels consume."""

    q: int
    p: int
    prime: bool
    add: np.ndarray | None
    sub: np.ndarray | None
    mul: np.ndarray | None

    @classmethod
    def from_field(cls, field) -> "KernelField":
        if field.k == 1:
            return cls(field.q, field.p, True, None, None, None)
        return cls(
            field.q,
            field.p,
            False,
            np.ascontiguousarray(field.add_table()),
            np.ascontiguousarray(field.sub_table()),
            np.ascontiguousarray(field.mul_table()),
        )


def mark_products(spf_deg, spf_idx, quo, p_low, dp, p_idx, s, kf: KernelField):
    """Mark p*g for all monic g of degree s into the degree dp+s arrays.

    Entries already carrying a smaller prime are left untouched; the driver
    iterates primes p in increasing (degree, index) order, so the first
    marker of an entry is its smallest prime factor.
    """
    _backend.mark_products(spf_deg, spf_idx, quo, p_low, dp, p_idx, s, kf)


def residues_mod(n, rmat, kf: KernelField) -> np.ndarray:
    """Residue-class index of every f in M_n modulo Q.

    ``rmat`` row i holds the deg-Q digits of T**i mod Q for i = 0..n.
    """
    return _backend.residues_mod(n, rmat, kf)


def add_shift_perm(kf: KernelField, width: int, k_low_idx: int) -> np.ndarray:
    """Permutation of [0, q**width): index of (digits + K digits) per digit.

    Field addition never carries between digit positions, so adding a shift
    of degree < width permutes the low block of the monic index space.
    """
    q = kf.q
    L = q**width
    vals = np.arange(L, dtype=np.int64)
    out = np.zeros(L, dtype=np.int64)
    scale = 1
    kd = k_low_idx
    v = vals
    for _ in range(width):
        dig = v % q
        kdig = kd % q
        if kf.prime:
            ndig = (dig + kdig) % q
        else:
            ndig = kf.add[dig.astype(np.uint16), np.uint16(kdig)].astype(np.int64)
        out += ndig * scale
        scale *= q
        v = v // q
        kd //= q
    return out


# ---------------------------------------------------------------------------
# Exact accumulation wrappers


def _abs_max(arr) -> int:
    if arr.size == 0:
        return 0
    return max(abs(int(arr.max())), abs(int(arr.min())))


def _chunk_rows(rows: int, L: int, max_prod: int) -> int:
    """Rows per chunk such that a chunk's int64 partial sum cannot overflow."""
    if max_prod == 0:
        return rows
    cap = _INT64_SAFE // max_prod
    return max(1, min(rows, cap // max(L, 1)))


def corr_fold(a, b, perm, threads: int = 1) -> int:
    """Exact sum over f of a[f] * b[f + K], K encoded by the low-block perm."""
    N = int(a.shape[0])
    L = int(perm.shape[0])
    rows = N // L
    max_prod = _abs_max(a) * _abs_max(b)
    if max_prod and L > _INT64_SAFE // max_prod:
        return _corr_fold_object(a, b, perm)
    step = _chunk_rows(rows, L, max_prod)
    spans = [(r, min(r + step, rows)) for r in range(0, rows, step)]

    def run(span):
        r0, r1 = span
        return _backend.corr_fold_raw(a[r0 * L : r1 * L], b[r0 * L : r1 * L], perm)

    if threads > 1 and len(spans) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(run, spans))
    else:
        parts = [run(s) for s in spans]
    return sum(int(x) for x in parts)


def _corr_fold_object(a, b, perm) -> int:
    L = int(perm.shape[0])
    A = a.reshape(-1, L).astype(object)
    B = b.reshape(-1, L).astype(object)[:, perm]
    return int((A * B).sum())


def exact_sum(arr) -> int:
    """Exact sum of an integer array as a Python int."""
    n = int(arr.shape[0])
    mx = _abs_max(arr)
    if mx == 0:
        return 0
    step = max(1, _INT64_SAFE // mx)
    return sum(
        int(arr[i : i + step].sum(dtype=np.int64)) for i in range(0, n, step)
    )


def exact_sum_sq(arr) -> int:
    n = int(arr.shape[0])
    mx = _abs_max(arr)
    if mx == 0:
        return 0
    step = max(1, _INT64_SAFE // (mx * mx))
    total = 0
    for i in range(0, n, step):
        c = arr[i : i + step].astype(np.int64)
        total += int((c * c).sum(dtype=np.int64))
    return total


def fiber_sums(arr, L: int) -> np.ndarray:
    """Per-fiber sums: views arr as (q**(n-h-1), L) blocks and sums rows.

    Safe in int64 whenever L * max|entry| fits, which a bound check asserts;
    desk-scale tables never come close.
    """
    mx = _abs_max(arr)
    if mx and L > _INT64_SAFE // mx:
        return arr.reshape(-1, L).astype(object).sum(axis=1)
    return arr.reshape(-1, L).sum(axis=1, dtype=np.int64)


def class_totals(residx, weights, nclasses: int) -> np.ndarray:
    """Exact per-residue-class totals of integer weights (int64 scatter-add)."""
    total_bound = int(residx.shape[0]) * _abs_max(weights)
    if total_bound >= _INT64_SAFE:
        out = np.zeros(nclasses, dtype=object)
        for r, w in zip(residx.tolist(), weights.tolist()):
            out[r] += int(w)
        return out
    out = np.zeros(nclasses, dtype=np.int64)
    np.add.at(out, residx, weights.astype(np.int64))
    return out
