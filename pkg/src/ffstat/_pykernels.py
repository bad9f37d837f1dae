"""NumPy implementations of the hot kernels.

Selected at import time when the compiled extension is unavailable (or
disabled via FFSTAT_PURE_PYTHON=1).  Semantics are identical to the Cython
versions; the work is organised as chunked vectorized passes instead of the
extension's single incremental sweep.
"""

from __future__ import annotations

import numpy as np

_CHUNK = 1 << 17
_SPF_NONE = 0xFF


def _digit_matrix(start: int, stop: int, q: int, width: int) -> np.ndarray:
    """Base-q digits of [start, stop) as an int64 (stop-start, width) matrix."""
    out = np.empty((stop - start, width), dtype=np.int64)
    v = np.arange(start, stop, dtype=np.int64)
    for j in range(width):
        out[:, j] = v % q
        v //= q
    return out


def mark_products(spf_deg, spf_idx, quo, p_low, dp, p_idx, s, kf):
    q = kf.q
    m = dp + s
    qpow = q ** np.arange(m, dtype=np.int64)
    total = q**s
    for start in range(0, total, _CHUNK):
        stop = min(start + _CHUNK, total)
        G = _digit_matrix(start, stop, q, s)
        if kf.prime:
            F = np.zeros((stop - start, m), dtype=np.int64)
            for i in range(dp):
                if p_low[i]:
                    F[:, i : i + s] += int(p_low[i]) * G
            F[:, dp : dp + s] += G  # leading coefficient of p
            for i in range(dp):  # leading coefficient of g
                if p_low[i]:
                    F[:, s + i] += int(p_low[i])
            F %= q
        else:
            add, mul = kf.add, kf.mul
            Gu = G.astype(np.uint16)
            F = np.zeros((stop - start, m), dtype=np.uint16)
            for i in range(dp):
                if p_low[i]:
                    contrib = mul[int(p_low[i])][Gu]
                    F[:, i : i + s] = add[F[:, i : i + s], contrib]
            F[:, dp : dp + s] = add[F[:, dp : dp + s], Gu]
            for i in range(dp):
                if p_low[i]:
                    F[:, s + i] = add[F[:, s + i], np.uint16(p_low[i])]
            F = F.astype(np.int64)
        prod = F @ qpow
        fresh = spf_deg[prod] == _SPF_NONE
        tgt = prod[fresh]
        spf_deg[tgt] = dp
        spf_idx[tgt] = p_idx
        quo[tgt] = np.arange(start, stop, dtype=np.int64)[fresh]


def corr_fold_raw(a, b, perm) -> int:
    """int64 fold over a range the caller has already bound-checked."""
    L = int(perm.shape[0])
    A = a.reshape(-1, L).astype(np.int64)
    B = b.reshape(-1, L).astype(np.int64)[:, perm]
    return int((A * B).sum(dtype=np.int64))


def residues_mod(n, rmat, kf):
    q = kf.q
    dq = int(rmat.shape[1])
    total = q**n
    out = np.empty(total, dtype=np.uint32)
    qpow = q ** np.arange(dq, dtype=np.int64)
    for start in range(0, total, _CHUNK):
        stop = min(start + _CHUNK, total)
        G = _digit_matrix(start, stop, q, n)
        if kf.prime:
            R = np.tile(rmat[n].astype(np.int64), (stop - start, 1))
            for i in range(n):
                row = rmat[i]
                for t in np.nonzero(row)[0]:
                    R[:, t] += G[:, i] * int(row[t])
            R %= q
        else:
            add, mul = kf.add, kf.mul
            R = np.tile(rmat[n].astype(np.uint16), (stop - start, 1))
            Gu = G.astype(np.uint16)
            for i in range(n):
                row = rmat[i]
                for t in np.nonzero(row)[0]:
                    contrib = mul[int(row[t])][Gu[:, i]]
                    R[:, t] = add[R[:, t], contrib]
            R = R.astype(np.int64)
        out[start:stop] = (R @ qpow).astype(np.uint32)
    return out
