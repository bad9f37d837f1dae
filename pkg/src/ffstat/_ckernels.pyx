# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: incremental (odometer) sweeps of the index space.

Monic indices are enumerated in increasing order while the derived quantity
(product digits for the sieve, residue digits for progressions) is updated
under the single low digit that changed, so the cost per element is
O(deg p) or O(deg Q) instead of a full convolution per element.
"""

import numpy as np

ctypedef unsigned char u8
ctypedef signed char s8
ctypedef unsigned short u16
ctypedef unsigned int u32
ctypedef long long i64

cdef enum:
    SPF_NONE = 0xFF
    MAX_DEG = 64


def mark_products(spf_deg, spf_idx, quo, p_low, int dp, p_idx, int s, kf):
    """One sieve pass: mark p*g over all monic g of degree s, skip marked."""
    cdef u8[::1] deg_v = spf_deg
    cdef u32[::1] idx_v = spf_idx
    cdef u32[::1] quo_v = quo
    cdef u16[::1] p_v = np.ascontiguousarray(p_low, dtype=np.uint16)
    cdef int q = kf.q
    cdef bint prime = kf.prime
    cdef u32 pmark = p_idx
    cdef int m = dp + s
    if m >= MAX_DEG:
        raise ValueError(f"degree {m} exceeds kernel limit {MAX_DEG}")

    cdef u16[:, ::1] add_t, sub_t, mul_t
    dummy = np.zeros((1, 1), dtype=np.uint16)
    if prime:
        add_t = dummy
        sub_t = dummy
        mul_t = dummy
    else:
        add_t = kf.add
        sub_t = kf.sub
        mul_t = kf.mul

    cdef i64 qpow[MAX_DEG]
    cdef int gd[MAX_DEG]
    cdef int fd[MAX_DEG]
    cdef i64 total = 1
    cdef int t, i, j
    qpow[0] = 1
    for t in range(1, m):
        qpow[t] = qpow[t - 1] * q
    for t in range(s):
        total *= q
        gd[t] = 0
    # start at g = T**s, so f = p * T**s
    cdef i64 fidx = 0
    for t in range(m):
        fd[t] = 0
    for i in range(dp):
        fd[s + i] = p_v[i]
        fidx += <i64> p_v[i] * qpow[s + i]

    cdef i64 g_idx
    cdef int old, new, pos, pc, nf, delta, contrib
    with nogil:
        for g_idx in range(total):
            if deg_v[fidx] == SPF_NONE:
                deg_v[fidx] = <u8> dp
                idx_v[fidx] = pmark
                quo_v[fidx] = <u32> g_idx
            if g_idx + 1 == total:
                break
            j = 0
            while True:
                old = gd[j]
                new = old + 1
                if new == q:
                    new = 0
                gd[j] = new
                if prime:
                    delta = new - old
                    if delta < 0:
                        delta += q
                else:
                    delta = sub_t[new, old]
                for i in range(dp + 1):
                    pc = 1 if i == dp else p_v[i]
                    if pc == 0:
                        continue
                    pos = j + i
                    if prime:
                        nf = fd[pos] + (delta * pc) % q
                        if nf >= q:
                            nf -= q
                    else:
                        contrib = mul_t[delta, pc]
                        nf = add_t[fd[pos], contrib]
                    fidx += (<i64> nf - <i64> fd[pos]) * qpow[pos]
                    fd[pos] = nf
                if new != 0:
                    break
                j += 1


ctypedef fused table_t:
    u8
    s8
    u32
    i64


def corr_fold_raw(table_t[::1] a, table_t[::1] b, i64[::1] perm):
    """int64 fold over a range the caller has already bound-checked."""
    cdef Py_ssize_t N = a.shape[0]
    cdef Py_ssize_t L = perm.shape[0]
    cdef Py_ssize_t rows = N // L
    cdef i64 acc = 0
    cdef Py_ssize_t r, l, base
    with nogil:
        for r in range(rows):
            base = r * L
            for l in range(L):
                acc += (<i64> a[base + l]) * (<i64> b[base + perm[l]])
    return acc


def residues_mod(int n, rmat, kf):
    """Residue-class index of every monic f of degree n modulo Q."""
    cdef u16[:, ::1] rows = np.ascontiguousarray(rmat, dtype=np.uint16)
    cdef int q = kf.q
    cdef bint prime = kf.prime
    cdef int dq = rows.shape[1]
    if n >= MAX_DEG or dq >= MAX_DEG:
        raise ValueError(f"degree exceeds kernel limit {MAX_DEG}")

    cdef u16[:, ::1] add_t, sub_t, mul_t
    dummy = np.zeros((1, 1), dtype=np.uint16)
    if prime:
        add_t = dummy
        sub_t = dummy
        mul_t = dummy
    else:
        add_t = kf.add
        sub_t = kf.sub
        mul_t = kf.mul

    cdef i64 total = 1
    cdef int t, j
    cdef int gd[MAX_DEG]
    cdef int rd[MAX_DEG]
    cdef i64 qpow[MAX_DEG]
    qpow[0] = 1
    for t in range(1, dq):
        qpow[t] = qpow[t - 1] * q
    for t in range(n):
        total *= q
        gd[t] = 0
    out = np.empty(total, dtype=np.uint32)
    cdef u32[::1] out_v = out
    # start at f = T**n
    cdef i64 ridx = 0
    for t in range(dq):
        rd[t] = rows[n, t]
        ridx += <i64> rd[t] * qpow[t]

    cdef i64 g_idx
    cdef int old, new, delta, rt, nf, contrib
    with nogil:
        for g_idx in range(total):
            out_v[g_idx] = <u32> ridx
            if g_idx + 1 == total:
                break
            j = 0
            while True:
                old = gd[j]
                new = old + 1
                if new == q:
                    new = 0
                gd[j] = new
                if prime:
                    delta = new - old
                    if delta < 0:
                        delta += q
                else:
                    delta = sub_t[new, old]
                for t in range(dq):
                    rt = rows[j, t]
                    if rt == 0:
                        continue
                    if prime:
                        nf = rd[t] + (delta * rt) % q
                        if nf >= q:
                            nf -= q
                    else:
                        contrib = mul_t[delta, rt]
                        nf = add_t[rd[t], contrib]
                    ridx += (<i64> nf - <i64> rd[t]) * qpow[t]
                    rd[t] = nf
                if new != 0:
                    break
                j += 1
    return out
